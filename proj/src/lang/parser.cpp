#include "agv/lang/parser.hpp"

#include <algorithm>
#include <set>

namespace agv::lang {

namespace {

struct SyntaxError {};

class Parser {
 public:
  Parser(std::span<const Token> toks, Diagnostics& diags, std::string file)
      : toks_(toks), diags_(diags), file_(std::move(file)) {}

  ExprPtr whole_expression() {
    try {
      ExprPtr e = expr();
      if (!at_end()) fail();
      return e;
    } catch (const SyntaxError&) {
      return nullptr;
    }
  }

  FileAst file() {
    FileAst ast;
    ast.file = file_;
    while (!at_end()) {
      const std::size_t before = pos_;
      try {
        expected_.clear();
        switch (peek_kind()) {
          case Tok::KwRecord: ast.records.push_back(record()); break;
          case Tok::KwNode: ast.nodes.push_back(node()); break;
          case Tok::KwComponent: ast.components.push_back(component()); break;
          case Tok::KwImplementation: ast.impls.push_back(implementation()); break;
          default:
            expect_any({Tok::KwRecord, Tok::KwNode, Tok::KwComponent, Tok::KwImplementation});
        }
      } catch (const SyntaxError&) {
        recover_top_level(before);
      }
    }
    return ast;
  }

 private:
  // -- token helpers --------------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }
  Tok peek_kind(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead].kind : Tok::Error;
  }
  bool check(Tok k) {
    expected_.insert(k);
    return !at_end() && toks_[pos_].kind == k;
  }
  bool accept(Tok k) {
    if (check(k)) {
      ++pos_;
      expected_.clear();
      return true;
    }
    return false;
  }
  const Token& expect(Tok k) {
    if (!check(k)) fail();
    expected_.clear();
    return toks_[pos_++];
  }
  [[noreturn]] void expect_any(std::initializer_list<Tok> ks) {
    for (Tok k : ks) expected_.insert(k);
    fail();
  }
  SourceSpan here() const {
    if (!at_end()) return toks_[pos_].span;
    if (!toks_.empty()) {
      const auto& s = toks_.back().span;
      return {s.end_line, s.end_col, s.end_line, s.end_col};
    }
    return {1, 1, 1, 1};
  }
  SourceSpan from(const SourceSpan& start) const {
    SourceSpan s = start;
    if (pos_ > 0) {
      s.end_line = toks_[pos_ - 1].span.end_line;
      s.end_col = toks_[pos_ - 1].span.end_col;
    }
    return s;
  }

  [[noreturn]] void fail() {
    std::string msg;
    if (at_end()) {
      msg = "unexpected end of input";
    } else if (toks_[pos_].kind == Tok::Error) {
      msg = "invalid token '" + toks_[pos_].text + "'";
    } else {
      msg = "unexpected " + std::string(describe(toks_[pos_].kind));
      if (toks_[pos_].kind == Tok::Id) msg += " '" + toks_[pos_].text + "'";
    }
    if (!expected_.empty()) {
      std::vector<std::string> names;
      for (Tok k : expected_) names.emplace_back(describe(k));
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      msg += "; expected ";
      if (names.size() > 1) msg += "one of ";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) msg += ", ";
        msg += names[i];
      }
    }
    diags_.error(file_, here(), msg);
    throw SyntaxError{};
  }

  void recover_top_level(std::size_t before) {
    if (pos_ == before && !at_end()) ++pos_;
    while (!at_end()) {
      const Tok k = peek_kind();
      if (k == Tok::KwRecord || k == Tok::KwComponent || k == Tok::KwImplementation) return;
      if (k == Tok::KwNode && (pos_ == 0 || toks_[pos_ - 1].kind == Tok::Semi)) return;
      ++pos_;
    }
  }

  // Skips to just past the next ';' or to a block-level keyword.
  void recover_statement(std::size_t before) {
    if (pos_ == before && !at_end()) ++pos_;
    while (!at_end()) {
      const Tok k = peek_kind();
      if (k == Tok::Semi) {
        ++pos_;
        return;
      }
      if (k == Tok::KwEnd || k == Tok::KwComponent || k == Tok::KwImplementation || k == Tok::KwIn ||
          k == Tok::KwOut || k == Tok::KwAssume || k == Tok::KwGuarantee || k == Tok::KwAssert ||
          k == Tok::KwLemma || k == Tok::KwEq || k == Tok::KwSubcomponents || k == Tok::KwConnections)
        return;
      ++pos_;
    }
  }

  // -- types and names ------------------------------------------------------

  Type type_ref() {
    if (accept(Tok::KwBool)) return Type::boolean();
    if (accept(Tok::KwInt)) return Type::integer();
    if (accept(Tok::KwReal)) return Type::real();
    if (check(Tok::Id)) return Type::record_of(expect(Tok::Id).text);
    expect_any({Tok::KwBool, Tok::KwInt, Tok::KwReal, Tok::Id});
  }

  std::vector<std::string> dotted_path() {
    std::vector<std::string> path{expect(Tok::Id).text};
    while (peek_kind() == Tok::Dot && peek_kind(1) == Tok::Id) {
      ++pos_;
      path.push_back(toks_[pos_++].text);
    }
    return path;
  }

  // -- expressions ----------------------------------------------------------

  ExprPtr expr() { return arrow(); }

  ExprPtr arrow() {
    const SourceSpan start = here();
    ExprPtr lhs = implies();
    if (accept(Tok::Arrow)) return make_binary(BinOp::Arrow, lhs, arrow(), from(start));
    return lhs;
  }

  ExprPtr implies() {
    const SourceSpan start = here();
    ExprPtr lhs = disjunction();
    if (accept(Tok::Implies)) return make_binary(BinOp::Implies, lhs, implies(), from(start));
    return lhs;
  }

  ExprPtr disjunction() {
    const SourceSpan start = here();
    ExprPtr lhs = conjunction();
    while (accept(Tok::KwOr)) lhs = make_binary(BinOp::Or, lhs, conjunction(), from(start));
    return lhs;
  }

  ExprPtr conjunction() {
    const SourceSpan start = here();
    ExprPtr lhs = negation();
    while (accept(Tok::KwAnd)) lhs = make_binary(BinOp::And, lhs, negation(), from(start));
    return lhs;
  }

  ExprPtr negation() {
    const SourceSpan start = here();
    if (accept(Tok::KwNot)) return make_unary(UnOp::Not, negation(), from(start));
    return relation();
  }

  ExprPtr relation() {
    const SourceSpan start = here();
    ExprPtr lhs = additive();
    static constexpr std::pair<Tok, BinOp> kRel[] = {
        {Tok::Lt, BinOp::Lt}, {Tok::Le, BinOp::Le}, {Tok::Gt, BinOp::Gt},
        {Tok::Ge, BinOp::Ge}, {Tok::Eq, BinOp::Eq}, {Tok::Ne, BinOp::Ne},
    };
    for (const auto& [tok, op] : kRel)
      if (accept(tok)) return make_binary(op, lhs, additive(), from(start));
    return lhs;
  }

  ExprPtr additive() {
    const SourceSpan start = here();
    ExprPtr lhs = multiplicative();
    while (true) {
      if (accept(Tok::Plus)) {
        lhs = make_binary(BinOp::Add, lhs, multiplicative(), from(start));
      } else if (accept(Tok::Minus)) {
        lhs = make_binary(BinOp::Sub, lhs, multiplicative(), from(start));
      } else {
        return lhs;
      }
    }
  }

  ExprPtr multiplicative() {
    const SourceSpan start = here();
    ExprPtr lhs = unary();
    while (true) {
      if (accept(Tok::Star)) {
        lhs = make_binary(BinOp::Mul, lhs, unary(), from(start));
      } else if (accept(Tok::Slash)) {
        lhs = make_binary(BinOp::Div, lhs, unary(), from(start));
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    const SourceSpan start = here();
    if (accept(Tok::Minus)) return make_unary(UnOp::Neg, unary(), from(start));
    return postfix();
  }

  ExprPtr postfix() {
    const SourceSpan start = here();
    ExprPtr base = primary();
    while (accept(Tok::LBrace)) {
      const std::string field = expect(Tok::Id).text;
      expect(Tok::Assign);
      ExprPtr value = expr();
      expect(Tok::RBrace);
      base = make_record_update(base, field, value, from(start));
    }
    return base;
  }

  ExprPtr parenthesized_arg() {
    expect(Tok::LParen);
    ExprPtr e = expr();
    expect(Tok::RParen);
    return e;
  }

  ExprPtr primary() {
    const SourceSpan start = here();
    if (check(Tok::Int)) return make_int(expect(Tok::Int).text, start);
    if (check(Tok::Real)) return make_real(expect(Tok::Real).text, start);
    if (accept(Tok::KwTrue)) return make_bool(true, start);
    if (accept(Tok::KwFalse)) return make_bool(false, start);
    if (accept(Tok::KwPre)) return make_pre(parenthesized_arg(), from(start));
    if (accept(Tok::KwFloor)) return make_floor(parenthesized_arg(), from(start));
    if (accept(Tok::KwReal)) return make_to_real(parenthesized_arg(), from(start));
    if (accept(Tok::KwIf)) {
      ExprPtr c = expr();
      expect(Tok::KwThen);
      ExprPtr t = expr();
      expect(Tok::KwElse);
      ExprPtr f = expr();
      return make_ite(c, t, f, from(start));
    }
    if (accept(Tok::LParen)) {
      ExprPtr e = expr();
      expect(Tok::RParen);
      return e;
    }
    if (check(Tok::Id)) {
      std::vector<std::string> path = dotted_path();
      if (accept(Tok::LParen)) {
        std::string name = path.front();
        for (std::size_t i = 1; i < path.size(); ++i) name += "." + path[i];
        std::vector<ExprPtr> args;
        if (!accept(Tok::RParen)) {
          do {
            args.push_back(expr());
          } while (accept(Tok::Comma));
          expect(Tok::RParen);
        }
        return make_call(std::move(name), std::move(args), from(start));
      }
      return make_id(std::move(path), from(start));
    }
    expect_any({Tok::Int, Tok::Real, Tok::KwTrue, Tok::KwFalse, Tok::KwPre, Tok::KwFloor, Tok::KwReal,
                Tok::KwIf, Tok::LParen, Tok::Id, Tok::Minus, Tok::KwNot});
  }

  // -- declarations ---------------------------------------------------------

  RecordDecl record() {
    const SourceSpan start = here();
    expect(Tok::KwRecord);
    RecordDecl r;
    r.name = expect(Tok::Id).text;
    expect(Tok::LBrace);
    while (!accept(Tok::RBrace)) {
      RecordField f;
      f.name = expect(Tok::Id).text;
      expect(Tok::Colon);
      f.type = type_ref();
      expect(Tok::Semi);
      r.fields.push_back(std::move(f));
    }
    accept(Tok::Semi);
    r.span = from(start);
    return r;
  }

  // `a, b : int; c : real` inside node parentheses or after `var`.
  void param_group(std::vector<Param>& out) {
    std::vector<std::pair<std::string, SourceSpan>> names;
    do {
      const Token& t = expect(Tok::Id);
      names.emplace_back(t.text, t.span);
    } while (accept(Tok::Comma));
    expect(Tok::Colon);
    const Type ty = type_ref();
    for (auto& [n, s] : names) out.push_back({n, ty, s});
  }

  std::vector<Param> param_list() {
    std::vector<Param> out;
    expect(Tok::LParen);
    if (accept(Tok::RParen)) return out;
    do {
      param_group(out);
    } while (accept(Tok::Semi) || accept(Tok::Comma));
    expect(Tok::RParen);
    return out;
  }

  NodeDef node() {
    const SourceSpan start = here();
    expect(Tok::KwNode);
    NodeDef n;
    n.name = expect(Tok::Id).text;
    n.inputs = param_list();
    expect(Tok::KwReturns);
    n.outputs = param_list();
    expect(Tok::Semi);
    if (accept(Tok::KwVar)) {
      while (check(Tok::Id)) {
        param_group(n.locals);
        expect(Tok::Semi);
      }
    }
    expect(Tok::KwLet);
    while (!accept(Tok::KwTel)) {
      const SourceSpan eq_start = here();
      NodeEquation eq;
      do {
        eq.lhs.push_back(expect(Tok::Id).text);
      } while (accept(Tok::Comma));
      expect(Tok::Eq);
      eq.rhs = expr();
      expect(Tok::Semi);
      eq.span = from(eq_start);
      n.body.push_back(std::move(eq));
    }
    accept(Tok::Semi);
    n.span = from(start);
    return n;
  }

  EqDecl eq_statement() {
    const SourceSpan start = here();
    expect(Tok::KwEq);
    EqDecl eq;
    do {
      eq.names.push_back(expect(Tok::Id).text);
    } while (accept(Tok::Comma));
    expect(Tok::Colon);
    eq.type = type_ref();
    if (accept(Tok::Eq)) eq.def = expr();
    expect(Tok::Semi);
    eq.span = from(start);
    return eq;
  }

  LabeledExpr labeled(Tok keyword) {
    const SourceSpan start = here();
    expect(keyword);
    LabeledExpr le;
    le.label = expect(Tok::String).text;
    expect(Tok::Colon);
    le.expr = expr();
    expect(Tok::Semi);
    le.span = from(start);
    return le;
  }

  void block_end(const std::string& name) {
    expect(Tok::KwEnd);
    if (check(Tok::Id) && toks_[pos_].text == name) {
      ++pos_;
      while (peek_kind() == Tok::Dot && peek_kind(1) == Tok::Id) pos_ += 2;
    }
    accept(Tok::Semi);
  }

  void misplaced(const SourceSpan& span, std::string_view what, std::string_view where) {
    diags_.error(file_, span, std::string(what) + " statements are only allowed in " + std::string(where));
  }

  ComponentDecl component() {
    const SourceSpan start = here();
    expect(Tok::KwComponent);
    ComponentDecl c;
    c.name = expect(Tok::Id).text;
    while (!check(Tok::KwEnd)) {
      if (at_end()) fail();
      const std::size_t before = pos_;
      try {
        const SourceSpan s = here();
        switch (peek_kind()) {
          case Tok::KwIn:
          case Tok::KwOut: {
            PortDecl p;
            p.dir = accept(Tok::KwIn) ? Direction::In : (expect(Tok::KwOut), Direction::Out);
            p.name = expect(Tok::Id).text;
            expect(Tok::Colon);
            p.type = type_ref();
            expect(Tok::Semi);
            p.span = from(s);
            c.ports.push_back(std::move(p));
            break;
          }
          case Tok::KwAssume: c.assumptions.push_back(labeled(Tok::KwAssume)); break;
          case Tok::KwGuarantee: c.guarantees.push_back(labeled(Tok::KwGuarantee)); break;
          case Tok::KwEq: c.eqs.push_back(eq_statement()); break;
          case Tok::KwNode: c.nodes.push_back(node()); break;
          case Tok::KwAssert:
            assertion();
            misplaced(from(s), "assert", "component implementations");
            break;
          case Tok::KwLemma:
            labeled(Tok::KwLemma);
            misplaced(from(s), "lemma", "component implementations");
            break;
          default:
            expect_any({Tok::KwIn, Tok::KwOut, Tok::KwAssume, Tok::KwGuarantee, Tok::KwEq, Tok::KwNode,
                        Tok::KwEnd});
        }
      } catch (const SyntaxError&) {
        recover_statement(before);
        if (at_end() || peek_kind() == Tok::KwComponent || peek_kind() == Tok::KwImplementation) break;
      }
    }
    block_end(c.name);
    c.span = from(start);
    return c;
  }

  LabeledExpr assertion() {
    const SourceSpan start = here();
    expect(Tok::KwAssert);
    LabeledExpr le;
    le.expr = expr();
    expect(Tok::Semi);
    le.span = from(start);
    return le;
  }

  ImplDecl implementation() {
    const SourceSpan start = here();
    expect(Tok::KwImplementation);
    ImplDecl impl;
    impl.type_name = expect(Tok::Id).text;
    expect(Tok::Dot);
    const Token& suffix = expect(Tok::Id);
    if (suffix.text != "impl")
      diags_.error(file_, suffix.span, "implementation names must have the form <Type>.impl");
    enum class Section { None, Subcomponents, Connections } section = Section::None;
    while (!check(Tok::KwEnd)) {
      if (at_end()) fail();
      const std::size_t before = pos_;
      try {
        const SourceSpan s = here();
        switch (peek_kind()) {
          case Tok::KwSubcomponents: ++pos_; section = Section::Subcomponents; break;
          case Tok::KwConnections: ++pos_; section = Section::Connections; break;
          case Tok::KwAssert: section = Section::None; impl.assertions.push_back(assertion()); break;
          case Tok::KwLemma: section = Section::None; impl.lemmas.push_back(labeled(Tok::KwLemma)); break;
          case Tok::KwEq: section = Section::None; impl.eqs.push_back(eq_statement()); break;
          case Tok::KwNode: section = Section::None; impl.nodes.push_back(node()); break;
          case Tok::KwAssume:
            labeled(Tok::KwAssume);
            misplaced(from(s), "assume", "component types");
            break;
          case Tok::KwGuarantee:
            labeled(Tok::KwGuarantee);
            misplaced(from(s), "guarantee", "component types");
            break;
          case Tok::Id:
            if (section == Section::Subcomponents) {
              SubcomponentDecl sub;
              sub.name = expect(Tok::Id).text;
              expect(Tok::Colon);
              sub.type_name = expect(Tok::Id).text;
              expect(Tok::Semi);
              sub.span = from(s);
              impl.subcomponents.push_back(std::move(sub));
              break;
            }
            if (section == Section::Connections) {
              ConnectionDecl conn;
              conn.source = dotted_path();
              expect(Tok::Arrow);
              conn.target = dotted_path();
              expect(Tok::Semi);
              conn.span = from(s);
              impl.connections.push_back(std::move(conn));
              break;
            }
            [[fallthrough]];
          default:
            expect_any({Tok::KwSubcomponents, Tok::KwConnections, Tok::KwAssert, Tok::KwLemma, Tok::KwEq,
                        Tok::KwNode, Tok::KwEnd});
        }
      } catch (const SyntaxError&) {
        recover_statement(before);
        if (at_end() || peek_kind() == Tok::KwComponent || peek_kind() == Tok::KwImplementation) break;
      }
    }
    block_end(impl.type_name);
    impl.span = from(start);
    return impl;
  }

  std::span<const Token> toks_;
  Diagnostics& diags_;
  std::string file_;
  std::size_t pos_ = 0;
  std::set<Tok> expected_;
};

}  // namespace

ExprPtr parse_expr(std::span<const Token> tokens, Diagnostics& diags, const std::string& file) {
  return Parser(tokens, diags, file).whole_expression();
}

ExprPtr parse_expr(std::string_view source, Diagnostics& diags, const std::string& file) {
  const std::vector<Token> toks = tokenize(source);
  return parse_expr(std::span<const Token>(toks), diags, file);
}

FileAst parse_file(std::string_view source, const std::string& file, Diagnostics& diags) {
  const std::vector<Token> toks = tokenize(source);
  return Parser(std::span<const Token>(toks), diags, file).file();
}

}  // namespace agv::lang
