#include "agv/lang/printer.hpp"

#include <sstream>

namespace agv::lang {

namespace {

// Binding strength, loosest first. If-then-else is always parenthesised
// when it appears as an operand.
enum Level : int {
  kIte = 0, kArrow = 1, kImplies = 2, kOr = 3, kAnd = 4, kNot = 5, kRel = 6, kAdd = 7, kMul = 8,
  kNeg = 9, kPrimary = 10,
};

int level(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Ite: return kIte;
    case ExprKind::Unary: return e.unop == UnOp::Not ? kNot : kNeg;
    case ExprKind::Binary:
      switch (e.binop) {
        case BinOp::Arrow: return kArrow;
        case BinOp::Implies: return kImplies;
        case BinOp::Or: return kOr;
        case BinOp::And: return kAnd;
        case BinOp::Add:
        case BinOp::Sub: return kAdd;
        case BinOp::Mul:
        case BinOp::Div: return kMul;
        default: return kRel;
      }
    default: return kPrimary;
  }
}

void emit(std::ostream& os, const Expr& e);

void emit_operand(std::ostream& os, const Expr& e, bool parens) {
  if (parens) os << '(';
  emit(os, e);
  if (parens) os << ')';
}

void emit(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::RealLit:
      os << e.text;
      return;
    case ExprKind::Id:
      for (std::size_t i = 0; i < e.path.size(); ++i) os << (i ? "." : "") << e.path[i];
      return;
    case ExprKind::Unary: {
      const Expr& arg = *e.args[0];
      if (e.unop == UnOp::Not) {
        os << "not ";
        emit_operand(os, arg, level(arg) < kNot);
      } else {
        os << '-';
        const bool nested_neg = arg.kind == ExprKind::Unary && arg.unop == UnOp::Neg;
        emit_operand(os, arg, level(arg) < kNeg || nested_neg);
      }
      return;
    }
    case ExprKind::Binary: {
      const int p = level(e);
      const Expr& lhs = *e.args[0];
      const Expr& rhs = *e.args[1];
      const bool right_assoc = e.binop == BinOp::Arrow || e.binop == BinOp::Implies;
      const bool non_assoc = p == kRel;
      const bool lparen = level(lhs) < p || ((right_assoc || non_assoc) && level(lhs) == p);
      const bool rparen = level(rhs) < p || (!right_assoc && level(rhs) == p);
      emit_operand(os, lhs, lparen);
      os << ' ' << to_string(e.binop) << ' ';
      emit_operand(os, rhs, rparen);
      return;
    }
    case ExprKind::Ite:
      os << "if ";
      emit(os, *e.args[0]);
      os << " then ";
      emit(os, *e.args[1]);
      os << " else ";
      emit(os, *e.args[2]);
      return;
    case ExprKind::Pre:
      os << "pre(";
      emit(os, *e.args[0]);
      os << ')';
      return;
    case ExprKind::Floor:
      os << "floor(";
      emit(os, *e.args[0]);
      os << ')';
      return;
    case ExprKind::ToReal:
      os << "real(";
      emit(os, *e.args[0]);
      os << ')';
      return;
    case ExprKind::RecordUpdate:
      emit_operand(os, *e.args[0], level(*e.args[0]) < kPrimary);
      os << " { " << e.field << " := ";
      emit(os, *e.args[1]);
      os << " }";
      return;
    case ExprKind::Call:
      os << e.text << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        emit(os, *e.args[i]);
      }
      os << ')';
      return;
  }
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

void emit_params(std::ostream& os, const std::vector<Param>& ps) {
  os << '(';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) os << "; ";
    os << ps[i].name << " : " << ps[i].type.to_string();
  }
  os << ')';
}

void emit_eq(std::ostream& os, const EqDecl& eq, const std::string& indent) {
  os << indent << "eq ";
  for (std::size_t i = 0; i < eq.names.size(); ++i) os << (i ? ", " : "") << eq.names[i];
  os << " : " << eq.type.to_string();
  if (eq.def) os << " = " << print(*eq.def);
  os << ";\n";
}

void emit_path(std::ostream& os, const std::vector<std::string>& p) {
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "." : "") << p[i];
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  emit(os, e);
  return os.str();
}

std::string print(const NodeDef& n, const std::string& indent) {
  std::ostringstream os;
  os << indent << "node " << n.name;
  emit_params(os, n.inputs);
  os << " returns ";
  emit_params(os, n.outputs);
  os << ";\n";
  if (!n.locals.empty()) {
    os << indent << "var\n";
    for (const auto& l : n.locals) os << indent << "  " << l.name << " : " << l.type.to_string() << ";\n";
  }
  os << indent << "let\n";
  for (const auto& eq : n.body) {
    os << indent << "  ";
    for (std::size_t i = 0; i < eq.lhs.size(); ++i) os << (i ? ", " : "") << eq.lhs[i];
    os << " = " << print(*eq.rhs) << ";\n";
  }
  os << indent << "tel;\n";
  return os.str();
}

std::string print(const FileAst& file) {
  std::ostringstream os;
  bool first = true;
  auto separate = [&] {
    if (!first) os << '\n';
    first = false;
  };
  for (const auto& r : file.records) {
    separate();
    os << "record " << r.name << " {\n";
    for (const auto& f : r.fields) os << "  " << f.name << " : " << f.type.to_string() << ";\n";
    os << "}\n";
  }
  for (const auto& n : file.nodes) {
    separate();
    os << print(n);
  }
  for (const auto& c : file.components) {
    separate();
    os << "component " << c.name << '\n';
    for (const auto& p : c.ports)
      os << "  " << (p.dir == Direction::In ? "in " : "out ") << p.name << " : " << p.type.to_string() << ";\n";
    for (const auto& eq : c.eqs) emit_eq(os, eq, "  ");
    for (const auto& n : c.nodes) os << print(n, "  ");
    for (const auto& a : c.assumptions) os << "  assume " << quoted(a.label) << " : " << print(*a.expr) << ";\n";
    for (const auto& g : c.guarantees) os << "  guarantee " << quoted(g.label) << " : " << print(*g.expr) << ";\n";
    os << "end " << c.name << ";\n";
  }
  for (const auto& impl : file.impls) {
    separate();
    os << "implementation " << impl.type_name << ".impl\n";
    if (!impl.subcomponents.empty()) {
      os << "  subcomponents\n";
      for (const auto& s : impl.subcomponents) os << "    " << s.name << " : " << s.type_name << ";\n";
    }
    if (!impl.connections.empty()) {
      os << "  connections\n";
      for (const auto& conn : impl.connections) {
        os << "    ";
        emit_path(os, conn.source);
        os << " -> ";
        emit_path(os, conn.target);
        os << ";\n";
      }
    }
    for (const auto& eq : impl.eqs) emit_eq(os, eq, "  ");
    for (const auto& n : impl.nodes) os << print(n, "  ");
    for (const auto& a : impl.assertions) os << "  assert " << print(*a.expr) << ";\n";
    for (const auto& l : impl.lemmas) os << "  lemma " << quoted(l.label) << " : " << print(*l.expr) << ";\n";
    os << "end " << impl.type_name << ".impl;\n";
  }
  return os.str();
}

}  // namespace agv::lang
