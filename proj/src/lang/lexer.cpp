#include "agv/lang/token.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace agv::lang {

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 31> kKeywords{{
    {"component", Tok::KwComponent},
    {"implementation", Tok::KwImplementation},
    {"end", Tok::KwEnd},
    {"in", Tok::KwIn},
    {"out", Tok::KwOut},
    {"assume", Tok::KwAssume},
    {"guarantee", Tok::KwGuarantee},
    {"eq", Tok::KwEq},
    {"node", Tok::KwNode},
    {"returns", Tok::KwReturns},
    {"var", Tok::KwVar},
    {"let", Tok::KwLet},
    {"tel", Tok::KwTel},
    {"assert", Tok::KwAssert},
    {"lemma", Tok::KwLemma},
    {"subcomponents", Tok::KwSubcomponents},
    {"connections", Tok::KwConnections},
    {"record", Tok::KwRecord},
    {"bool", Tok::KwBool},
    {"int", Tok::KwInt},
    {"real", Tok::KwReal},
    {"floor", Tok::KwFloor},
    {"pre", Tok::KwPre},
    {"if", Tok::KwIf},
    {"then", Tok::KwThen},
    {"else", Tok::KwElse},
    {"and", Tok::KwAnd},
    {"or", Tok::KwOr},
    {"not", Tok::KwNot},
    {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},
}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::size_t start, std::uint32_t line, std::uint32_t col) const {
    return Token{kind, std::string(src_.substr(start, pos_ - start)), SourceSpan{line, col, line_, col_}};
  }

  Token next() {
    const std::size_t start = pos_;
    const std::uint32_t line = line_;
    const std::uint32_t col = col_;
    const char c = peek();

    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      const std::string_view word = src_.substr(start, pos_ - start);
      for (const auto& [kw, tok] : kKeywords)
        if (kw == word) return make(tok, start, line, col);
      return make(Tok::Id, start, line, col);
    }

    if (digit(c)) {
      while (digit(peek())) advance();
      if (peek() == '.' && digit(peek(1))) {
        advance();
        while (digit(peek())) advance();
        return make(Tok::Real, start, line, col);
      }
      return make(Tok::Int, start, line, col);
    }

    if (c == '"') {
      advance();
      while (pos_ < src_.size() && peek() != '"' && peek() != '\n') advance();
      if (peek() != '"') return make(Tok::Error, start, line, col);
      advance();
      Token t = make(Tok::String, start, line, col);
      t.text = t.text.substr(1, t.text.size() - 2);
      return t;
    }

    auto two = [&](char second) { return peek(1) == second; };
    Tok kind = Tok::Error;
    std::size_t len = 1;
    switch (c) {
      case '-': if (two('>')) { kind = Tok::Arrow; len = 2; } else { kind = Tok::Minus; } break;
      case '=': if (two('>')) { kind = Tok::Implies; len = 2; } else { kind = Tok::Eq; } break;
      case '<':
        if (two('=')) { kind = Tok::Le; len = 2; }
        else if (two('>')) { kind = Tok::Ne; len = 2; }
        else { kind = Tok::Lt; }
        break;
      case '>': if (two('=')) { kind = Tok::Ge; len = 2; } else { kind = Tok::Gt; } break;
      case ':': if (two('=')) { kind = Tok::Assign; len = 2; } else { kind = Tok::Colon; } break;
      case '+': kind = Tok::Plus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '.': kind = Tok::Dot; break;
      default: break;
    }
    for (std::size_t i = 0; i < len; ++i) advance();
    return make(kind, start, line, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) {
  for (const auto& [kw, tok] : kKeywords)
    if (kw == word) return true;
  return false;
}

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::Id: return "identifier";
    case Tok::Int: return "integer literal";
    case Tok::Real: return "real literal";
    case Tok::String: return "string literal";
    case Tok::Arrow: return "'->'";
    case Tok::Implies: return "'=>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Ne: return "'<>'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Eq: return "'='";
    case Tok::Assign: return "':='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Error: return "invalid character";
    default: break;
  }
  for (const auto& [kw, tok] : kKeywords)
    if (tok == kind) return kw;
  return "?";
}

}  // namespace agv::lang
