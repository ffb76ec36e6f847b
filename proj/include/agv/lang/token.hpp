#pragma once

#include "agv/diagnostics.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace agv::lang {

enum class Tok : std::uint8_t {
  // literals and names
  Id, Int, Real, String,
  // punctuation
  Arrow, Implies, Le, Ge, Ne, Lt, Gt, Eq, Assign, Plus, Minus, Star, Slash,
  LParen, RParen, LBrace, RBrace, Comma, Semi, Colon, Dot,
  // keywords
  KwComponent, KwImplementation, KwEnd, KwIn, KwOut, KwAssume, KwGuarantee, KwEq, KwNode,
  KwReturns, KwVar, KwLet, KwTel, KwAssert, KwLemma, KwSubcomponents, KwConnections, KwRecord,
  KwBool, KwInt, KwReal, KwFloor, KwPre, KwIf, KwThen, KwElse, KwAnd, KwOr, KwNot, KwTrue, KwFalse,
  // a character the lexer does not recognise, or an unterminated string
  Error,
};

struct Token {
  Tok kind = Tok::Error;
  std::string text;
  SourceSpan span;

  friend bool operator==(const Token& a, const Token& b) { return a.kind == b.kind && a.text == b.text; }
};

/// Human-readable token name used in diagnostics ("'->'", "identifier", ...).
std::string_view describe(Tok kind);

/// Splits source text into tokens. Unknown characters become Tok::Error tokens;
/// `--` comments and whitespace are skipped. No end-of-input token is appended.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace agv::lang
