#pragma once

#include "agv/value.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agv::engine {

/// Minimal S-expression tree for solver replies.
struct SExpr {
  std::string atom;  // empty for lists; |quoted| symbols keep their bars stripped
  std::vector<SExpr> list;
  bool is_list = false;
  bool is_string = false;

  std::string to_string() const;
};

/// Parses one complete S-expression from `text` starting at `pos`; advances
/// `pos`. Returns nullopt if the text ends before the expression does.
std::optional<SExpr> parse_sexpr(std::string_view text, std::size_t& pos);

/// True once `text` holds at least one complete S-expression.
bool complete_sexpr(std::string_view text);

/// Numeric solver output such as `3`, `(- 5)`, `2.5`, `(/ 4.0 3.0)` or
/// `(- (/ 1 3))`.
std::optional<Rational> to_rational(const SExpr& e);

}  // namespace agv::engine
