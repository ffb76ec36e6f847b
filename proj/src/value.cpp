#include "agv/value.hpp"

#include <charconv>

namespace agv {

std::string_view to_string(ScalarType t) {
  switch (t) {
    case ScalarType::Bool: return "bool";
    case ScalarType::Int: return "int";
    case ScalarType::Real: return "real";
  }
  return "?";
}

std::string rational_to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string Value::to_string() const {
  switch (type_) {
    case ScalarType::Bool: return as_bool() ? "true" : "false";
    case ScalarType::Int: return as_integer().str();
    case ScalarType::Real: return rational_to_string(num_);
  }
  return "?";
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  Integer digits = 0;
  Integer scale = 1;
  bool after_point = false;
  for (char c : text) {
    if (c == '.') {
      after_point = true;
      continue;
    }
    digits = digits * 10 + (c - '0');
    if (after_point) scale *= 10;
  }
  Rational r(digits, scale);
  return negative ? Rational(-r) : r;
}

namespace {

bool is_integer_text(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

bool is_decimal_text(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  int points = 0;
  for (char c : s) {
    if (c == '.') {
      ++points;
      continue;
    }
    if (c < '0' || c > '9') return false;
  }
  return points <= 1 && s.front() != '.' && s.back() != '.';
}

}  // namespace

std::optional<Value> parse_value(std::string_view text, ScalarType type) {
  switch (type) {
    case ScalarType::Bool:
      if (text == "true") return Value::boolean(true);
      if (text == "false") return Value::boolean(false);
      return std::nullopt;
    case ScalarType::Int:
      if (!is_integer_text(text)) return std::nullopt;
      return Value::integer(Integer(std::string(text)));
    case ScalarType::Real: {
      const auto slash = text.find('/');
      if (slash == std::string_view::npos) {
        if (!is_decimal_text(text)) return std::nullopt;
        return Value::real(parse_decimal(text));
      }
      const auto num = text.substr(0, slash);
      const auto den = text.substr(slash + 1);
      if (!is_integer_text(num) || !is_integer_text(den)) return std::nullopt;
      Integer d(std::string{den});
      if (d == 0) return std::nullopt;
      return Value::real(Rational(Integer(std::string{num}), d));
    }
  }
  return std::nullopt;
}

Integer floor_div(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  Integer q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

}  // namespace agv
