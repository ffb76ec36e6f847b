#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace agv {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

enum class ScalarType : std::uint8_t { Bool, Int, Real };

std::string_view to_string(ScalarType t);

/// A scalar stream value. Ints and reals share one exact rational payload;
/// booleans use 0/1.
class Value {
 public:
  Value() = default;

  static Value boolean(bool b) { return Value(ScalarType::Bool, b ? 1 : 0); }
  static Value integer(Integer i) { return Value(ScalarType::Int, Rational(std::move(i))); }
  static Value real(Rational r) { return Value(ScalarType::Real, std::move(r)); }
  static Value zero(ScalarType t) { return Value(t, 0); }

  ScalarType type() const { return type_; }
  bool as_bool() const { return num_ != 0; }
  const Rational& as_rational() const { return num_; }
  Integer as_integer() const { return boost::multiprecision::numerator(num_); }

  /// bool: true/false, int: decimal, real: p/q (or p when q = 1).
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.type_ == b.type_ && a.num_ == b.num_;
  }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.type_ != b.type_) return a.type_ < b.type_;
    return a.num_ < b.num_;
  }

 private:
  Value(ScalarType t, Rational r) : type_(t), num_(std::move(r)) {}

  ScalarType type_ = ScalarType::Bool;
  Rational num_ = 0;
};

/// Parses "3", "-3", "4/3", "-4/3", "2.5", "true", "false" for the given type.
std::optional<Value> parse_value(std::string_view text, ScalarType type);

/// Exact value of a decimal literal such as "3.1415" or "0.001".
Rational parse_decimal(std::string_view text);

std::string rational_to_string(const Rational& r);

Integer floor_div(const Rational& r);

}  // namespace agv
