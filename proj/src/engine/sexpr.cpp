#include "agv/engine/sexpr.hpp"

#include <cctype>

namespace agv::engine {

std::string SExpr::to_string() const {
  if (!is_list) return is_string ? "\"" + atom + "\"" : atom;
  std::string s = "(";
  for (std::size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i].to_string();
  return s + ")";
}

namespace {

void skip_space(std::string_view t, std::size_t& pos) {
  while (pos < t.size()) {
    if (std::isspace(static_cast<unsigned char>(t[pos]))) {
      ++pos;
    } else if (t[pos] == ';') {
      while (pos < t.size() && t[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

}  // namespace

std::optional<SExpr> parse_sexpr(std::string_view t, std::size_t& pos) {
  skip_space(t, pos);
  if (pos >= t.size()) return std::nullopt;
  const std::size_t start = pos;
  SExpr e;
  if (t[pos] == '(') {
    ++pos;
    e.is_list = true;
    while (true) {
      skip_space(t, pos);
      if (pos >= t.size()) {
        pos = start;
        return std::nullopt;
      }
      if (t[pos] == ')') {
        ++pos;
        return e;
      }
      auto child = parse_sexpr(t, pos);
      if (!child) {
        pos = start;
        return std::nullopt;
      }
      e.list.push_back(std::move(*child));
    }
  }
  if (t[pos] == '"') {
    ++pos;
    e.is_string = true;
    while (true) {
      if (pos >= t.size()) {
        pos = start;
        return std::nullopt;
      }
      if (t[pos] == '"') {
        if (pos + 1 < t.size() && t[pos + 1] == '"') {  // escaped quote
          e.atom += '"';
          pos += 2;
          continue;
        }
        ++pos;
        return e;
      }
      e.atom += t[pos++];
    }
  }
  if (t[pos] == '|') {
    const std::size_t close = t.find('|', pos + 1);
    if (close == std::string_view::npos) return std::nullopt;
    e.atom = std::string(t.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    return e;
  }
  if (t[pos] == ')') {
    ++pos;
    e.atom = ")";
    return e;
  }
  while (pos < t.size() && !std::isspace(static_cast<unsigned char>(t[pos])) && t[pos] != '(' && t[pos] != ')')
    ++pos;
  // A bare atom at the very end may still be growing.
  if (pos >= t.size()) {
    pos = start;
    return std::nullopt;
  }
  e.atom = std::string(t.substr(start, pos - start));
  return e;
}

bool complete_sexpr(std::string_view text) {
  std::size_t pos = 0;
  return parse_sexpr(text, pos).has_value();
}

std::optional<Rational> to_rational(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom.empty()) return std::nullopt;
    if (auto v = parse_value(e.atom, ScalarType::Real)) return v->as_rational();
    return std::nullopt;
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-") {
    auto a = to_rational(e.list[1]);
    if (!a) return std::nullopt;
    return -*a;
  }
  if (e.list.size() == 3 && !e.list[0].is_list && e.list[0].atom == "/") {
    auto a = to_rational(e.list[1]);
    auto b = to_rational(e.list[2]);
    if (!a || !b || *b == 0) return std::nullopt;
    return *a / *b;
  }
  return std::nullopt;
}

}  // namespace agv::engine
