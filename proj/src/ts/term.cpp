#include "agv/ts/term.hpp"

#include <sstream>
#include <stdexcept>

namespace agv::ts {

namespace {

std::shared_ptr<Term> node(Op op, ScalarType type) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->type = type;
  return t;
}

ScalarType result_type(Op op, const std::vector<TermPtr>& args) {
  switch (op) {
    case Op::Neg:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return args.front()->type;
    case Op::Ite: return args[1]->type;
    case Op::ToReal: return ScalarType::Real;
    default: return ScalarType::Bool;
  }
}

}  // namespace

TermPtr mk_const(Value v) {
  auto t = node(Op::Const, v.type());
  t->value = std::move(v);
  return t;
}

TermPtr mk_bool(bool b) {
  static const TermPtr t = mk_const(Value::boolean(true));
  static const TermPtr f = mk_const(Value::boolean(false));
  return b ? t : f;
}

TermPtr mk_var(int index, ScalarType type) {
  auto t = node(Op::Var, type);
  t->var = index;
  return t;
}

bool is_true(const TermPtr& t) { return t->op == Op::Const && t->type == ScalarType::Bool && t->value.as_bool(); }
bool is_false(const TermPtr& t) { return t->op == Op::Const && t->type == ScalarType::Bool && !t->value.as_bool(); }

TermPtr mk_not(TermPtr a) {
  if (a->op == Op::Const) return mk_bool(!a->value.as_bool());
  if (a->op == Op::Not) return a->args[0];
  return mk(Op::Not, {std::move(a)});
}

TermPtr mk_and(std::vector<TermPtr> args) {
  std::vector<TermPtr> kept;
  for (auto& a : args) {
    if (is_false(a)) return mk_bool(false);
    if (is_true(a)) continue;
    if (a->op == Op::And) {
      for (const auto& b : a->args) kept.push_back(b);
      continue;
    }
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return mk_bool(true);
  if (kept.size() == 1) return kept.front();
  auto t = node(Op::And, ScalarType::Bool);
  t->args = std::move(kept);
  return t;
}

TermPtr mk_or(std::vector<TermPtr> args) {
  std::vector<TermPtr> kept;
  for (auto& a : args) {
    if (is_true(a)) return mk_bool(true);
    if (is_false(a)) continue;
    if (a->op == Op::Or) {
      for (const auto& b : a->args) kept.push_back(b);
      continue;
    }
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return mk_bool(false);
  if (kept.size() == 1) return kept.front();
  auto t = node(Op::Or, ScalarType::Bool);
  t->args = std::move(kept);
  return t;
}

TermPtr mk_implies(TermPtr a, TermPtr b) {
  if (is_true(a) || is_true(b)) return is_true(a) ? b : mk_bool(true);
  if (is_false(a)) return mk_bool(true);
  if (is_false(b)) return mk_not(std::move(a));
  auto t = node(Op::Implies, ScalarType::Bool);
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr mk_ite(TermPtr c, TermPtr a, TermPtr b) {
  if (is_true(c)) return a;
  if (is_false(c)) return b;
  auto t = node(Op::Ite, a->type);
  t->args = {std::move(c), std::move(a), std::move(b)};
  return t;
}

TermPtr mk_eq(TermPtr a, TermPtr b) { return mk(Op::Eq, {std::move(a), std::move(b)}); }

TermPtr mk(Op op, std::vector<TermPtr> args) {
  switch (op) {
    case Op::And: return mk_and(std::move(args));
    case Op::Or: return mk_or(std::move(args));
    case Op::Implies: return mk_implies(args[0], args[1]);
    case Op::Ite: return mk_ite(args[0], args[1], args[2]);
    case Op::Not:
      if (args[0]->op == Op::Const || args[0]->op == Op::Not) return mk_not(args[0]);
      break;
    default: break;
  }
  auto t = node(op, result_type(op, args));
  t->args = std::move(args);
  return t;
}

Value evaluate(const Term& t, const std::function<Value(int)>& var_value) {
  auto num = [&](std::size_t i) { return evaluate(*t.args[i], var_value).as_rational(); };
  auto make = [&](Rational r) {
    return t.type == ScalarType::Int ? Value::integer(boost::multiprecision::numerator(r)) : Value::real(std::move(r));
  };
  switch (t.op) {
    case Op::Const: return t.value;
    case Op::Var: return var_value(t.var);
    case Op::Not: return Value::boolean(!evaluate(*t.args[0], var_value).as_bool());
    case Op::Neg: return make(-num(0));
    case Op::Add: return make(num(0) + num(1));
    case Op::Sub: return make(num(0) - num(1));
    case Op::Mul: return make(num(0) * num(1));
    case Op::Div: {
      Rational d = num(1);
      return make(d == 0 ? Rational(0) : num(0) / d);
    }
    case Op::Lt: return Value::boolean(num(0) < num(1));
    case Op::Le: return Value::boolean(num(0) <= num(1));
    case Op::Gt: return Value::boolean(num(0) > num(1));
    case Op::Ge: return Value::boolean(num(0) >= num(1));
    case Op::Eq: return Value::boolean(num(0) == num(1));
    case Op::Ne: return Value::boolean(num(0) != num(1));
    case Op::And:
      for (const auto& a : t.args)
        if (!evaluate(*a, var_value).as_bool()) return Value::boolean(false);
      return Value::boolean(true);
    case Op::Or:
      for (const auto& a : t.args)
        if (evaluate(*a, var_value).as_bool()) return Value::boolean(true);
      return Value::boolean(false);
    case Op::Implies:
      return Value::boolean(!evaluate(*t.args[0], var_value).as_bool() || evaluate(*t.args[1], var_value).as_bool());
    case Op::Ite:
      return evaluate(*t.args[0], var_value).as_bool() ? evaluate(*t.args[1], var_value)
                                                        : evaluate(*t.args[2], var_value);
    case Op::ToReal: return Value::real(num(0));
  }
  throw std::logic_error("bad term");
}

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Not: return "not";
    case Op::Neg: return "-";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Eq: return "=";
    case Op::Ne: return "<>";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    case Op::ToReal: return "real";
  }
  return "?";
}

std::string literal(const Value& v) {
  if (v.type() != ScalarType::Real) return v.to_string();
  std::string s = v.to_string();
  if (s.find('/') == std::string::npos) return s + ".0";
  return "(" + s.substr(0, s.find('/')) + ".0/" + s.substr(s.find('/') + 1) + ".0)";
}

}  // namespace

std::string key(const Term& t) {
  std::ostringstream os;
  std::function<void(const Term&)> walk = [&](const Term& x) {
    switch (x.op) {
      case Op::Const: os << literal(x.value) << (x.type == ScalarType::Int ? "i" : ""); return;
      case Op::Var: os << '#' << x.var; return;
      default: break;
    }
    os << '(' << op_name(x.op);
    for (const auto& a : x.args) {
      os << ' ';
      walk(*a);
    }
    os << ')';
  };
  walk(t);
  return os.str();
}

std::string print(const Term& t, const std::function<std::string(int)>& name) {
  switch (t.op) {
    case Op::Const: {
      std::string s = literal(t.value);
      return s[0] == '-' ? "(" + s + ")" : s;
    }
    case Op::Var: return name(t.var);
    case Op::Not: return "(not " + print(*t.args[0], name) + ")";
    case Op::Neg: return "(-" + print(*t.args[0], name) + ")";
    case Op::ToReal: return "real(" + print(*t.args[0], name) + ")";
    case Op::Ite:
      return "(if " + print(*t.args[0], name) + " then " + print(*t.args[1], name) + " else " +
             print(*t.args[2], name) + ")";
    default: break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += std::string(" ") + op_name(t.op) + " ";
    out += print(*t.args[i], name);
  }
  return out + ")";
}

void collect_vars(const Term& t, std::vector<int>& out) {
  if (t.op == Op::Var) {
    out.push_back(t.var);
    return;
  }
  for (const auto& a : t.args) collect_vars(*a, out);
}

}  // namespace agv::ts
