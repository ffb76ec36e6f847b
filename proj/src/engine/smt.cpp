#include "agv/engine/smt.hpp"

#include "agv/engine/sexpr.hpp"

namespace agv::engine {

using ts::Op;
using ts::Term;

std::string smt_sort(ScalarType t) {
  switch (t) {
    case ScalarType::Bool: return "Bool";
    case ScalarType::Int: return "Int";
    case ScalarType::Real: return "Real";
  }
  return "Bool";
}

std::string smt_const(const Value& v) {
  switch (v.type()) {
    case ScalarType::Bool: return v.as_bool() ? "true" : "false";
    case ScalarType::Int: {
      const Integer i = v.as_integer();
      return i < 0 ? "(- " + Integer(-i).str() + ")" : i.str();
    }
    case ScalarType::Real: {
      const Rational& r = v.as_rational();
      const Integer num = boost::multiprecision::numerator(r);
      const Integer den = boost::multiprecision::denominator(r);
      const Integer mag = num < 0 ? Integer(-num) : num;
      std::string s = den == 1 ? mag.str() + ".0" : "(/ " + mag.str() + ".0 " + den.str() + ".0)";
      return num < 0 ? "(- " + s + ")" : s;
    }
  }
  return "false";
}

std::optional<Value> smt_value(const SExpr& e, ScalarType t) {
  if (t == ScalarType::Bool) {
    if (e.is_list) return std::nullopt;
    if (e.atom == "true") return Value::boolean(true);
    if (e.atom == "false") return Value::boolean(false);
    return std::nullopt;
  }
  auto r = to_rational(e);
  if (!r) return std::nullopt;
  if (t == ScalarType::Int) {
    if (boost::multiprecision::denominator(*r) != 1) return std::nullopt;
    return Value::integer(boost::multiprecision::numerator(*r));
  }
  return Value::real(*r);
}

namespace {

bool nonlinear_term(const Term& t) {
  if (t.op == Op::Mul && t.args[0]->op != Op::Const && t.args[1]->op != Op::Const) return true;
  if (t.op == Op::Div && t.args[1]->op != Op::Const) return true;
  for (const auto& a : t.args)
    if (nonlinear_term(*a)) return true;
  return false;
}

}  // namespace

Unroller::Unroller(const ts::TransitionSystem& ts, std::vector<int> cone, Namer namer)
    : ts_(ts), cone_(std::move(cone)), namer_(std::move(namer)) {
  for (int v : cone_) {
    const auto& var = ts_.vars[v];
    for (const auto* t : {&var.def, &var.source, &var.floor_arg})
      if (*t && nonlinear_term(**t)) nonlinear_ = true;
  }
  for (const auto& c : ts_.constraints)
    if (nonlinear_term(*c.term)) nonlinear_ = true;
}

Unroller::Namer Unroller::tagged(const ts::TransitionSystem& ts, const std::string& prefix) {
  return [&ts, prefix](int v, int step) { return "|" + prefix + ts.vars[v].name + "@" + std::to_string(step) + "|"; };
}

std::string Unroller::sort(int var) const { return smt_sort(ts_.vars[var].type); }

std::string Unroller::term(const Term& t, int step) const {
  auto arg = [&](std::size_t i) { return term(*t.args[i], step); };
  auto nary = [&](const char* op) {
    std::string s = std::string("(") + op;
    for (std::size_t i = 0; i < t.args.size(); ++i) s += " " + arg(i);
    return s + ")";
  };
  switch (t.op) {
    case Op::Const: return smt_const(t.value);
    case Op::Var: return name(t.var, step);
    case Op::Not: return nary("not");
    case Op::Neg: return nary("-");
    case Op::Add: return nary("+");
    case Op::Sub: return nary("-");
    case Op::Mul: return nary("*");
    case Op::Div: {
      if (t.args[1]->op == Op::Const) return t.type == ScalarType::Int ? nary("div") : nary("/");
      const std::string zero = t.type == ScalarType::Int ? "0" : "0.0";
      const std::string d = arg(1);
      return "(ite (= " + d + " " + zero + ") " + zero + " (" + (t.type == ScalarType::Int ? "div " : "/ ") + arg(0) +
             " " + d + "))";
    }
    case Op::Lt: return nary("<");
    case Op::Le: return nary("<=");
    case Op::Gt: return nary(">");
    case Op::Ge: return nary(">=");
    case Op::Eq: return nary("=");
    case Op::Ne: return "(not (= " + arg(0) + " " + arg(1) + "))";
    case Op::And: return nary("and");
    case Op::Or: return nary("or");
    case Op::Implies: return nary("=>");
    case Op::Ite: return nary("ite");
    case Op::ToReal: return nary("to_real");
  }
  return "false";
}

std::vector<std::string> Unroller::declarations(int step, const std::function<bool(int)>& filter) const {
  std::vector<std::string> out;
  for (int v : cone_)
    if (!filter || filter(v)) out.push_back("(declare-fun " + name(v, step) + " () " + sort(v) + ")");
  return out;
}

std::vector<std::string> Unroller::transition(int step, bool initial) const {
  std::vector<std::string> out;
  for (int v : cone_) {
    const auto& var = ts_.vars[v];
    switch (var.role) {
      case ts::VarRole::Defined: out.push_back("(= " + name(v, step) + " " + term(*var.def, step) + ")"); break;
      case ts::VarRole::Pre:
        if (step > 0) out.push_back("(= " + name(v, step) + " " + term(*var.source, step - 1) + ")");
        break;
      case ts::VarRole::Init:
        if (step > 0)
          out.push_back("(not " + name(v, step) + ")");
        else if (initial)
          out.push_back(name(v, step));
        break;
      case ts::VarRole::Free: break;
    }
  }
  for (const auto& c : ts_.constraints) out.push_back(term(*c.term, step));
  return out;
}

}  // namespace agv::engine
