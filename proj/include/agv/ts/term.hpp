#pragma once

#include "agv/value.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace agv::ts {

enum class Op : std::uint8_t {
  Const, Var, Not, Neg, Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies, Ite, ToReal,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Scalar expression over the current-step values of transition-system
/// variables. Temporal operators have already been lowered to variables.
struct Term {
  Op op = Op::Const;
  ScalarType type = ScalarType::Bool;
  Value value;       // Const
  int var = -1;      // Var: index into TransitionSystem::vars
  std::vector<TermPtr> args;
};

TermPtr mk_const(Value v);
TermPtr mk_bool(bool b);
TermPtr mk_var(int index, ScalarType type);
/// Builds an operator node, folding boolean constants (true and x = x, ...).
TermPtr mk(Op op, std::vector<TermPtr> args);
TermPtr mk_not(TermPtr a);
TermPtr mk_and(std::vector<TermPtr> args);
TermPtr mk_or(std::vector<TermPtr> args);
TermPtr mk_implies(TermPtr a, TermPtr b);
TermPtr mk_ite(TermPtr c, TermPtr t, TermPtr e);
TermPtr mk_eq(TermPtr a, TermPtr b);

bool is_true(const TermPtr& t);
bool is_false(const TermPtr& t);

/// Evaluates with exact arithmetic; `x / 0` is 0.
Value evaluate(const Term& t, const std::function<Value(int)>& var_value);

/// Structural identity key (stable across runs).
std::string key(const Term& t);

/// Infix rendering; `name` maps variable indices to names.
std::string print(const Term& t, const std::function<std::string(int)>& name);

/// Variables read by `t`.
void collect_vars(const Term& t, std::vector<int>& out);

}  // namespace agv::ts
