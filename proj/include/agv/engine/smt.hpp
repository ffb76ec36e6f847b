#pragma once

#include "agv/engine/sexpr.hpp"
#include "agv/ts/system.hpp"

#include <functional>
#include <string>
#include <vector>

namespace agv::engine {

/// Unrolls a transition system into SMT-LIB terms. Variable (v, t) is
/// named by `namer`; only variables in `cone` are encoded.
class Unroller {
 public:
  using Namer = std::function<std::string(int var, int step)>;

  Unroller(const ts::TransitionSystem& ts, std::vector<int> cone, Namer namer);

  /// `|prefix:name@step|`, quoting as SMT-LIB requires.
  static Namer tagged(const ts::TransitionSystem& ts, const std::string& prefix);

  const std::vector<int>& cone() const { return cone_; }
  std::string name(int var, int step) const { return namer_(var, step); }
  std::string sort(int var) const;
  std::string term(const ts::Term& t, int step) const;

  /// `(declare-fun ...)` for every cone variable at `step` accepted by `filter`.
  std::vector<std::string> declarations(int step, const std::function<bool(int)>& filter = {}) const;

  /// Formulas tying step `step` to its definitions, to step - 1 (pre links,
  /// init), and the every-step constraints. With `initial` the init flag is
  /// true at step 0; otherwise step 0 is an arbitrary state.
  std::vector<std::string> transition(int step, bool initial) const;

  /// Whether the encoding needs nonlinear arithmetic.
  bool nonlinear() const { return nonlinear_; }

 private:
  const ts::TransitionSystem& ts_;
  std::vector<int> cone_;
  Namer namer_;
  bool nonlinear_ = false;
};

std::string smt_const(const Value& v);
std::string smt_sort(ScalarType t);
/// Converts a get-value reply to a typed value.
std::optional<Value> smt_value(const SExpr& e, ScalarType t);

}  // namespace agv::engine
