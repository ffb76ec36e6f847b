#pragma once

#include "agv/ts/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace agv::engine {

struct CheckConfig {
  int max_k = 10;          // largest induction depth tried
  int bmc_depth = 20;      // deepest base case searched for counterexamples
  double timeout_s = 60;   // per obligation
  std::string solver = "z3 -in";
  int jobs = 0;            // parallel obligations; 0 = number of hardware threads
};

/// Validates bounds; returns a message for the first bad field.
std::optional<std::string> validate(const CheckConfig& cfg);

enum class VerdictKind : std::uint8_t {
  Proved, Falsified, ConsistentWitness, Inconsistent, UnrealizableWitness, NoWitnessUpTo, Unknown,
};

std::string_view to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  int k = 0;  // induction depth, or query depth
  std::optional<ts::Trace> trace;
  std::vector<int> trace_vars;  // variables carried by the trace
  std::string reason;           // Unknown
  double time_ms = 0;

  bool failed() const {
    return kind == VerdictKind::Falsified || kind == VerdictKind::Inconsistent ||
           kind == VerdictKind::UnrealizableWitness;
  }
};

/// BMC interleaved with k-induction. `strengthen` holds proven invariants
/// of the same system, assumed at every step of the inductive case.
Verdict check_invariant(const ts::TransitionSystem& ts, const ts::TermPtr& property, const CheckConfig& cfg,
                        const std::vector<ts::TermPtr>& strengthen = {});

/// Is there a trace of `depth` steps on which every term of `constraints`
/// holds at every step?
Verdict check_satisfiable(const ts::TransitionSystem& ts, const std::vector<ts::TermPtr>& constraints, int depth,
                          const CheckConfig& cfg);

/// Searches depths 0..depth for an input prefix (historically satisfying the
/// assumptions) after which no output valuation satisfies the guarantees,
/// given any guarantee-satisfying outputs before. Inputs are the variables
/// flagged `input`. Witness traces prefer `true` for boolean inputs.
Verdict check_realizability(const ts::TransitionSystem& ts, const ts::TermPtr& assumptions,
                            const ts::TermPtr& guarantees, int depth, const CheckConfig& cfg);

/// SMT-LIB script of the base and inductive case at depth `k`, for
/// inspection (`dump-smt`).
std::string invariant_script(const ts::TransitionSystem& ts, const ts::TermPtr& property, int k);

/// Runs independent jobs, up to `jobs` at a time; results keep job order.
std::vector<Verdict> run_parallel(const std::vector<std::function<Verdict()>>& work, int jobs);
/// Reference implementation: one job after another.
std::vector<Verdict> run_serial(const std::vector<std::function<Verdict()>>& work);

}  // namespace agv::engine
