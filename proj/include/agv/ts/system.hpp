#pragma once

#include "agv/diagnostics.hpp"
#include "agv/ts/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace agv::ts {

enum class VarRole : std::uint8_t {
  Free,     // unconstrained except by constraints (inputs, contract-only outputs, implicit eqs)
  Defined,  // current value given by `def`
  Pre,      // value at step t is `source` at step t-1; unconstrained at step 0
  Init,     // true at step 0 only
};

struct Variable {
  std::string name;
  ScalarType type = ScalarType::Bool;
  VarRole role = VarRole::Free;
  TermPtr def;
  TermPtr source;
  TermPtr floor_arg;    // floor variables: the argument (bounds live in constraints)
  bool input = false;   // input port of the analysed component
  bool generated = false;  // introduced by lowering (pre, H, Z, floor, node locals, init)
};

enum class StreamKind : std::uint8_t {
  Assumption, Guarantee, Assertion, Lemma, Connection, FloorBound, SubAssumption, SubGuarantee,
};

std::string_view to_string(StreamKind k);

struct Stream {
  std::string name;   // display name, e.g. `fcc1 guarantee "G3"`
  StreamKind kind = StreamKind::Guarantee;
  std::string owner;  // "" for the layer's own component, else the subcomponent name
  std::string label;
  TermPtr term;
  std::string file;
  SourceSpan span;
};

class TransitionSystem {
 public:
  std::string name;
  std::vector<Variable> vars;
  std::vector<Stream> constraints;  // hold at every step
  std::vector<Stream> streams;      // named boolean streams

  int add_var(std::string name, ScalarType type, VarRole role);
  int find(const std::string& name) const;
  TermPtr var(int index) const { return mk_var(index, vars[index].type); }
  TermPtr init();

  /// Variable holding the previous value of `source` (cached per source).
  TermPtr pre(const TermPtr& source);
  /// h = x at step 0, x and pre(h) after (cached per x).
  TermPtr historically(const TermPtr& x);
  /// z = true at step 0, pre(x) after (cached per x).
  TermPtr zpred(const TermPtr& x);
  /// Fresh int variable i with i <= x < i + 1 (cached per x).
  TermPtr floor(const TermPtr& x);

  /// Fresh variable name with the given stem, deterministic per system.
  std::string fresh(const std::string& stem);

  /// Defined variables in dependency order; reports an instantaneous cycle.
  std::optional<std::vector<int>> definition_order(std::string* cycle = nullptr) const;

  /// Variables the given terms and all constraints depend on, transitively
  /// through definitions and pre sources; sorted.
  std::vector<int> cone(const std::vector<TermPtr>& roots) const;

  std::vector<const Stream*> streams_of(StreamKind kind, const std::string& owner) const;

  std::string var_name(int i) const { return vars[i].name; }
  std::string print(const Term& t) const;

 private:
  std::map<std::string, int> index_;
  std::map<std::string, TermPtr> pre_cache_, h_cache_, z_cache_, floor_cache_;
  std::map<std::string, int> counters_;
  int init_ = -1;
};

/// Step-indexed valuation; missing entries are variables outside the cone
/// of the query that produced the trace.
struct Trace {
  std::vector<std::vector<std::optional<Value>>> steps;

  std::size_t length() const { return steps.size(); }
  const std::optional<Value>& at(int var, std::size_t step) const { return steps[step][var]; }
};

/// Replays a trace against definitions, pre links, init and constraints,
/// for variables in `cone` (all variables when empty). Returns a
/// description of the first mismatch.
std::optional<std::string> validate(const TransitionSystem& ts, const Trace& trace, const std::vector<int>& cone = {});

/// Runs the system forward: `free(var, step)` supplies free variables and
/// pre variables at step 0; everything else is computed.
Trace simulate(const TransitionSystem& ts, std::size_t steps,
               const std::function<Value(int var, std::size_t step)>& free);

/// Lustre-like listing, stable across runs.
std::string dump(const TransitionSystem& ts);

}  // namespace agv::ts
