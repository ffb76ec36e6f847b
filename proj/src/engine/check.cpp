#include "agv/engine/check.hpp"

#include "agv/engine/session.hpp"
#include "agv/engine/smt.hpp"

#include <omp.h>

#include <set>
#include <sstream>

namespace agv::engine {

using ts::TermPtr;
using ts::TransitionSystem;

std::optional<std::string> validate(const CheckConfig& cfg) {
  if (cfg.max_k < 1) return "max-k must be positive";
  if (cfg.bmc_depth < 1) return "bmc-depth must be positive";
  if (!(cfg.timeout_s > 0)) return "timeout must be positive";
  if (cfg.jobs < 0) return "jobs must not be negative";
  if (cfg.solver.find_first_not_of(" \t") == std::string::npos) return "solver command is empty";
  return std::nullopt;
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Proved: return "proved";
    case VerdictKind::Falsified: return "falsified";
    case VerdictKind::ConsistentWitness: return "consistent";
    case VerdictKind::Inconsistent: return "inconsistent";
    case VerdictKind::UnrealizableWitness: return "unrealizable";
    case VerdictKind::NoWitnessUpTo: return "no-witness";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

struct Stopwatch {
  Clock::time_point start = Clock::now();
  double ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); }
};

Clock::time_point deadline_for(const CheckConfig& cfg) {
  return Clock::now() + std::chrono::milliseconds(static_cast<long long>(cfg.timeout_s * 1000.0));
}

std::string logic(bool quantified, bool nonlinear) {
  return std::string("(set-logic ") + (quantified ? "" : "QF_") + (nonlinear ? "NIRA" : "LIRA") + ")";
}

// z3 decides the quantified realizability queries much faster after
// quantifier elimination than with its default instantiation engine.
std::string quantified_check(const std::string& solver) {
  std::istringstream in(solver);
  std::string program;
  in >> program;
  const auto slash = program.rfind('/');
  if (slash != std::string::npos) program = program.substr(slash + 1);
  return program.rfind("z3", 0) == 0 ? "(check-sat-using (then simplify qe smt))" : "(check-sat)";
}

Verdict unknown(std::string reason, const Stopwatch& sw) {
  Verdict v;
  v.kind = VerdictKind::Unknown;
  v.reason = std::move(reason);
  v.time_ms = sw.ms();
  return v;
}

void assert_all(SolverSession& s, const std::vector<std::string>& formulas) {
  for (const auto& f : formulas) s.command("(assert " + f + ")");
}

void declare(SolverSession& s, const std::vector<std::string>& decls) {
  for (const auto& d : decls) s.command(d);
}

ts::Trace extract(SolverSession& s, const Unroller& u, const TransitionSystem& ts, int steps) {
  std::vector<std::string> names;
  for (int t = 0; t < steps; ++t)
    for (int v : u.cone()) names.push_back(u.name(v, t));
  std::vector<SExpr> values = s.get_value(names);
  ts::Trace tr;
  std::size_t i = 0;
  for (int t = 0; t < steps; ++t) {
    tr.steps.emplace_back(ts.vars.size());
    for (int v : u.cone()) {
      auto val = smt_value(values[i++], ts.vars[v].type);
      if (!val) throw SolverError("unreadable model value for " + ts.vars[v].name);
      tr.steps.back()[v] = *val;
    }
  }
  return tr;
}

bool holds(const TermPtr& p, const ts::Trace& tr, std::size_t step) {
  return ts::evaluate(*p, [&](int v) -> Value {
           const auto& val = tr.at(v, step);
           if (!val) throw SolverError("trace lacks a value needed by the property");
           return *val;
         }).as_bool();
}

}  // namespace

Verdict check_invariant(const TransitionSystem& ts, const TermPtr& property, const CheckConfig& cfg,
                        const std::vector<TermPtr>& strengthen) {
  Stopwatch sw;
  if (ts::is_true(property)) {
    Verdict v;
    v.kind = VerdictKind::Proved;
    v.k = 0;
    v.time_ms = sw.ms();
    return v;
  }
  std::vector<TermPtr> roots{property};
  roots.insert(roots.end(), strengthen.begin(), strengthen.end());
  const std::vector<int> cone = ts.cone(roots);
  const Unroller base(ts, cone, Unroller::tagged(ts, "b:"));
  const Unroller step(ts, cone, Unroller::tagged(ts, "s:"));
  std::string step_unknown;
  try {
    const auto deadline = deadline_for(cfg);
    SolverSession b(cfg.solver, deadline);
    SolverSession s(cfg.solver, deadline);
    b.command(logic(false, base.nonlinear()));
    s.command(logic(false, step.nonlinear()));
    bool step_open = true;
    const int last = std::max(cfg.max_k, cfg.bmc_depth);
    for (int k = 0; k <= last; ++k) {
      // Base case: a path of k+1 states from the initial state violating P last.
      declare(b, base.declarations(k));
      assert_all(b, base.transition(k, true));
      if (k <= cfg.bmc_depth || step_open) {
        b.push();
        b.command("(assert (not " + base.term(*property, k) + "))");
        const SatResult r = b.check_sat();
        if (r == SatResult::Sat) {
          ts::Trace tr = extract(b, base, ts, k + 1);
          if (auto bad = ts::validate(ts, tr, cone)) return unknown("counterexample failed replay: " + *bad, sw);
          if (holds(property, tr, k)) return unknown("counterexample does not violate the property", sw);
          Verdict v;
          v.kind = VerdictKind::Falsified;
          v.k = k;
          v.trace = std::move(tr);
          v.trace_vars = cone;
          v.time_ms = sw.ms();
          return v;
        }
        if (r == SatResult::Unknown) return unknown("solver returned unknown: " + b.reason_unknown(), sw);
        b.pop();
      }
      b.command("(assert " + base.term(*property, k) + ")");

      // Inductive case: k states satisfying P followed by one that does not.
      if (step_open && k <= cfg.max_k) {
        declare(s, step.declarations(k));
        assert_all(s, step.transition(k, false));
        for (const auto& l : strengthen) s.command("(assert " + step.term(*l, k) + ")");
        if (k > 0) s.command("(assert " + step.term(*property, k - 1) + ")");
        s.push();
        s.command("(assert (not " + step.term(*property, k) + "))");
        const SatResult r = s.check_sat();
        s.pop();
        if (r == SatResult::Unsat) {
          Verdict v;
          v.kind = VerdictKind::Proved;
          v.k = k;
          v.time_ms = sw.ms();
          return v;
        }
        if (r == SatResult::Unknown) {
          step_unknown = s.reason_unknown();
          step_open = false;
        }
      }
      if (k >= cfg.bmc_depth && (!step_open || k >= cfg.max_k)) break;
    }
  } catch (const SolverError& e) {
    return unknown(e.what(), sw);
  }
  if (!step_unknown.empty()) return unknown("inductive step undecided: " + step_unknown, sw);
  return unknown("not " + std::to_string(cfg.max_k) + "-inductive; no counterexample up to depth " +
                     std::to_string(cfg.bmc_depth),
                 sw);
}

Verdict check_satisfiable(const TransitionSystem& ts, const std::vector<TermPtr>& constraints, int depth,
                          const CheckConfig& cfg) {
  Stopwatch sw;
  const std::vector<int> cone = ts.cone(constraints);
  const Unroller u(ts, cone, Unroller::tagged(ts, "w:"));
  try {
    SolverSession s(cfg.solver, deadline_for(cfg));
    s.command(logic(false, u.nonlinear()));
    for (int t = 0; t < depth; ++t) {
      declare(s, u.declarations(t));
      assert_all(s, u.transition(t, true));
      for (const auto& c : constraints) s.command("(assert " + u.term(*c, t) + ")");
    }
    const SatResult r = s.check_sat();
    Verdict v;
    v.k = depth;
    if (r == SatResult::Unsat) {
      v.kind = VerdictKind::Inconsistent;
      v.time_ms = sw.ms();
      return v;
    }
    if (r == SatResult::Unknown) return unknown("solver returned unknown: " + s.reason_unknown(), sw);
    ts::Trace tr = extract(s, u, ts, depth);
    if (auto bad = ts::validate(ts, tr, cone)) return unknown("witness failed replay: " + *bad, sw);
    for (int t = 0; t < depth; ++t)
      for (const auto& c : constraints)
        if (!holds(c, tr, static_cast<std::size_t>(t))) return unknown("witness violates a constraint", sw);
    v.kind = VerdictKind::ConsistentWitness;
    v.trace = std::move(tr);
    v.trace_vars = cone;
    v.time_ms = sw.ms();
    return v;
  } catch (const SolverError& e) {
    return unknown(e.what(), sw);
  }
}

namespace {

enum class Found { Witness, None, Undecided };

struct RealizabilityStep {
  Found found = Found::None;
  std::string reason;
  ts::Trace trace;
};

RealizabilityStep realizability_at(const TransitionSystem& ts, const std::vector<int>& cone, const TermPtr& a,
                                   const TermPtr& g, int d, const CheckConfig& cfg, Clock::time_point deadline) {
  RealizabilityStep out;
  auto is_input = [&](int v) { return ts.vars[v].input; };
  auto input_name = Unroller::tagged(ts, "in:");
  auto e_tag = Unroller::tagged(ts, "e:");
  auto u_tag = Unroller::tagged(ts, "u:");
  const Unroller ex(ts, cone, [&](int v, int t) { return is_input(v) ? input_name(v, t) : e_tag(v, t); });
  const Unroller un(ts, cone, [&](int v, int t) { return is_input(v) ? input_name(v, t) : u_tag(v, t); });

  std::vector<int> inputs;
  for (int v : cone)
    if (is_input(v)) inputs.push_back(v);

  auto premise = [&](const Unroller& u) {
    std::vector<std::string> parts;
    for (int t = 0; t <= d; ++t) {
      auto tr = u.transition(t, true);
      parts.insert(parts.end(), tr.begin(), tr.end());
      parts.push_back(u.term(*a, t));
      if (t < d) parts.push_back(u.term(*g, t));
    }
    return parts;
  };
  auto conj = [](const std::vector<std::string>& parts) {
    if (parts.empty()) return std::string("true");
    std::string s = "(and";
    for (const auto& p : parts) s += " " + p;
    return s + ")";
  };

  SolverSession s(cfg.solver, deadline);
  s.command(logic(true, ex.nonlinear()));
  for (int t = 0; t <= d; ++t) declare(s, ex.declarations(t));
  assert_all(s, premise(ex));
  std::string bound;
  for (int t = 0; t <= d; ++t)
    for (int v : cone)
      if (!is_input(v)) bound += "(" + un.name(v, t) + " " + un.sort(v) + ")";
  const std::string body = "(=> " + conj(premise(un)) + " (not " + un.term(*g, d) + "))";
  s.command("(assert " + (bound.empty() ? body : "(forall (" + bound + ") " + body + ")") + ")");
  const std::string check = quantified_check(cfg.solver);
  SatResult r = s.check_sat(check);
  if (r == SatResult::Unsat) return out;
  if (r == SatResult::Unknown) {
    out.found = Found::Undecided;
    out.reason = s.reason_unknown();
    return out;
  }

  // Prefer `true` for boolean inputs, earliest step first.
  for (int t = 0; t <= d; ++t) {
    for (int v : inputs) {
      if (ts.vars[v].type != ScalarType::Bool) continue;
      s.push();
      s.command("(assert " + ex.name(v, t) + ")");
      r = s.check_sat(check);
      if (r == SatResult::Sat) continue;  // keep the scope
      s.pop();
      if (r == SatResult::Unknown) goto done;
      s.command("(assert (not " + ex.name(v, t) + "))");
    }
  }
done:
  if (s.check_sat(check) != SatResult::Sat) {
    out.found = Found::Undecided;
    out.reason = "witness lost during canonicalisation";
    return out;
  }
  std::vector<std::string> names;
  for (int t = 0; t <= d; ++t)
    for (int v : inputs) names.push_back(ex.name(v, t));
  std::vector<SExpr> vals = s.get_value(names);

  // Confirm without quantifiers: fix the inputs, the prefix must be feasible
  // and the guarantees at step d impossible.
  const Unroller qf(ts, cone, Unroller::tagged(ts, "c:"));
  SolverSession c(cfg.solver, deadline);
  c.command(logic(false, qf.nonlinear()));
  std::size_t i = 0;
  for (int t = 0; t <= d; ++t) {
    declare(c, qf.declarations(t));
    for (int v : inputs) c.command("(assert (= " + qf.name(v, t) + " " + vals[i++].to_string() + "))");
  }
  assert_all(c, premise(qf));
  if (c.check_sat() != SatResult::Sat) {
    out.found = Found::Undecided;
    out.reason = "witness inputs admit no contract-satisfying prefix";
    return out;
  }
  out.trace = extract(c, qf, ts, d + 1);
  c.command("(assert " + qf.term(*g, d) + ")");
  if (c.check_sat() != SatResult::Unsat) {
    out.found = Found::Undecided;
    out.reason = "witness not confirmed by the quantifier-free check";
    return out;
  }
  out.found = Found::Witness;
  return out;
}

}  // namespace

Verdict check_realizability(const TransitionSystem& ts, const TermPtr& assumptions, const TermPtr& guarantees,
                            int depth, const CheckConfig& cfg) {
  Stopwatch sw;
  Verdict v;
  v.kind = VerdictKind::NoWitnessUpTo;
  v.k = depth;
  if (ts::is_true(guarantees)) {
    v.time_ms = sw.ms();
    return v;
  }
  const std::vector<int> cone = ts.cone({assumptions, guarantees});
  const auto deadline = deadline_for(cfg);
  try {
    for (int d = 0; d <= depth; ++d) {
      RealizabilityStep st = realizability_at(ts, cone, assumptions, guarantees, d, cfg, deadline);
      if (st.found == Found::Undecided) return unknown("realizability query undecided at depth " +
                                                           std::to_string(d) + ": " + st.reason,
                                                       sw);
      if (st.found == Found::Witness) {
        if (auto bad = ts::validate(ts, st.trace, cone)) return unknown("witness failed replay: " + *bad, sw);
        v.kind = VerdictKind::UnrealizableWitness;
        v.k = d;
        v.trace = std::move(st.trace);
        v.trace_vars = cone;
        v.time_ms = sw.ms();
        return v;
      }
    }
  } catch (const SolverError& e) {
    return unknown(e.what(), sw);
  }
  v.time_ms = sw.ms();
  return v;
}

std::string invariant_script(const TransitionSystem& ts, const TermPtr& property, int k) {
  const std::vector<int> cone = ts.cone({property});
  std::ostringstream os;
  for (const bool initial : {true, false}) {
    const Unroller u(ts, cone, Unroller::tagged(ts, initial ? "b:" : "s:"));
    os << "; " << (initial ? "base case" : "inductive step") << ", k = " << k << '\n';
    os << logic(false, u.nonlinear()) << '\n';
    for (int t = 0; t <= k; ++t) {
      for (const auto& d : u.declarations(t)) os << d << '\n';
      for (const auto& f : u.transition(t, initial)) os << "(assert " << f << ")\n";
      if (t < k) os << "(assert " << u.term(*property, t) << ")\n";
    }
    os << "(assert (not " << u.term(*property, k) << "))\n(check-sat)\n";
    if (initial) os << "(reset)\n";
  }
  return os.str();
}

namespace {

Verdict guarded(const std::function<Verdict()>& job) {
  try {
    return job();
  } catch (const std::exception& e) {
    Verdict v;
    v.reason = e.what();
    return v;
  }
}

}  // namespace

std::vector<Verdict> run_parallel(const std::vector<std::function<Verdict()>>& work, int jobs) {
  std::vector<Verdict> out(work.size());
  const int n = jobs > 0 ? jobs : omp_get_max_threads();
  const long count = static_cast<long>(work.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(n)
  for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = guarded(work[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<Verdict> run_serial(const std::vector<std::function<Verdict()>>& work) {
  std::vector<Verdict> out;
  out.reserve(work.size());
  for (const auto& w : work) out.push_back(guarded(w));
  return out;
}

}  // namespace agv::engine
