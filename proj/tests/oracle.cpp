#include "oracle.hpp"

#include "agv/analyses/report.hpp"
#include "agv/model/instance.hpp"
#include "agv/model/library.hpp"
#include "agv/ts/system.hpp"

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace agv::testing {

namespace {

using engine::VerdictKind;
using ts::mk;
using ts::Op;
using ts::TermPtr;

// Small boolean expression tree, evaluated directly by the oracles and
// rendered either as terms or as source text.
struct Expr {
  enum Kind { True, False, Var, Prev, Not, And, Or, Eq, Implies, CountEq, CountLe } kind = True;
  int var = -1;  // Var, Prev: global variable; CountEq, CountLe: constant
  std::string name;
  std::shared_ptr<Expr> a, b;
};
using ExprPtr = std::shared_ptr<Expr>;

ExprPtr leaf(Expr::Kind k, int var, std::string name = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->var = var;
  e->name = std::move(name);
  return e;
}

ExprPtr node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

std::string text(const Expr& e) {
  switch (e.kind) {
    case Expr::True: return "true";
    case Expr::False: return "false";
    case Expr::Var: return e.name;
    case Expr::Prev: return "(false -> pre(" + e.name + "))";
    case Expr::Not: return "(not " + text(*e.a) + ")";
    case Expr::And: return "(" + text(*e.a) + " and " + text(*e.b) + ")";
    case Expr::Or: return "(" + text(*e.a) + " or " + text(*e.b) + ")";
    case Expr::Eq: return "(" + text(*e.a) + " = " + text(*e.b) + ")";
    case Expr::Implies: return "(" + text(*e.a) + " => " + text(*e.b) + ")";
    default: return "?";
  }
}

// ---------------------------------------------------------------------------
// Invariants of random finite-domain systems.

// Leaves: Var i < bits is a state bit, Var bits + j is input j. In the
// next-state functions state bits and the counter read the previous step.
struct RandomSystem {
  int bits = 1;
  int inputs = 0;
  int modulus = 0;  // 0: no counter
  std::vector<ExprPtr> init;   // over inputs
  std::vector<ExprPtr> next;   // over previous state and current inputs
  ExprPtr tick;                // counter increments when true
  ExprPtr property;            // over current state and inputs
};

struct State {
  unsigned bits = 0;
  int count = 0;
  auto operator<=>(const State&) const = default;
};

bool eval(const Expr& e, const State& s, unsigned in, int bits) {
  switch (e.kind) {
    case Expr::True: return true;
    case Expr::False: return false;
    case Expr::Var:
      return e.var < bits ? ((s.bits >> e.var) & 1U) != 0 : ((in >> (e.var - bits)) & 1U) != 0;
    case Expr::Not: return !eval(*e.a, s, in, bits);
    case Expr::And: return eval(*e.a, s, in, bits) && eval(*e.b, s, in, bits);
    case Expr::Or: return eval(*e.a, s, in, bits) || eval(*e.b, s, in, bits);
    case Expr::Eq: return eval(*e.a, s, in, bits) == eval(*e.b, s, in, bits);
    case Expr::Implies: return !eval(*e.a, s, in, bits) || eval(*e.b, s, in, bits);
    case Expr::CountEq: return s.count == e.var;
    case Expr::CountLe: return s.count <= e.var;
    default: return false;
  }
}

State initial(const RandomSystem& r, unsigned in) {
  State s;
  for (int i = 0; i < r.bits; ++i)
    if (eval(*r.init[i], s, in, r.bits)) s.bits |= 1U << i;
  return s;
}

State step(const RandomSystem& r, const State& prev, unsigned in) {
  State s;
  for (int i = 0; i < r.bits; ++i)
    if (eval(*r.next[i], prev, in, r.bits)) s.bits |= 1U << i;
  s.count = prev.count;
  if (r.modulus > 0 && eval(*r.tick, prev, in, r.bits)) s.count = (prev.count + 1) % r.modulus;
  return s;
}

// Shortest depth at which some reachable (state, input) pair violates the
// property, or -1.
int shortest_violation(const RandomSystem& r) {
  const unsigned ins = 1U << r.inputs;
  std::set<std::pair<State, unsigned>> seen;
  std::vector<std::pair<State, unsigned>> layer;
  for (unsigned in = 0; in < ins; ++in) {
    const auto n = std::make_pair(initial(r, in), in);
    if (seen.insert(n).second) layer.push_back(n);
  }
  for (int depth = 0; !layer.empty(); ++depth) {
    for (const auto& [s, in] : layer)
      if (!eval(*r.property, s, in, r.bits)) return depth;
    std::vector<std::pair<State, unsigned>> next;
    for (const auto& [s, in] : layer)
      for (unsigned in2 = 0; in2 < ins; ++in2) {
        const auto n = std::make_pair(step(r, s, in2), in2);
        if (seen.insert(n).second) next.push_back(n);
      }
    layer = std::move(next);
  }
  return -1;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  // Random expression over the given leaf makers.
  ExprPtr expr(int depth, const std::vector<std::function<ExprPtr()>>& leaves) {
    if (depth == 0 || chance(0.3)) {
      if (chance(0.05)) return leaf(chance(0.5) ? Expr::True : Expr::False, -1);
      return leaves[uniform(0, static_cast<int>(leaves.size()) - 1)]();
    }
    switch (uniform(0, 4)) {
      case 0: return node(Expr::Not, expr(depth - 1, leaves));
      case 1: return node(Expr::And, expr(depth - 1, leaves), expr(depth - 1, leaves));
      case 2: return node(Expr::Or, expr(depth - 1, leaves), expr(depth - 1, leaves));
      case 3: return node(Expr::Eq, expr(depth - 1, leaves), expr(depth - 1, leaves));
      default: return node(Expr::Implies, expr(depth - 1, leaves), expr(depth - 1, leaves));
    }
  }

 private:
  std::mt19937_64 rng_;
};

RandomSystem random_system(Gen& g) {
  RandomSystem r;
  r.bits = g.uniform(1, 4);
  r.inputs = g.uniform(0, 2);
  r.modulus = g.chance(0.4) ? g.uniform(2, 4) : 0;
  std::vector<std::function<ExprPtr()>> inputs, all;
  for (int j = 0; j < r.inputs; ++j) inputs.push_back([&r, j] { return leaf(Expr::Var, r.bits + j); });
  for (int i = 0; i < r.bits + r.inputs; ++i) all.push_back([i] { return leaf(Expr::Var, i); });
  if (r.modulus > 0) {
    all.push_back([&g, &r] { return leaf(Expr::CountEq, g.uniform(0, r.modulus - 1)); });
    all.push_back([&g, &r] { return leaf(Expr::CountLe, g.uniform(0, r.modulus - 1)); });
  }
  auto constant = [&g] { return leaf(g.chance(0.5) ? Expr::True : Expr::False, -1); };
  for (int i = 0; i < r.bits; ++i) {
    r.init.push_back(inputs.empty() || g.chance(0.6) ? constant() : g.expr(1, inputs));
    r.next.push_back(g.expr(2, all));
  }
  r.tick = g.expr(1, all);
  r.property = g.expr(g.uniform(1, 3), all);
  return r;
}

struct Encoded {
  std::shared_ptr<ts::TransitionSystem> ts;
  TermPtr property;
  std::vector<int> bit_vars, input_vars;
  int count_var = -1;
};

TermPtr term(const Expr& e, const std::vector<TermPtr>& vars, const TermPtr& count) {
  auto sub = [&](const ExprPtr& x) { return term(*x, vars, count); };
  auto num = [](int v) { return ts::mk_const(Value::integer(v)); };
  switch (e.kind) {
    case Expr::True: return ts::mk_bool(true);
    case Expr::False: return ts::mk_bool(false);
    case Expr::Var: return vars[e.var];
    case Expr::Not: return ts::mk_not(sub(e.a));
    case Expr::And: return ts::mk_and({sub(e.a), sub(e.b)});
    case Expr::Or: return ts::mk_or({sub(e.a), sub(e.b)});
    case Expr::Eq: return ts::mk_eq(sub(e.a), sub(e.b));
    case Expr::Implies: return ts::mk_implies(sub(e.a), sub(e.b));
    case Expr::CountEq: return ts::mk_eq(count, num(e.var));
    case Expr::CountLe: return mk(Op::Le, {count, num(e.var)});
    default: return ts::mk_bool(false);
  }
}

Encoded encode(const RandomSystem& r) {
  Encoded out;
  out.ts = std::make_shared<ts::TransitionSystem>();
  auto& t = *out.ts;
  t.name = "random";
  for (int j = 0; j < r.inputs; ++j) {
    out.input_vars.push_back(t.add_var("i" + std::to_string(j), ScalarType::Bool, ts::VarRole::Free));
    t.vars[out.input_vars.back()].input = true;
  }
  for (int i = 0; i < r.bits; ++i)
    out.bit_vars.push_back(t.add_var("s" + std::to_string(i), ScalarType::Bool, ts::VarRole::Defined));
  if (r.modulus > 0) out.count_var = t.add_var("c", ScalarType::Int, ts::VarRole::Defined);

  std::vector<TermPtr> cur, prev;
  for (int v : out.bit_vars) cur.push_back(t.var(v));
  for (int v : out.input_vars) cur.push_back(t.var(v));
  for (int v : out.bit_vars) prev.push_back(t.pre(t.var(v)));
  for (int v : out.input_vars) prev.push_back(t.var(v));  // inputs are read at the current step
  const TermPtr count = out.count_var >= 0 ? t.var(out.count_var) : ts::mk_const(Value::integer(0));
  const TermPtr prev_count = out.count_var >= 0 ? t.pre(count) : count;

  const TermPtr init = t.init();
  for (int i = 0; i < r.bits; ++i)
    t.vars[out.bit_vars[i]].def = ts::mk_ite(init, term(*r.init[i], cur, count), term(*r.next[i], prev, prev_count));
  if (out.count_var >= 0) {
    const TermPtr zero = ts::mk_const(Value::integer(0));
    const TermPtr wrap = ts::mk_ite(ts::mk_eq(prev_count, ts::mk_const(Value::integer(r.modulus - 1))), zero,
                                    mk(Op::Add, {prev_count, ts::mk_const(Value::integer(1))}));
    t.vars[out.count_var].def =
        ts::mk_ite(init, zero, ts::mk_ite(term(*r.tick, prev, prev_count), wrap, prev_count));
  }
  out.property = term(*r.property, cur, count);
  return out;
}

// Re-runs the oracle simulator on the trace's inputs and compares every
// state variable the trace carries. Returns a mismatch description.
std::string replay(const RandomSystem& r, const Encoded& e, const ts::Trace& tr) {
  State s;
  for (std::size_t t = 0; t < tr.length(); ++t) {
    unsigned in = 0;
    for (int j = 0; j < r.inputs; ++j) {
      const auto& v = tr.at(e.input_vars[j], t);
      if (v && v->as_bool()) in |= 1U << j;
    }
    s = t == 0 ? initial(r, in) : step(r, s, in);
    for (int i = 0; i < r.bits; ++i) {
      const auto& v = tr.at(e.bit_vars[i], t);
      if (v && v->as_bool() != (((s.bits >> i) & 1U) != 0))
        return "bit s" + std::to_string(i) + " differs at step " + std::to_string(t);
    }
    if (e.count_var >= 0) {
      const auto& v = tr.at(e.count_var, t);
      if (v && v->as_integer() != s.count) return "counter differs at step " + std::to_string(t);
    }
    if (t + 1 == tr.length() && eval(*r.property, s, in, r.bits)) return "property holds at the last step";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Compositional soundness of random layers.

struct Port {
  std::string local;   // name inside its component
  std::string global;  // name in the layer
  int driver = -1;     // global index of the source, -1 when free
};

struct Contract {
  ExprPtr assumption;                // may be null
  std::vector<ExprPtr> guarantees;
};

struct RandomLayer {
  std::vector<Port> vars;                // parent inputs, parent outputs, then child ports
  int parent_inputs = 0, parent_outputs = 0;
  std::vector<std::vector<int>> child_in, child_out;  // global indices
  Contract parent;
  std::vector<Contract> children;
  std::string source;
};

// Every global variable of the bounded trace, one vector per step.
using Steps = std::vector<std::vector<bool>>;

bool eval(const Expr& e, const Steps& tr, std::size_t t) {
  switch (e.kind) {
    case Expr::True: return true;
    case Expr::False: return false;
    case Expr::Var: return tr[t][e.var];
    case Expr::Prev: return t > 0 && tr[t - 1][e.var];
    case Expr::Not: return !eval(*e.a, tr, t);
    case Expr::And: return eval(*e.a, tr, t) && eval(*e.b, tr, t);
    case Expr::Or: return eval(*e.a, tr, t) || eval(*e.b, tr, t);
    case Expr::Eq: return eval(*e.a, tr, t) == eval(*e.b, tr, t);
    case Expr::Implies: return !eval(*e.a, tr, t) || eval(*e.b, tr, t);
    default: return false;
  }
}

bool holds(const std::vector<ExprPtr>& es, const Steps& tr, std::size_t t) {
  for (const auto& e : es)
    if (!eval(*e, tr, t)) return false;
  return true;
}

ExprPtr guarantee_on(Gen& g, int out, const std::string& name, const std::vector<std::function<ExprPtr()>>& rhs) {
  const ExprPtr y = leaf(Expr::Var, out, name);
  const ExprPtr e = g.expr(g.uniform(0, 2), rhs);
  switch (g.uniform(0, 3)) {
    case 0:
    case 1: return node(Expr::Eq, y, e);
    case 2: return node(Expr::Implies, y, e);
    default: return node(Expr::Implies, e, y);
  }
}

// Restates a child expression over parent ports: child inputs fed by
// parent inputs and child outputs feeding parent outputs. Null when some
// leaf has no such counterpart.
ExprPtr lift(const RandomLayer& L, const Expr& e) {
  if (e.kind == Expr::Var || e.kind == Expr::Prev) {
    const int parent = L.parent_inputs + L.parent_outputs;
    int to = -1;
    if (e.var < parent) to = e.var;
    else if (L.vars[e.var].driver >= 0 && L.vars[e.var].driver < L.parent_inputs) to = L.vars[e.var].driver;
    else
      for (int b = L.parent_inputs; b < parent && to < 0; ++b)
        if (L.vars[b].driver == e.var) to = b;
    return to < 0 ? nullptr : leaf(e.kind, to, L.vars[to].local);
  }
  if (!e.a) return leaf(e.kind, -1);
  ExprPtr a = lift(L, *e.a);
  ExprPtr b = e.b ? lift(L, *e.b) : nullptr;
  if (!a || (e.b && !b)) return nullptr;
  return node(e.kind, a, b);
}

RandomLayer random_layer(Gen& g) {
  RandomLayer L;
  const int children = g.uniform(2, 3);
  L.parent_inputs = g.uniform(1, 2);
  L.parent_outputs = 1;
  auto add = [&L](std::string local, std::string global) {
    L.vars.push_back({std::move(local), std::move(global), -1});
    return static_cast<int>(L.vars.size()) - 1;
  };
  std::vector<int> pin, pout;
  for (int j = 1; j <= L.parent_inputs; ++j) pin.push_back(add("a" + std::to_string(j), "a" + std::to_string(j)));
  for (int j = 1; j <= L.parent_outputs; ++j) pout.push_back(add("b" + std::to_string(j), "b" + std::to_string(j)));
  for (int c = 1; c <= children; ++c) {
    const std::string inst = "c" + std::to_string(c) + ".";
    std::vector<int> ins, outs;
    const int n_in = g.uniform(1, 2);
    for (int j = 1; j <= n_in; ++j) ins.push_back(add("x" + std::to_string(j), inst + "x" + std::to_string(j)));
    outs.push_back(add("y1", inst + "y1"));
    L.child_in.push_back(ins);
    L.child_out.push_back(outs);
  }

  // Wiring: child inputs from parent inputs or other children's outputs.
  for (int c = 0; c < children; ++c)
    for (int x : L.child_in[c]) {
      if (g.chance(0.1)) continue;
      std::vector<int> sources = pin;
      if (g.chance(0.4)) {
        sources.clear();
        for (int d = 0; d < children; ++d)
          if (d != c) sources.push_back(L.child_out[d][0]);
      }
      L.vars[x].driver = sources[g.uniform(0, static_cast<int>(sources.size()) - 1)];
    }
  for (int b : pout)
    if (!g.chance(0.05)) L.vars[b].driver = L.child_out[g.uniform(0, children - 1)][0];

  auto makers = [&L](const std::vector<int>& cur, const std::vector<int>& prev) {
    std::vector<std::function<ExprPtr()>> out;
    for (int v : cur) out.push_back([&L, v] { return leaf(Expr::Var, v, L.vars[v].local); });
    for (int v : prev) out.push_back([&L, v] { return leaf(Expr::Prev, v, L.vars[v].local); });
    return out;
  };

  for (int c = 0; c < children; ++c) {
    Contract k;
    const auto in = makers(L.child_in[c], L.child_in[c]);
    if (g.chance(0.35)) k.assumption = g.expr(1, in);
    const auto rhs = makers(L.child_in[c], L.child_out[c]);
    for (int y : L.child_out[c])
      if (g.chance(0.85)) k.guarantees.push_back(guarantee_on(g, y, L.vars[y].local, rhs));
    L.children.push_back(std::move(k));
  }
  // Half of the parent contracts restate child contracts through the wiring,
  // so that a fair share of layers is provable.
  const bool derive = g.chance(0.5);
  if (derive) {
    std::vector<ExprPtr> as;
    for (const auto& k : L.children)
      if (k.assumption)
        if (ExprPtr m = lift(L, *k.assumption)) as.push_back(m);
    if (!as.empty()) L.parent.assumption = as.size() == 1 ? as[0] : node(Expr::And, as[0], as[1]);
  } else if (g.chance(0.3)) {
    L.parent.assumption = g.expr(1, makers(pin, pin));
  }
  for (int b : pout) {
    ExprPtr lifted;
    const int y = L.vars[b].driver;
    if (derive && y >= 0)
      for (int c = 0; c < children && !lifted; ++c)
        if (L.child_out[c][0] == y && !L.children[c].guarantees.empty()) lifted = lift(L, *L.children[c].guarantees[0]);
    L.parent.guarantees.push_back(lifted ? lifted : guarantee_on(g, b, L.vars[b].local, makers(pin, pout)));
  }

  // Source text.
  std::ostringstream s;
  auto contract = [&s](const Contract& k) {
    if (k.assumption) s << "  assume \"A\" : " << text(*k.assumption) << ";\n";
    for (std::size_t i = 0; i < k.guarantees.size(); ++i)
      s << "  guarantee \"G" << i + 1 << "\" : " << text(*k.guarantees[i]) << ";\n";
  };
  auto ports = [&](const std::vector<int>& in, const std::vector<int>& out) {
    for (int v : in) s << "  in " << L.vars[v].local << " : bool;\n";
    for (int v : out) s << "  out " << L.vars[v].local << " : bool;\n";
  };
  for (int c = 0; c < children; ++c) {
    s << "component T" << c + 1 << "\n";
    ports(L.child_in[c], L.child_out[c]);
    contract(L.children[c]);
    s << "end T" << c + 1 << ";\n\n";
  }
  s << "component Top\n";
  ports(pin, pout);
  contract(L.parent);
  s << "end Top;\n\nimplementation Top.impl\n  subcomponents\n";
  for (int c = 0; c < children; ++c) s << "    c" << c + 1 << " : T" << c + 1 << ";\n";
  s << "  connections\n";
  for (const auto& v : L.vars)
    if (v.driver >= 0) s << "    " << L.vars[v.driver].global << " -> " << v.global << ";\n";
  s << "end Top.impl;\n";
  L.source = s.str();
  return L;
}

struct Enumeration {
  long long traces = 0;
  int violations = 0;
  std::string first;
};

// Depth-first over every assignment of the free variables at each step.
// Branches where a child breaks its contract are not behaviours of the
// composition; branches where the parent's assumptions stop holding cannot
// violate H(A) => G any more.
Enumeration enumerate(const RandomLayer& L, int depth) {
  std::vector<int> free;
  for (std::size_t v = 0; v < L.vars.size(); ++v)
    if (L.vars[v].driver < 0) free.push_back(static_cast<int>(v));
  Enumeration out;
  Steps tr;
  std::vector<ExprPtr> none;
  auto assumptions = [&none](const Contract& k) {
    return k.assumption ? std::vector<ExprPtr>{k.assumption} : none;
  };

  std::function<void(int, std::vector<bool>)> go = [&](int t, std::vector<bool> held) {
    if (t == depth) {
      ++out.traces;
      return;
    }
    for (unsigned m = 0; m < (1U << free.size()); ++m) {
      std::vector<bool> row(L.vars.size(), false);
      for (std::size_t i = 0; i < free.size(); ++i) row[free[i]] = ((m >> i) & 1U) != 0;
      for (std::size_t v = 0; v < L.vars.size(); ++v)
        if (L.vars[v].driver >= 0) row[v] = row[L.vars[v].driver];
      tr.push_back(row);
      std::vector<bool> now = held;
      bool behaviour = true;
      for (std::size_t c = 0; c < L.children.size() && behaviour; ++c) {
        now[c] = held[c] && holds(assumptions(L.children[c]), tr, t);
        if (now[c] && !holds(L.children[c].guarantees, tr, t)) behaviour = false;
      }
      if (behaviour) {
        const std::size_t p = L.children.size();
        now[p] = held[p] && holds(assumptions(L.parent), tr, t);
        if (!now[p]) {
          ++out.traces;
        } else if (!holds(L.parent.guarantees, tr, t)) {
          if (out.violations++ == 0) out.first = "step " + std::to_string(t);
        } else {
          go(t + 1, now);
        }
      }
      tr.pop_back();
    }
  };
  go(0, std::vector<bool>(L.children.size() + 1, true));
  return out;
}

}  // namespace

InvariantStats invariant_vs_explicit(int count, std::uint64_t seed, const engine::CheckConfig& cfg) {
  Gen g(seed);
  std::vector<RandomSystem> systems;
  std::vector<Encoded> encoded;
  for (int i = 0; i < count; ++i) {
    systems.push_back(random_system(g));
    encoded.push_back(encode(systems.back()));
  }
  std::vector<std::function<engine::Verdict()>> work;
  for (const auto& e : encoded)
    work.emplace_back([&e, &cfg] { return engine::check_invariant(*e.ts, e.property, cfg); });
  const auto verdicts = engine::run_parallel(work, cfg.jobs);

  InvariantStats st;
  for (int i = 0; i < count; ++i) {
    ++st.cases;
    const auto& v = verdicts[i];
    const int expect = shortest_violation(systems[i]);
    const std::string id = "case " + std::to_string(i) + ": ";
    switch (v.kind) {
      case VerdictKind::Proved:
        ++st.proved;
        if (expect >= 0) st.mismatches.push_back(id + "proved, oracle violates at " + std::to_string(expect));
        break;
      case VerdictKind::Falsified: {
        ++st.falsified;
        const int got = v.trace ? static_cast<int>(v.trace->length()) - 1 : -1;
        if (expect < 0) {
          st.mismatches.push_back(id + "falsified, oracle finds no violation");
        } else if (got != expect) {
          st.mismatches.push_back(id + "violation at " + std::to_string(got) + ", shortest is " +
                                  std::to_string(expect));
        } else if (const std::string why = replay(systems[i], encoded[i], *v.trace); !why.empty()) {
          st.mismatches.push_back(id + "trace does not replay: " + why);
        } else {
          ++st.replayed;
        }
        break;
      }
      default: ++st.unknown; break;
    }
  }
  return st;
}

std::vector<InvariantProblem> random_invariant_problems(int count, std::uint64_t seed) {
  Gen g(seed);
  std::vector<InvariantProblem> out;
  for (int i = 0; i < count; ++i) {
    const RandomSystem r = random_system(g);
    Encoded e = encode(r);
    out.push_back({e.ts, e.property, shortest_violation(r)});
  }
  return out;
}

SoundnessStats compositional_soundness(int count, std::uint64_t seed, int depth, const engine::CheckConfig& cfg) {
  Gen g(seed);
  std::vector<RandomLayer> layers;
  while (static_cast<int>(layers.size()) < count) {
    RandomLayer L = random_layer(g);
    int free = 0;
    for (const auto& v : L.vars) free += v.driver < 0 ? 1 : 0;
    if (free <= 5) layers.push_back(std::move(L));
  }

  SoundnessStats st;
  std::vector<analyses::Status> status(layers.size(), analyses::Status::Unknown);
  std::vector<std::string> errors(layers.size());
  std::vector<int> cex(layers.size(), 0);  // length of a guarantee counterexample
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Diagnostics d;
    const auto lib = model::load_library_text({{"random.agv", layers[i].source}}, d);
    std::unique_ptr<model::Instance> root = lib ? model::instantiate(*lib, "Top", d) : nullptr;
    if (!root) {
      std::ostringstream msg;
      msg << d;
      errors[i] = msg.str();
      continue;
    }
    const auto report = analyses::verify_all(*lib, *root, cfg, d, false);
    if (report.layers.size() != 1) {
      errors[i] = "expected one layer";
      continue;
    }
    bool all = true, failed = false;
    for (const auto& o : report.layers[0].obligations) {
      all = all && o.verdict.kind == VerdictKind::Proved;
      failed = failed || o.verdict.failed();
      if (o.kind == ts::ObligationKind::Guarantee && o.verdict.kind == VerdictKind::Falsified && o.verdict.trace)
        cex[i] = static_cast<int>(o.verdict.trace->length());
    }
    status[i] = all ? analyses::Status::Proved : failed ? analyses::Status::Failed : analyses::Status::Unknown;
  }

  for (std::size_t i = 0; i < layers.size(); ++i) {
    ++st.systems;
    const std::string id = "system " + std::to_string(i) + ": ";
    if (!errors[i].empty()) {
      st.mismatches.push_back(id + "did not load: " + errors[i]);
      continue;
    }
    if (status[i] == analyses::Status::Failed) ++st.some_failed;
    if (status[i] == analyses::Status::Unknown) ++st.unknown;
    // A guarantee counterexample assumes every child guarantee outright, so
    // it is also a behaviour the enumeration must reach.
    if (cex[i] > 0 && cex[i] <= depth) {
      ++st.counterexamples;
      if (enumerate(layers[i], depth).violations == 0)
        st.mismatches.push_back(id + "guarantee counterexample not found by enumeration\n" + layers[i].source);
    }
    if (status[i] != analyses::Status::Proved) continue;
    ++st.all_proved;
    const Enumeration e = enumerate(layers[i], depth);
    st.traces += e.traces;
    st.violations += e.violations;
    if (e.violations > 0) st.mismatches.push_back(id + "parent contract violated at " + e.first + "\n" + layers[i].source);
  }
  return st;
}

}  // namespace agv::testing
