#include "agv/lang/eval.hpp"
#include "agv/model/library.hpp"
#include "agv/ts/compile.hpp"
#include "agv/ts/obligation.hpp"

#include <doctest.h>

#include <random>

using namespace agv;
using namespace agv::ts;

namespace {

struct Compiled {
  std::optional<model::Library> lib;
  std::optional<Layer> layer;
};

Compiled compile(const std::string& src, const std::string& comp) {
  Compiled c;
  Diagnostics d;
  c.lib = model::load_library_text({{"t.agv", src}}, d);
  REQUIRE_MESSAGE(c.lib, d);
  c.layer = compile_component(*c.lib, *c.lib->component(comp), d);
  REQUIRE_MESSAGE(c.layer, d);
  return c;
}

std::vector<bool> run_bool(const TransitionSystem& ts, const TermPtr& out, const std::vector<bool>& x, int xvar) {
  Trace tr = simulate(ts, x.size(), [&](int v, std::size_t step) {
    if (v == xvar) return Value::boolean(x[step]);
    return Value::zero(ts.vars[v].type);
  });
  std::vector<bool> res;
  for (std::size_t t = 0; t < x.size(); ++t)
    res.push_back(evaluate(*out, [&](int v) { return *tr.at(v, t); }).as_bool());
  return res;
}

}  // namespace

TEST_CASE("counter lowers to a pre variable guarded by init") {
  auto c = compile("component C\n  out count : int;\n  eq k : int = 0 -> pre(k) + 1;\nend C;\n", "C");
  const TransitionSystem& ts = *c.layer->ts;
  const int k = ts.find("k");
  REQUIRE(k >= 0);
  CHECK(ts.vars[k].role == VarRole::Defined);
  int pres = 0;
  for (const auto& v : ts.vars) pres += v.role == VarRole::Pre;
  CHECK(pres == 1);
  Trace tr = simulate(ts, 5, [](int, std::size_t) { return Value::integer(99); });
  for (std::size_t t = 0; t < 5; ++t) CHECK(*tr.at(k, t) == Value::integer(static_cast<int>(t)));
  CHECK_FALSE(validate(ts, tr));
}

TEST_CASE("no temporal operators means no state beyond init") {
  auto c = compile("component C\n  in a : int;\n  out b : int;\n  guarantee \"g\" : b = a + 1;\nend C;\n", "C");
  for (const auto& v : c.layer->ts->vars) CHECK(v.role != VarRole::Pre);
  CHECK(c.layer->ts->find("__init") >= 0);
}

TEST_CASE("floor is an int variable with bound constraints") {
  auto c = compile("component C\n  in x : real;\n  eq i : int = floor(x);\nend C;\n", "C");
  const TransitionSystem& ts = *c.layer->ts;
  const int x = ts.find("x");
  Trace tr = simulate(ts, 1, [&](int v, std::size_t) {
    return v == x ? Value::real(Rational(37, 10)) : Value::zero(ts.vars[v].type);
  });
  CHECK(*tr.at(ts.find("i"), 0) == Value::integer(3));
  CHECK_FALSE(validate(ts, tr));
  Trace bad = tr;
  bad.steps[0][ts.find("__floor0")] = Value::integer(4);
  bad.steps[0][ts.find("i")] = Value::integer(4);
  CHECK(validate(ts, bad));
}

TEST_CASE("H and Z streams") {
  TransitionSystem ts;
  const int x = ts.add_var("x", ScalarType::Bool, VarRole::Free);
  TermPtr h = ts.historically(ts.var(x));
  TermPtr z = ts.zpred(ts.var(x));
  TermPtr zh = ts.zpred(h);
  CHECK(ts.historically(ts.var(x)) == h);  // cached
  CHECK(run_bool(ts, h, {true, true, false, true}, x) == std::vector<bool>{true, true, false, false});
  CHECK(run_bool(ts, h, {true, true, true}, x) == std::vector<bool>{true, true, true});
  CHECK(run_bool(ts, h, {false, true, true}, x) == std::vector<bool>{false, false, false});
  CHECK(run_bool(ts, z, {false, true, true}, x) == std::vector<bool>{true, false, true});
  CHECK(run_bool(ts, zh, {true, false, true, true}, x) == std::vector<bool>{true, true, false, false});
}

TEST_CASE("assumption obligations follow the subcomponent order") {
  Diagnostics d;
  auto lib = model::load_library_text(
      {{"t.agv",
        "component P\n  in i : int;\n  out o : int;\n  assume \"pa\" : i > 0;\n  guarantee \"pg\" : o > 0;\nend P;\n"
        "component Top\nend Top;\n"
        "implementation Top.impl\n  subcomponents w : P; v : P;\n  connections w.o -> v.i; v.o -> w.i;\nend "
        "Top.impl;\n"}},
      d);
  REQUIRE_MESSAGE(lib, d);
  auto layer = compile_layer(*lib, *lib->implementation("Top"), d);
  REQUIRE(layer);
  auto obs = build_obligations(std::move(*layer));
  REQUIRE(obs.assumptions.size() == 2);
  CHECK(obs.assumptions[0].subject == "w");
  CHECK(obs.assumptions[0].sibling_hypotheses.empty());
  CHECK(obs.assumptions[1].subject == "v");
  CHECK(obs.assumptions[1].sibling_hypotheses == std::vector<std::string>{"w"});
  CHECK(is_true(obs.guarantee.property));
}

namespace {

// Random well-typed expression text. `guarded` tracks whether a `pre` here
// is covered by an enclosing arrow.
struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  std::string lit_int() { return std::to_string(pick(7) - 3); }
  std::string lit_real() { return std::to_string(pick(9) - 4) + "." + std::to_string(pick(4) * 25); }

  std::string e(char ty, int depth, bool guarded) {
    const int leaf = depth <= 0 ? 0 : pick(12);
    if (leaf < 3) {
      switch (ty) {
        case 'b': return pick(2) ? (pick(2) ? "a" : "b") : (pick(2) ? "true" : "false");
        case 'i': return pick(2) ? (pick(2) ? "x" : "y") : lit_int();
        default: return pick(2) ? (pick(2) ? "p" : "q") : lit_real();
      }
    }
    const int d = depth - 1;
    switch (pick(6)) {
      case 0: return "(if " + e('b', d, guarded) + " then " + e(ty, d, guarded) + " else " + e(ty, d, guarded) + ")";
      case 1: return "(" + e(ty, d, guarded) + " -> " + e(ty, d, true) + ")";
      case 2:
        if (guarded) return "pre(" + e(ty, d, false) + ")";
        break;
      default: break;
    }
    switch (ty) {
      case 'b':
        switch (pick(9)) {
          case 0: return "(" + e('i', d, guarded) + " < " + e('i', d, guarded) + ")";
          case 1: return "(" + e('r', d, guarded) + " >= " + e('r', d, guarded) + ")";
          case 2: return "(" + e('i', d, guarded) + " = " + e('i', d, guarded) + ")";
          case 3: return "(" + e('r', d, guarded) + " <> " + e('r', d, guarded) + ")";
          case 4: return "(" + e('b', d, guarded) + " and " + e('b', d, guarded) + ")";
          case 5: return "(" + e('b', d, guarded) + " or " + e('b', d, guarded) + ")";
          case 6: return "(" + e('b', d, guarded) + " => " + e('b', d, guarded) + ")";
          case 7: return "(not " + e('b', d, guarded) + ")";
          default: return "(" + e('b', d, guarded) + " = " + e('b', d, guarded) + ")";
        }
      case 'i':
        switch (pick(6)) {
          case 0: return "(" + e('i', d, guarded) + " + " + e('i', d, guarded) + ")";
          case 1: return "(" + e('i', d, guarded) + " - " + e('i', d, guarded) + ")";
          case 2: return "(" + lit_int() + " * " + e('i', d, guarded) + ")";
          case 3: return "floor(" + e('r', d, guarded) + ")";
          case 4: return "acc(" + e('i', d, guarded) + ")";
          default: return "(-(" + e('i', d, guarded) + "))";
        }
      default:
        switch (pick(6)) {
          case 0: return "(" + e('r', d, guarded) + " + " + e('r', d, guarded) + ")";
          case 1: return "(" + e('r', d, guarded) + " * " + lit_real() + ")";
          case 2: return "(" + e('r', d, guarded) + " / " + e('r', d, guarded) + ")";
          case 3: return "real(" + e('i', d, guarded) + ")";
          case 4: return "sel(" + e('b', d, guarded) + ", " + e('r', d, guarded) + ", " + e('r', d, guarded) + ")";
          default: return "(" + e('r', d, guarded) + " - " + e('r', d, guarded) + ")";
        }
    }
  }
};

}  // namespace

TEST_CASE("compiled systems agree with the expression interpreter") {
  const std::string prelude =
      "node acc(v : int) returns (s : int); let s = v -> pre(s) + v; tel\n"
      "node sel(c : bool; u, w : real) returns (r : real); let r = if c then u else w; tel\n";
  Gen gen(12345);
  const int steps = 6;
  int compared = 0;
  for (int iter = 0; iter < 150; ++iter) {
    const char ty = "bir"[iter % 3];
    const std::string type = ty == 'b' ? "bool" : ty == 'i' ? "int" : "real";
    const std::string expr = gen.e(ty, 4, false);
    const std::string src = prelude +
                            "component C\n  in a : bool;\n  in b : bool;\n  in x : int;\n  in y : int;\n  in p : real;\n  in q : real;\n"
                            "  eq out1 : " +
                            type + " = " + expr + ";\nend C;\n";
    Diagnostics d;
    auto lib = model::load_library_text({{"r.agv", src}}, d);
    REQUIRE_MESSAGE(lib, expr, "\n", d);
    auto layer = compile_component(*lib, *lib->component("C"), d);
    REQUIRE_MESSAGE(layer, expr);
    const TransitionSystem& ts = *layer->ts;

    // One random input table shared by both evaluators.
    std::map<std::string, std::vector<Value>> inputs;
    for (const char* n : {"a", "b"})
      for (int t = 0; t < steps; ++t) inputs[n].push_back(Value::boolean(gen.pick(2)));
    for (const char* n : {"x", "y"})
      for (int t = 0; t < steps; ++t) inputs[n].push_back(Value::integer(gen.pick(9) - 4));
    for (const char* n : {"p", "q"})
      for (int t = 0; t < steps; ++t) inputs[n].push_back(Value::real(Rational(gen.pick(17) - 8, 1 + gen.pick(3))));

    Trace tr = simulate(ts, steps, [&](int v, std::size_t t) {
      auto it = inputs.find(ts.vars[v].name);
      if (it != inputs.end()) return it->second[t];
      return Value::zero(ts.vars[v].type);  // pre variables at step 0
    });
    CHECK_FALSE(validate(ts, tr));

    const model::ComponentType* ct = lib->component("C");
    lang::StreamProgram prog({{"out1", {ct->eqs[0].def, 0}}},
                             [&](const std::string& var, int t) {
                               lang::StreamValue v;
                               v.scalar = inputs.at(var)[t];
                               return v;
                             },
                             ct->nodes.get());
    const int out = ts.find("out1");
    for (int t = 0; t < steps; ++t) {
      lang::StreamValue expect = prog.value("out1", t);
      CHECK_MESSAGE(expect.scalar == *tr.at(out, t), expr, " at step ", t);
      ++compared;
    }
  }
  CHECK(compared == 150 * steps);
}
