// Acceptance runner: one PASS/FAIL line per criterion, budgets fixed here.

#include "oracle.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace agv;
using namespace agv::testing;

namespace {

constexpr double kFcsLayerBudget = 120;
constexpr double kFccLayerBudget = 600;
constexpr double kRealizabilityBudget = 30;
constexpr double kHalvingBudget = 5;
constexpr double kIsasBudget = 60;
constexpr double kCycleBudget = 10;
constexpr double kSoundnessBudget = 600;
constexpr double kOracleBudget = 600;
constexpr double kPrintedVariantBudget = 120;
constexpr int kSoundnessSystems = 200;
constexpr int kSoundnessDepth = 5;
constexpr int kOracleSystems = 500;
constexpr double kMaxUnknownShare = 0.05;
constexpr std::uint64_t kSoundnessSeed = 20150601;
constexpr std::uint64_t kOracleSeed = 20150602;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

const Json& case_named(const std::string& name) {
  static const Json g = golden();
  for (const auto& c : g["cases"])
    if (c["name"] == name) return c;
  throw std::runtime_error("no golden case " + name);
}

struct Timed {
  CliRun run;
  double seconds = 0;
};

Timed timed_case(const std::string& name) {
  const auto t0 = Clock::now();
  Timed t;
  t.run = run_case(case_named(name));
  t.seconds = since(t0);
  return t;
}

const Json* layer(const Json& report, const std::string& impl) {
  if (!report.is_object()) return nullptr;
  for (const auto& l : report["layers"])
    if (l["implementation"] == impl) return &l;
  return nullptr;
}

const Json* single_check(const Json& report) {
  if (!report.is_object()) return nullptr;
  const Json& list = report["command"] == "consistency" ? report["consistency"] : report["realizability"];
  return list.size() == 1 ? &list[0] : nullptr;
}

bool all_proved(const Json& l) {
  for (const auto& o : l["obligations"])
    if (o["verdict"] != "proved") return false;
  return !l["obligations"].empty();
}

double layer_seconds(const Json& l) {
  double ms = 0;
  for (const auto& o : l["obligations"]) ms += o["time_ms"].get<double>();
  return ms / 1000;
}

bool guarantee_fails(const model::Library& lib, const std::string& comp, const std::string& label,
                     const TraceTable& t, int step, const model::ComponentImpl* impl = nullptr) {
  const auto* type = lib.component(comp);
  if (!type) return false;
  Replay replay(lib, *type, t, impl);
  for (const auto& g : type->guarantees)
    if (g.label == label) return !replay.holds(*g.expr, step);
  return false;
}

Outcome layered_proof() {
  Outcome o;
  const Timed r = timed_case("fcs_layer");
  const Json* fcs = layer(r.run.json, "FCS.impl");
  const Json* fcc = layer(r.run.json, "FCC.impl");
  o.require(fcs && all_proved(*fcs), "FCS layer not fully proved");
  o.require(fcc && all_proved(*fcc), "FCC layer not fully proved");
  if (!fcs || !fcc) return o;
  const double fs = layer_seconds(*fcs), cs = layer_seconds(*fcc);
  o.require(fs < kFcsLayerBudget, "FCS layer over budget");
  o.require(cs < kFccLayerBudget, "FCC layer over budget");
  o.detail = "FCS layer " + secs(fs) + " (< " + secs(kFcsLayerBudget) + "), FCC layer " + secs(cs) + " (< " +
             secs(kFccLayerBudget) + "), run " + secs(r.seconds) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome osas_unrealizability() {
  Outcome o;
  const Timed orig = timed_case("osas_original_realizability");
  const Json* v = single_check(orig.run.json);
  o.require(v && (*v)["verdict"] == "unrealizable", "original contract not unrealizable");
  if (v && v->contains("trace")) {
    const TraceTable t = trace_table((*v)["trace"]);
    o.require(at(t, "latched_failed", 0).as_bool() && at(t, "ccdl_failed", 0).as_bool(),
              "witness is not latched_failed and ccdl_failed at step 0");
  }
  const Timed fixed = timed_case("osas_fixed_realizability");
  const Json* w = single_check(fixed.run.json);
  o.require(w && (*w)["verdict"] == "no-witness" && (*w)["k"] == 5, "fixed contract is not no-witness up to 5");
  o.require(orig.seconds < kRealizabilityBudget && fixed.seconds < kRealizabilityBudget, "over budget");
  const std::string info = "original " + secs(orig.seconds) + ", fixed " + secs(fixed.seconds) + " (< " +
                           secs(kRealizabilityBudget) + " each)";
  o.detail = o.pass ? info : info + "; " + o.detail;
  return o;
}

Outcome halving() {
  Outcome o;
  const Timed cons = timed_case("halving_consistency");
  const Json* c = single_check(cons.run.json);
  o.require(c && (*c)["verdict"] == "consistent", "consistency verdict");
  if (c && c->contains("trace")) {
    const TraceTable t = trace_table((*c)["trace"]);
    o.require(at(t, "value_in", 0).as_rational() == 2 * at(t, "half_out", 0).as_rational(), "witness not in = 2 out");
  }
  const Timed real = timed_case("halving_realizability");
  const Json* r = single_check(real.run.json);
  o.require(r && (*r)["verdict"] == "unrealizable", "realizability verdict");
  if (r && r->contains("trace")) {
    const TraceTable t = trace_table((*r)["trace"]);
    const std::size_t last = (*r)["trace"]["length"].get<std::size_t>() - 1;
    o.require(at(t, "value_in", last).as_integer() % 2 != 0, "witness input is even");
  }
  o.require(cons.seconds < kHalvingBudget && real.seconds < kHalvingBudget, "over budget");
  const std::string info = "consistency " + secs(cons.seconds) + ", realizability " + secs(real.seconds) + " (< " +
                           secs(kHalvingBudget) + " each)";
  o.detail = o.pass ? info : info + "; " + o.detail;
  return o;
}

Outcome isas_implementation() {
  Outcome o;
  const Timed r = timed_case("isas_implementation");
  const Json* l = layer(r.run.json, "ISAS.impl");
  const Json* ob = nullptr;
  if (l)
    for (const auto& x : (*l)["obligations"])
      if (x["kind"] == "guarantee") ob = &x;
  o.require(ob && (*ob)["verdict"] == "falsified", "guarantee obligation not falsified");
  if (ob && ob->contains("trace")) {
    const TraceTable t = trace_table((*ob)["trace"]);
    const int k = (*ob)["k"];
    if (auto why = dual_miscompare_problem(t, k)) o.require(false, "scenario: " + *why);
    const auto lib = case_library(case_named("isas_implementation"));
    o.require(lib && guarantee_fails(*lib, "ISAS", "ISAS-S-220", t, k, lib->implementation("ISAS")),
              "ISAS-S-220 holds on replay");
  }
  o.require(r.seconds < kIsasBudget, "over budget");
  o.detail = o.pass ? secs(r.seconds) + " (< " + secs(kIsasBudget) + ")" : o.detail;
  return o;
}

Outcome cycle_soundness() {
  Outcome o;
  const Timed r = timed_case("positive_feedback");
  const Json* l = layer(r.run.json, "Loop.impl");
  int falsified = 0;
  if (l)
    for (const auto& x : (*l)["obligations"])
      if (x["kind"] == "assumption" && x["verdict"] == "falsified") ++falsified;
  o.require(falsified >= 1, "no falsified assumption obligation");
  o.require(l && (*l)["status"] != "proved", "loop proved");
  o.require(r.seconds < kCycleBudget, "over budget");
  o.detail = o.pass ? std::to_string(falsified) + " falsified assumption obligation(s), " + secs(r.seconds) + " (< " +
                          secs(kCycleBudget) + ")"
                    : o.detail;
  return o;
}

engine::CheckConfig suite_config() {
  engine::CheckConfig cfg;
  cfg.max_k = 10;
  cfg.bmc_depth = 20;
  cfg.timeout_s = 30;
  return cfg;
}

Outcome soundness_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto st = compositional_soundness(kSoundnessSystems, kSoundnessSeed, kSoundnessDepth, suite_config());
  const double s = since(t0);
  o.require(st.violations == 0, std::to_string(st.violations) + " violations");
  o.require(st.mismatches.empty(), st.mismatches.empty() ? "" : st.mismatches.front());
  o.require(st.all_proved > 0, "no fully proved system");
  o.require(s < kSoundnessBudget, "over budget");
  std::ostringstream d;
  d << st.systems << " systems, " << st.all_proved << " fully proved, " << st.traces << " traces of depth "
    << kSoundnessDepth << ", " << st.violations << " violations, " << st.counterexamples
    << " counterexamples confirmed, " << st.unknown << " unknown, " << secs(s) << " (< " << secs(kSoundnessBudget)
    << ")";
  o.detail = o.pass ? d.str() : d.str() + "; " + o.detail;
  return o;
}

Outcome oracle_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto st = invariant_vs_explicit(kOracleSystems, kOracleSeed, suite_config());
  const double s = since(t0);
  o.require(st.mismatches.empty(), st.mismatches.empty() ? "" : st.mismatches.front());
  o.require(st.unknown < kMaxUnknownShare * st.cases, "too many unknowns");
  o.require(s < kOracleBudget, "over budget");
  std::ostringstream d;
  d << st.cases << " systems: " << st.proved << " proved, " << st.falsified << " falsified (" << st.replayed
    << " replayed), " << st.unknown << " unknown (< " << kMaxUnknownShare * 100 << "%), " << st.mismatches.size()
    << " mismatches, " << secs(s) << " (< " << secs(kOracleBudget) << ")";
  o.detail = o.pass ? d.str() : d.str() + "; " + o.detail;
  return o;
}

Outcome printed_variant() {
  Outcome o;
  const Timed printed = timed_case("fcc_bound_as_printed");
  const Json* l = layer(printed.run.json, "FCC.impl");
  const Json* ob = nullptr;
  if (l)
    for (const auto& x : (*l)["obligations"])
      if (x["kind"] == "guarantee") ob = &x;
  o.require(ob && (*ob)["verdict"] == "falsified", "printed bound not falsified");
  if (ob && ob->contains("trace")) {
    const auto lib = case_library(case_named("fcc_bound_as_printed"));
    o.require(lib && !replay_problem(*lib, *l, *ob), "trace does not replay");
    o.require(lib && guarantee_fails(*lib, "FCC", "FCC bound", trace_table((*ob)["trace"]), (*ob)["k"]),
              "FCC bound holds on replay");
  }
  const Timed fixed = timed_case("fcc_layer");
  const Json* f = layer(fixed.run.json, "FCC.impl");
  o.require(f && all_proved(*f), "corrected bound not proved");
  o.require(printed.seconds < kPrintedVariantBudget && fixed.seconds < kPrintedVariantBudget, "over budget");
  const std::string info = "printed " + secs(printed.seconds) + ", corrected " + secs(fixed.seconds) + " (< " +
                           secs(kPrintedVariantBudget) + " each)";
  o.detail = o.pass ? info : info + "; " + o.detail;
  return o;
}

Outcome trace_replay() {
  Outcome o;
  int total = 0, ok = 0;
  const Json g = golden();
  for (const auto& c : g["cases"]) {
    const CliRun r = run_case(c);
    const auto traces = reported_traces(r.json);
    if (traces.empty()) continue;
    const auto lib = case_library(c);
    for (const auto& [l, item] : traces) {
      ++total;
      const auto why = lib ? replay_problem(*lib, l, item) : std::optional<std::string>("library failed to load");
      if (!why) ++ok;
      else o.require(false, c["name"].get<std::string>() + ": " + *why);
    }
  }
  o.require(total > 0, "no traces reported");
  const std::string info = std::to_string(ok) + "/" + std::to_string(total) + " corpus traces replay (100% required)";
  o.detail = o.pass ? info : info + "; " + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"layered QFCS proof", layered_proof},
      {"OSAS unrealizability", osas_unrealizability},
      {"integer halving", halving},
      {"ISAS implementation check", isas_implementation},
      {"cycle soundness", cycle_soundness},
      {"compositional soundness suite", soundness_suite},
      {"engine oracle equivalence", oracle_suite},
      {"printed-variant falsification", printed_variant},
      {"trace replay", trace_replay},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
