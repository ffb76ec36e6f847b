#pragma once

// Helpers shared by the corpus tests and the acceptance runner.

#include "agv/cli/cli.hpp"
#include "agv/lang/eval.hpp"
#include "agv/model/library.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace agv::testing {

using Json = nlohmann::json;

inline std::string corpus_dir() { return AGV_CORPUS_DIR "/qfcs"; }

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json json;  // parsed `out` when it is JSON
};

inline CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (!r.out.empty() && r.out.front() == '{') r.json = Json::parse(r.out, nullptr, false);
  return r;
}

/// Runs a golden case with JSON output.
inline CliRun run_case(const Json& c) {
  std::vector<std::string> args{c["command"].get<std::string>()};
  for (const auto& in : c["inputs"]) {
    const std::string p = in.get<std::string>();
    args.push_back(p == "." ? corpus_dir() : corpus_dir() + "/" + p);
  }
  for (const auto& a : c["args"]) args.push_back(a.get<std::string>());
  args.push_back("--format");
  args.push_back("json");
  return run_cli(args);
}

/// The library a golden case loads.
inline std::optional<model::Library> case_library(const Json& c) {
  std::vector<std::string> paths;
  for (const auto& in : c["inputs"]) {
    const std::string p = in.get<std::string>();
    paths.push_back(p == "." ? corpus_dir() : corpus_dir() + "/" + p);
  }
  Diagnostics d;
  return model::load_library(paths, d);
}

/// Every trace in a report, paired with its layer (null for component checks).
inline std::vector<std::pair<Json, Json>> reported_traces(const Json& report) {
  std::vector<std::pair<Json, Json>> out;
  if (!report.is_object()) return out;
  for (const auto& l : report["layers"])
    for (const auto& o : l["obligations"])
      if (o.contains("trace")) out.emplace_back(l, o);
  for (const char* section : {"consistency", "realizability"})
    for (const auto& c : report[section])
      if (c.contains("trace")) out.emplace_back(Json(nullptr), c);
  return out;
}

inline Json golden() {
  std::ifstream in(corpus_dir() + "/golden.json");
  return Json::parse(in);
}

/// Checks a report against the documented schema. Returns the first problem.
inline std::optional<std::string> schema_problem(const Json& j) {
  auto need = [&](const Json& o, const char* key, Json::value_t t, const std::string& where) -> std::optional<std::string> {
    if (!o.is_object() || !o.contains(key)) return where + ": missing '" + key + "'";
    const Json& v = o.at(key);
    const bool ok = t == Json::value_t::number_integer ? v.is_number_integer() : v.type() == t;
    if (!ok) return where + ": '" + key + "' has the wrong type";
    return std::nullopt;
  };
  using V = Json::value_t;
  auto verdict_problem = [&](const Json& o, const std::string& where) -> std::optional<std::string> {
    for (auto [k, t] : {std::pair{"verdict", V::string}, {"k", V::number_integer}, {"time_ms", V::number_integer}})
      if (auto p = need(o, k, t, where)) return p;
    static const std::vector<std::string> kinds{"proved",       "falsified",  "consistent", "inconsistent",
                                                "unrealizable", "no-witness", "unknown"};
    if (std::find(kinds.begin(), kinds.end(), o["verdict"].get<std::string>()) == kinds.end())
      return where + ": unknown verdict";
    const std::string v = o["verdict"];
    const bool witness = v == "falsified" || v == "consistent" || v == "unrealizable";
    if (witness != o.contains("trace")) return where + ": trace presence does not match the verdict";
    if (o.contains("trace")) {
      const Json& t = o["trace"];
      if (auto p = need(t, "length", V::number_integer, where + ".trace")) return p;
      if (auto p = need(t, "variables", V::array, where + ".trace")) return p;
      for (const auto& var : t["variables"]) {
        if (auto p = need(var, "name", V::string, where + ".trace")) return p;
        if (auto p = need(var, "type", V::string, where + ".trace")) return p;
        if (auto p = need(var, "values", V::array, where + ".trace")) return p;
        if (var["values"].size() != t["length"].get<std::size_t>()) return where + ".trace: ragged values";
      }
    }
    if (v == "unknown" && !o.contains("reason")) return where + ": unknown without reason";
    return std::nullopt;
  };
  for (auto [k, t] : {std::pair{"tool", V::string}, {"command", V::string}, {"root", V::string}, {"status", V::string},
                      {"layers", V::array}, {"consistency", V::array}, {"realizability", V::array}, {"lint", V::array}})
    if (auto p = need(j, k, t, "report")) return p;
  for (const auto& l : j["layers"]) {
    for (auto [k, t] : {std::pair{"path", V::string}, {"implementation", V::string}, {"instances", V::array},
                        {"leaf", V::boolean}, {"status", V::string}, {"sound", V::boolean}, {"obligations", V::array}})
      if (auto p = need(l, k, t, "layer")) return p;
    for (const auto& o : l["obligations"]) {
      for (auto [k, t] : {std::pair{"name", V::string}, {"kind", V::string}, {"subject", V::string},
                          {"provenance", V::array}})
        if (auto p = need(o, k, t, "obligation")) return p;
      if (auto p = verdict_problem(o, "obligation " + o["name"].get<std::string>())) return p;
    }
  }
  for (const char* section : {"consistency", "realizability"})
    for (const auto& c : j[section]) {
      if (auto p = need(c, "component", V::string, section)) return p;
      if (auto p = need(c, "depth", V::number_integer, section)) return p;
      if (auto p = verdict_problem(c, section)) return p;
    }
  for (const auto& d : j["lint"])
    for (auto [k, t] : {std::pair{"severity", V::string}, {"file", V::string}, {"message", V::string}})
      if (auto p = need(d, k, t, "lint")) return p;
  return std::nullopt;
}

/// A JSON trace as name -> per-step values.
using TraceTable = std::map<std::string, std::vector<std::optional<Value>>>;

inline TraceTable trace_table(const Json& trace) {
  TraceTable t;
  for (const auto& var : trace["variables"]) {
    const std::string type = var["type"];
    auto& row = t[var["name"].get<std::string>()];
    for (const auto& v : var["values"]) {
      if (v.is_null())
        row.emplace_back();
      else if (type == "bool")
        row.push_back(Value::boolean(v.get<bool>()));
      else if (type == "int")
        row.push_back(v.is_string() ? parse_value(v.get<std::string>(), ScalarType::Int)
                                    : std::optional<Value>(Value::integer(v.get<std::int64_t>())));
      else
        row.push_back(parse_value(v.get<std::string>(), ScalarType::Real));
    }
  }
  return t;
}

inline Value at(const TraceTable& t, const std::string& name, std::size_t step) {
  auto it = t.find(name);
  if (it == t.end() || step >= it->second.size() || !it->second[step])
    throw std::runtime_error("trace has no value for " + name);
  return *it->second[step];
}

/// Source-level replay: a component's eqs are interpreted directly, every
/// other variable is read from the trace (missing leaves default to zero).
class Replay {
 public:
  Replay(const model::Library& lib, const model::ComponentType& type, const TraceTable& trace,
         const model::ComponentImpl* impl = nullptr)
      : lib_(lib), trace_(trace) {
    std::map<std::string, lang::StreamDef> defs;
    auto add = [&](const std::vector<model::Equation>& eqs) {
      for (const auto& eq : eqs)
        if (eq.def)
          for (std::size_t i = 0; i < eq.names.size(); ++i) defs[eq.names[i]] = {eq.def, i};
    };
    add(type.eqs);
    if (impl) add(impl->eqs);
    for (const auto& [name, def] : defs) defined_.push_back(name);
    for (const auto& p : type.ports) types_[p.name] = p.type;
    for (const auto& eq : type.eqs)
      for (const auto& n : eq.names) types_[n] = eq.type;
    program_ = std::make_unique<lang::StreamProgram>(
        std::move(defs), [this](const std::string& var, int step) { return input(var, step); }, type.nodes.get());
  }

  bool holds(const lang::Expr& e, int step) { return program_->eval(e, step).scalar.as_bool(); }

  bool all(const std::vector<model::Property>& ps, int step) {
    for (const auto& p : ps)
      if (!holds(*p.expr, step)) return false;
    return true;
  }

  /// First eq variable whose interpreted value differs from the trace at
  /// one of `steps` steps, compared leaf by leaf.
  std::optional<std::string> eq_mismatch(int steps) {
    for (const auto& name : defined_)
      for (int t = 0; t < steps; ++t)
        if (auto bad = compare(program_->value(name, t), name, t)) return *bad + " at step " + std::to_string(t);
    return std::nullopt;
  }

 private:
  lang::StreamValue input(const std::string& var, int step) {
    auto it = types_.find(var);
    lang::StreamValue v = lang::zero_value(it == types_.end() ? lang::Type::real() : it->second, &lib_.records());
    fill(v, var, step);
    return v;
  }

  void fill(lang::StreamValue& v, const std::string& path, int step) {
    if (v.is_record()) {
      for (std::size_t i = 0; i < v.names.size(); ++i) fill(v.members[i], path + "." + v.names[i], step);
      return;
    }
    auto row = trace_.find(path);
    if (row != trace_.end() && static_cast<std::size_t>(step) < row->second.size() && row->second[step])
      v.scalar = *row->second[step];
  }

  std::optional<std::string> compare(const lang::StreamValue& v, const std::string& path, int step) const {
    if (v.is_record()) {
      for (std::size_t i = 0; i < v.names.size(); ++i)
        if (auto bad = compare(v.members[i], path + "." + v.names[i], step)) return bad;
      return std::nullopt;
    }
    auto row = trace_.find(path);
    if (row == trace_.end() || static_cast<std::size_t>(step) >= row->second.size() || !row->second[step])
      return std::nullopt;
    if (!(*row->second[step] == v.scalar))
      return path + " is " + row->second[step]->to_string() + " in the trace, " + v.scalar.to_string() + " replayed";
    return std::nullopt;
  }

  const model::Library& lib_;
  const TraceTable& trace_;
  std::vector<std::string> defined_;
  std::map<std::string, lang::Type> types_;
  std::unique_ptr<lang::StreamProgram> program_;
};

/// Checks the dual-channel miscompare scenario at step `k`: channels 1 and 2
/// neither stale nor out of range, miscomparing with each other; the EGI
/// value not faulty; channel 1 off from it, channel 2 within tolerance; and
/// the output the average of channel 2 and EGI. Returns the first condition
/// that does not hold.
inline std::optional<std::string> dual_miscompare_problem(const TraceTable& t, std::size_t k) {
  const Rational tol(1, 2);
  auto off = [&](const Rational& a, const Rational& b) { return a - b > tol || b - a > tol; };
  const Rational d1 = at(t, "d1", k).as_rational();
  const Rational d2 = at(t, "d2", k).as_rational();
  const Rational egi = at(t, "egi", k).as_rational();
  for (const char* f : {"stale1", "stale2", "oor1", "oor2"})
    if (at(t, f, k).as_bool()) return std::string(f) + " is set";
  if (!off(d1, d2)) return std::string("channels agree");
  if (at(t, "egi_fault", k).as_bool()) return std::string("egi is faulty");
  if (!off(d1, egi)) return std::string("channel 1 agrees with egi");
  if (off(d2, egi)) return std::string("channel 2 miscompares with egi");
  if (at(t, "dual_sel", k).as_rational() != (d2 + egi) / 2) return std::string("output is not the channel 2 and egi average");
  return std::nullopt;
}

/// Re-validates a reported trace with the stream interpreter, independently
/// of the transition-system encoding: eqs recomputed from their sources,
/// connections, assertions, and the claim the verdict makes. `item` is a
/// JSON obligation (with `layer` its JSON layer) or a consistency or
/// realizability entry (with `layer` null). Returns the first problem.
inline std::optional<std::string> replay_problem(const model::Library& lib, const Json& layer, const Json& item) {
  if (!item.contains("trace")) return std::nullopt;
  const TraceTable table = trace_table(item["trace"]);
  const int n = item["trace"]["length"];
  const std::string verdict = item["verdict"];
  const bool unrealizable = verdict == "unrealizable";
  const int full = unrealizable ? n - 1 : n;  // steps carrying every value

  const model::ComponentImpl* impl = nullptr;
  const model::ComponentType* type = nullptr;
  if (!layer.is_null()) {
    std::string name = layer["implementation"];
    impl = lib.implementation(name.substr(0, name.find('.')));
    if (!impl) return "no implementation " + name;
    type = lib.component(impl->type_name);
  } else {
    type = lib.component(item["component"].get<std::string>());
  }
  if (!type) return std::string("component not found");

  try {
    Replay parent(lib, *type, table, impl);
    if (auto bad = parent.eq_mismatch(full)) return "eq " + *bad;

    std::vector<TraceTable> child_tables;
    std::vector<std::unique_ptr<Replay>> children;
    std::vector<const model::ComponentType*> child_types;
    const std::vector<model::Subcomponent> none;
    for (const auto& sub : impl ? impl->subcomponents : none) {
      TraceTable t;
      for (const auto& [k, v] : table)
        if (k.rfind(sub.name + ".", 0) == 0) t[k.substr(sub.name.size() + 1)] = v;
      child_tables.push_back(std::move(t));
      child_types.push_back(lib.component(sub.type_name));
    }
    for (std::size_t i = 0; i < child_types.size(); ++i) {
      children.push_back(std::make_unique<Replay>(lib, *child_types[i], child_tables[i]));
      if (auto bad = children.back()->eq_mismatch(full)) return "child eq " + *bad;
    }
    if (impl)
      for (const auto& c : impl->connections)
        for (const auto& [k, v] : table) {
          if (k != c.source && k.rfind(c.source + ".", 0) != 0) continue;
          auto dst = table.find(c.target + k.substr(c.source.size()));
          if (dst == table.end()) continue;
          for (int t = 0; t < full; ++t)
            if (v[t] && dst->second[t] && !(*v[t] == *dst->second[t]))
              return "connection " + c.source + " -> " + c.target + " broken at step " + std::to_string(t);
        }

    const bool leaf = impl && impl->subcomponents.empty();
    for (int t = 0; t < full; ++t) {
      if (!parent.all(type->assumptions, t)) return "assumption fails at step " + std::to_string(t);
      if (leaf && !parent.all(impl->assertions, t)) return "assertion fails at step " + std::to_string(t);
    }
    if (verdict == "consistent") {
      for (int t = 0; t < n; ++t)
        if (!parent.all(type->guarantees, t)) return "guarantee fails at step " + std::to_string(t);
      return std::nullopt;
    }
    if (unrealizable) {
      if (n > 0 && !parent.all(type->assumptions, n - 1)) return "assumption fails at the last step";
      for (int t = 0; t + 1 < n; ++t)
        if (!parent.all(type->guarantees, t)) return "guarantee fails before the last step";
      return std::nullopt;
    }
    if (verdict != "falsified") return std::nullopt;

    // The obligation's hypotheses hold and its conclusion fails at the end.
    const std::string kind = item["kind"];
    const std::string subject = item["subject"];
    for (std::size_t i = 0; i < children.size(); ++i) {
      const int upto = kind == "assumption" ? n - 1 : n;
      for (int t = 0; t < upto; ++t)
        if (!children[i]->all(child_types[i]->guarantees, t))
          return impl->subcomponents[i].name + " guarantee fails at step " + std::to_string(t);
    }
    if (kind == "guarantee") {
      if (parent.all(type->guarantees, n - 1)) return std::string("guarantees hold at the last step");
    } else if (kind == "assumption") {
      bool found = false;
      for (std::size_t i = 0; i < children.size(); ++i)
        if (impl->subcomponents[i].name == subject) {
          found = true;
          if (children[i]->all(child_types[i]->assumptions, n - 1))
            return subject + " assumptions hold at the last step";
        }
      if (!found) return "no subcomponent " + subject;
    } else if (kind == "lemma") {
      if (parent.all(impl->lemmas, n - 1)) return std::string("lemmas hold at the last step");
    }
  } catch (const std::exception& e) {
    return std::string("replay error: ") + e.what();
  }
  return std::nullopt;
}

}  // namespace agv::testing
