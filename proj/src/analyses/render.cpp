#include "agv/analyses/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace agv::analyses {

using engine::Verdict;
using engine::VerdictKind;
using Json = nlohmann::ordered_json;

std::vector<int> visible_vars(const ts::TransitionSystem& ts, const std::vector<int>& vars) {
  std::vector<int> out;
  for (int v : vars)
    if (!ts.vars[v].generated) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const char* overall(Status s) {
  switch (s) {
    case Status::Proved: return "passed";
    case Status::Failed: return "failed";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

std::string cell(const std::optional<Value>& v) { return v ? v->to_string() : "-"; }

// At the last step of an unrealizability witness only the inputs matter;
// no output valuation exists there.
bool masked(const ts::TransitionSystem& ts, const Verdict& v, int var, std::size_t step) {
  return v.kind == VerdictKind::UnrealizableWitness && step + 1 == v.trace->length() && !ts.vars[var].input;
}

void trace_table(std::ostream& os, const ts::TransitionSystem& ts, const Verdict& v) {
  const ts::Trace& tr = *v.trace;
  std::vector<int> vars = visible_vars(ts, v.trace_vars);
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"step"});
  for (std::size_t t = 0; t < tr.length(); ++t) rows[0].push_back(std::to_string(t));
  for (int var : vars) {
    rows.push_back({ts.vars[var].name});
    for (std::size_t t = 0; t < tr.length(); ++t) rows.back().push_back(masked(ts, v, var, t) ? "*" : cell(tr.at(var, t)));
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  for (const auto& r : rows) {
    os << "      ";
    for (std::size_t c = 0; c < r.size(); ++c) {
      os << r[c];
      if (c + 1 < r.size()) os << std::string(width[c] - r[c].size() + 2, ' ');
    }
    os << '\n';
  }
  if (v.kind == VerdictKind::UnrealizableWitness)
    os << "      (* no output value satisfies the guarantees at step " << tr.length() - 1 << ")\n";
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream os;
  os << to_string(v.kind);
  switch (v.kind) {
    case VerdictKind::Proved: os << " (k=" << v.k << ")"; break;
    case VerdictKind::Falsified:
    case VerdictKind::UnrealizableWitness: os << " at step " << v.k; break;
    case VerdictKind::Inconsistent:
    case VerdictKind::NoWitnessUpTo:
    case VerdictKind::ConsistentWitness: os << " (depth " << v.k << ")"; break;
    case VerdictKind::Unknown: os << ": " << v.reason; break;
  }
  return os.str();
}

Json value_json(const std::optional<Value>& v) {
  if (!v) return nullptr;
  switch (v->type()) {
    case ScalarType::Bool: return v->as_bool();
    case ScalarType::Int: {
      const Integer i = v->as_integer();
      if (i >= std::numeric_limits<std::int64_t>::min() && i <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(i);
      return i.str();
    }
    case ScalarType::Real: return v->to_string();
  }
  return nullptr;
}

Json trace_json(const ts::TransitionSystem& ts, const Verdict& v) {
  Json t;
  t["length"] = v.trace->length();
  Json vars = Json::array();
  for (int var : visible_vars(ts, v.trace_vars)) {
    Json row;
    row["name"] = ts.vars[var].name;
    row["type"] = std::string(to_string(ts.vars[var].type));
    Json values = Json::array();
    for (std::size_t s = 0; s < v.trace->length(); ++s) values.push_back(masked(ts, v, var, s) ? Json(nullptr) : value_json(v.trace->at(var, s)));
    row["values"] = std::move(values);
    vars.push_back(std::move(row));
  }
  t["variables"] = std::move(vars);
  return t;
}

void verdict_fields(Json& j, const ts::TransitionSystem* ts, const Verdict& v) {
  j["verdict"] = std::string(to_string(v.kind));
  j["k"] = v.k;
  j["time_ms"] = static_cast<std::int64_t>(v.time_ms + 0.5);
  if (v.kind == VerdictKind::Unknown) j["reason"] = v.reason;
  if (v.trace && ts) j["trace"] = trace_json(*ts, v);
}

const char* severity(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "?";
}

void component_check_human(std::ostream& os, const ComponentCheck& c) {
  os << c.analysis << ' ' << c.component << ": " << verdict_text(c.verdict) << '\n';
  if (c.verdict.trace && c.ts) trace_table(os, *c.ts, c.verdict);
}

}  // namespace

std::string render_human(const Report& r) {
  std::ostringstream os;
  for (const auto& d : r.lint) os << format(d) << '\n';
  for (const auto& l : r.layers) {
    os << "layer " << l.implementation << " (" << l.path;
    if (l.instances.size() > 1) os << " and " << l.instances.size() - 1 << " more";
    os << ")" << (l.leaf ? " assertions" : "") << ": " << to_string(l.status) << '\n';
    for (const auto& ob : l.obligations) {
      os << "  " << to_string(ob.kind) << ' ' << ob.name << ": " << verdict_text(ob.verdict) << "  ["
         << static_cast<long long>(ob.verdict.time_ms + 0.5) << " ms]\n";
      if (ob.kind == ts::ObligationKind::Guarantee && !l.sound && !l.leaf)
        os << "    (rests on assumption obligations that are not proved)\n";
      if (ob.verdict.trace && l.ts) trace_table(os, *l.ts, ob.verdict);
    }
  }
  for (const auto& c : r.consistency) component_check_human(os, c);
  for (const auto& c : r.realizability) component_check_human(os, c);
  os << "result: " << overall(r.status()) << '\n';
  return os.str();
}

std::string render_json(const Report& r) {
  Json j;
  j["tool"] = "agv";
  j["command"] = r.command;
  j["root"] = r.root;
  j["status"] = overall(r.status());
  Json layers = Json::array();
  for (const auto& l : r.layers) {
    Json lj;
    lj["path"] = l.path;
    lj["implementation"] = l.implementation;
    lj["instances"] = l.instances;
    lj["leaf"] = l.leaf;
    lj["status"] = std::string(to_string(l.status));
    lj["sound"] = l.sound;
    Json obs = Json::array();
    for (const auto& ob : l.obligations) {
      Json oj;
      oj["name"] = ob.name;
      oj["kind"] = std::string(to_string(ob.kind));
      oj["subject"] = ob.subject;
      oj["provenance"] = ob.provenance;
      verdict_fields(oj, l.ts.get(), ob.verdict);
      obs.push_back(std::move(oj));
    }
    lj["obligations"] = std::move(obs);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  for (const auto& [key, list] : {std::pair{"consistency", &r.consistency}, std::pair{"realizability", &r.realizability}}) {
    Json arr = Json::array();
    for (const auto& c : *list) {
      Json cj;
      cj["component"] = c.component;
      cj["depth"] = c.depth;
      verdict_fields(cj, c.ts.get(), c.verdict);
      arr.push_back(std::move(cj));
    }
    j[key] = std::move(arr);
  }
  Json lint = Json::array();
  for (const auto& d : r.lint) {
    Json dj;
    dj["severity"] = severity(d.severity);
    dj["file"] = d.file;
    dj["line"] = d.span.line;
    dj["col"] = d.span.col;
    dj["message"] = d.message;
    lint.push_back(std::move(dj));
  }
  j["lint"] = std::move(lint);
  return j.dump(2) + "\n";
}

}  // namespace agv::analyses
