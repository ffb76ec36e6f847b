#include "agv/ts/system.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace agv::ts {

std::string_view to_string(StreamKind k) {
  switch (k) {
    case StreamKind::Assumption: return "assumption";
    case StreamKind::Guarantee: return "guarantee";
    case StreamKind::Assertion: return "assertion";
    case StreamKind::Lemma: return "lemma";
    case StreamKind::Connection: return "connection";
    case StreamKind::FloorBound: return "floor";
    case StreamKind::SubAssumption: return "subcomponent assumption";
    case StreamKind::SubGuarantee: return "subcomponent guarantee";
  }
  return "?";
}

int TransitionSystem::add_var(std::string n, ScalarType type, VarRole role) {
  if (index_.count(n)) throw std::logic_error("duplicate variable " + n);
  Variable v;
  v.name = n;
  v.type = type;
  v.role = role;
  vars.push_back(std::move(v));
  const int i = static_cast<int>(vars.size()) - 1;
  index_[std::move(n)] = i;
  return i;
}

int TransitionSystem::find(const std::string& n) const {
  auto it = index_.find(n);
  return it == index_.end() ? -1 : it->second;
}

std::string TransitionSystem::fresh(const std::string& stem) {
  while (true) {
    std::string n = stem + std::to_string(counters_[stem]++);
    if (!index_.count(n)) return n;
  }
}

TermPtr TransitionSystem::init() {
  if (init_ < 0) {
    init_ = add_var("__init", ScalarType::Bool, VarRole::Init);
    vars[init_].generated = true;
  }
  return var(init_);
}

TermPtr TransitionSystem::pre(const TermPtr& source) {
  if (source->op == Op::Const) return source;
  const std::string k = key(*source);
  if (auto it = pre_cache_.find(k); it != pre_cache_.end()) return it->second;
  const int i = add_var(fresh("__pre"), source->type, VarRole::Pre);
  vars[i].source = source;
  vars[i].generated = true;
  TermPtr t = var(i);
  pre_cache_[k] = t;
  return t;
}

TermPtr TransitionSystem::historically(const TermPtr& x) {
  const std::string k = key(*x);
  if (auto it = h_cache_.find(k); it != h_cache_.end()) return it->second;
  if (is_true(x)) return x;
  const int i = add_var(fresh("__H"), ScalarType::Bool, VarRole::Defined);
  vars[i].generated = true;
  TermPtr h = var(i);
  vars[i].def = mk_ite(init(), x, mk_and({x, pre(h)}));
  h_cache_[k] = h;
  return h;
}

TermPtr TransitionSystem::zpred(const TermPtr& x) {
  const std::string k = key(*x);
  if (auto it = z_cache_.find(k); it != z_cache_.end()) return it->second;
  if (is_true(x)) return x;
  const int i = add_var(fresh("__Z"), ScalarType::Bool, VarRole::Defined);
  vars[i].generated = true;
  vars[i].def = mk_ite(init(), mk_bool(true), pre(x));
  TermPtr z = var(i);
  z_cache_[k] = z;
  return z;
}

TermPtr TransitionSystem::floor(const TermPtr& x) {
  const std::string k = key(*x);
  if (auto it = floor_cache_.find(k); it != floor_cache_.end()) return it->second;
  const int i = add_var(fresh("__floor"), ScalarType::Int, VarRole::Free);
  vars[i].floor_arg = x;
  vars[i].generated = true;
  TermPtr f = var(i);
  TermPtr fr = mk(Op::ToReal, {f});
  Stream s;
  s.name = vars[i].name + " bounds";
  s.kind = StreamKind::FloorBound;
  s.term = mk_and({mk(Op::Le, {fr, x}), mk(Op::Lt, {x, mk(Op::Add, {fr, mk_const(Value::real(1))})})});
  constraints.push_back(std::move(s));
  floor_cache_[k] = f;
  return f;
}

std::optional<std::vector<int>> TransitionSystem::definition_order(std::string* cycle) const {
  std::vector<int> order;
  std::vector<int> state(vars.size(), 0);
  std::vector<int> path;
  std::function<bool(int)> visit = [&](int v) -> bool {
    if (state[v] == 2) return true;
    if (state[v] == 1) {
      if (cycle) {
        std::string c;
        auto it = std::find(path.begin(), path.end(), v);
        for (; it != path.end(); ++it) c += vars[*it].name + " -> ";
        *cycle = c + vars[v].name;
      }
      return false;
    }
    state[v] = 1;
    path.push_back(v);
    const TermPtr& body = vars[v].def ? vars[v].def : vars[v].floor_arg;
    std::vector<int> deps;
    collect_vars(*body, deps);
    for (int d : deps) {
      if (vars[d].role != VarRole::Defined && !vars[d].floor_arg) continue;
      if (!visit(d)) return false;
    }
    path.pop_back();
    state[v] = 2;
    order.push_back(v);
    return true;
  };
  for (int v = 0; v < static_cast<int>(vars.size()); ++v) {
    if (vars[v].role != VarRole::Defined && !vars[v].floor_arg) continue;
    if (!visit(v)) return std::nullopt;
  }
  return order;
}

std::vector<int> TransitionSystem::cone(const std::vector<TermPtr>& roots) const {
  std::vector<char> seen(vars.size(), 0);
  std::vector<int> work;
  auto add_term = [&](const TermPtr& t) {
    std::vector<int> vs;
    collect_vars(*t, vs);
    for (int v : vs)
      if (!seen[v]) {
        seen[v] = 1;
        work.push_back(v);
      }
  };
  for (const auto& r : roots) add_term(r);
  for (const auto& c : constraints) add_term(c.term);
  if (init_ >= 0 && !seen[init_]) {
    seen[init_] = 1;
    work.push_back(init_);
  }
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    if (vars[v].def) add_term(vars[v].def);
    if (vars[v].source) add_term(vars[v].source);
    if (vars[v].floor_arg) add_term(vars[v].floor_arg);
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vars.size()); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

std::vector<const Stream*> TransitionSystem::streams_of(StreamKind kind, const std::string& owner) const {
  std::vector<const Stream*> out;
  for (const auto& s : streams)
    if (s.kind == kind && s.owner == owner) out.push_back(&s);
  return out;
}

std::string TransitionSystem::print(const Term& t) const {
  return ts::print(t, [this](int i) { return vars[i].name; });
}

namespace {

struct MissingValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

std::optional<std::string> validate(const TransitionSystem& ts, const Trace& trace, const std::vector<int>& cone) {
  std::vector<int> vars = cone;
  if (vars.empty())
    for (int i = 0; i < static_cast<int>(ts.vars.size()); ++i) vars.push_back(i);
  for (std::size_t t = 0; t < trace.length(); ++t) {
    if (trace.steps[t].size() != ts.vars.size()) return "step " + std::to_string(t) + " has the wrong width";
    auto at = [&](std::size_t step) {
      return [&trace, &ts, step](int v) -> Value {
        const auto& val = trace.steps[step][v];
        if (!val) throw MissingValue("no value for " + ts.vars[v].name + " at step " + std::to_string(step));
        return *val;
      };
    };
    try {
      for (int v : vars) {
        const Variable& var = ts.vars[v];
        const auto& val = trace.steps[t][v];
        if (!val) return "no value for " + var.name + " at step " + std::to_string(t);
        if (val->type() != var.type) return "value of " + var.name + " has the wrong type";
        std::optional<Value> expect;
        switch (var.role) {
          case VarRole::Defined: expect = evaluate(*var.def, at(t)); break;
          case VarRole::Pre:
            if (t > 0) expect = evaluate(*var.source, at(t - 1));
            break;
          case VarRole::Init: expect = Value::boolean(t == 0); break;
          case VarRole::Free: break;
        }
        if (expect && !(*expect == *val)) {
          return var.name + " at step " + std::to_string(t) + " is " + val->to_string() + " but should be " +
                 expect->to_string();
        }
      }
      for (const auto& c : ts.constraints) {
        if (!evaluate(*c.term, at(t)).as_bool()) return c.name + " is violated at step " + std::to_string(t);
      }
    } catch (const MissingValue& e) {
      return e.what();
    }
  }
  return std::nullopt;
}

Trace simulate(const TransitionSystem& ts, std::size_t steps,
               const std::function<Value(int var, std::size_t step)>& free) {
  std::string cycle;
  auto order = ts.definition_order(&cycle);
  if (!order) throw std::runtime_error("instantaneous cycle: " + cycle);
  Trace tr;
  for (std::size_t t = 0; t < steps; ++t) {
    tr.steps.emplace_back(ts.vars.size());
    auto& row = tr.steps.back();
    auto cur = [&](int v) -> Value { return *row[v]; };
    auto prev = [&](int v) -> Value { return *tr.steps[t - 1][v]; };
    for (int v = 0; v < static_cast<int>(ts.vars.size()); ++v) {
      const Variable& var = ts.vars[v];
      switch (var.role) {
        case VarRole::Init: row[v] = Value::boolean(t == 0); break;
        case VarRole::Pre: row[v] = t == 0 ? free(v, 0) : evaluate(*var.source, prev); break;
        case VarRole::Free:
          if (!var.floor_arg) row[v] = free(v, t);
          break;
        case VarRole::Defined: break;
      }
    }
    for (int v : *order) {
      const Variable& var = ts.vars[v];
      if (var.def)
        row[v] = evaluate(*var.def, cur);
      else
        row[v] = Value::integer(floor_div(evaluate(*var.floor_arg, cur).as_rational()));
    }
  }
  return tr;
}

std::string dump(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "system " << ts.name << '\n';
  os << "var\n";
  for (const auto& v : ts.vars) {
    os << "  " << v.name << " : " << to_string(v.type) << ';';
    std::string note;
    switch (v.role) {
      case VarRole::Free: note = v.input ? "input" : (v.floor_arg ? "floor" : "free"); break;
      case VarRole::Defined: note = "defined"; break;
      case VarRole::Pre: note = "state"; break;
      case VarRole::Init: note = "state"; break;
    }
    os << "  -- " << note << '\n';
  }
  os << "let\n";
  for (const auto& v : ts.vars) {
    switch (v.role) {
      case VarRole::Defined: os << "  " << v.name << " = " << ts.print(*v.def) << ";\n"; break;
      case VarRole::Pre: os << "  " << v.name << " = pre(" << ts.print(*v.source) << ");\n"; break;
      case VarRole::Init: os << "  " << v.name << " = true -> false;\n"; break;
      case VarRole::Free:
        if (v.floor_arg) os << "  " << v.name << " = floor(" << ts.print(*v.floor_arg) << ");\n";
        break;
    }
  }
  for (const auto& c : ts.constraints) os << "  assert " << ts.print(*c.term) << ";  -- " << c.name << '\n';
  for (const auto& s : ts.streams) os << "  --%PROPERTY " << s.name << " : " << ts.print(*s.term) << ";\n";
  os << "tel\n";
  return os.str();
}

}  // namespace agv::ts
