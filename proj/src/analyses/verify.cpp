#include "agv/analyses/report.hpp"

#include "agv/ts/compile.hpp"

#include <map>

namespace agv::analyses {

using engine::Verdict;
using engine::VerdictKind;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Failed: return "failed";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

namespace {

Status combine(Status a, Status b) {
  if (a == Status::Failed || b == Status::Failed) return Status::Failed;
  if (a == Status::Unknown || b == Status::Unknown) return Status::Unknown;
  return Status::Proved;
}

Status status_of(const Verdict& v) {
  if (v.failed()) return Status::Failed;
  if (v.kind == VerdictKind::Unknown) return Status::Unknown;
  return Status::Proved;
}

struct Pending {
  LayerResult result;
  std::optional<ts::LayerObligations> obligations;
};

bool leaf_check(const model::Instance& inst) {
  return inst.is_leaf() && inst.impl && !inst.impl->assertions.empty() && !inst.type->guarantees.empty();
}

ObligationResult describe(const ts::Obligation& ob) {
  ObligationResult r;
  r.name = ob.name;
  r.kind = ob.kind;
  r.subject = ob.subject;
  r.provenance = ob.provenance;
  return r;
}

}  // namespace

Status Report::status() const {
  Status s = Status::Proved;
  for (const auto& l : layers) {
    s = combine(s, l.status);
    for (const auto& ob : l.obligations) s = combine(s, status_of(ob.verdict));
  }
  for (const auto* checks : {&consistency, &realizability})
    for (const auto& c : *checks) s = combine(s, status_of(c.verdict));
  return s;
}

int exit_code(const Report& r) {
  switch (r.status()) {
    case Status::Proved: return 0;
    case Status::Failed: return 1;
    case Status::Unknown: return 3;
  }
  return 3;
}

Report verify_all(const model::Library& lib, const model::Instance& root, const engine::CheckConfig& cfg,
                  Diagnostics& diags, bool parallel) {
  Report report;
  report.command = "verify";
  report.root = root.type->name + (root.impl ? ".impl" : "");

  std::vector<Pending> pending;
  std::map<std::string, std::size_t> by_impl;
  for (const model::Instance* inst : model::flatten(root)) {
    if (!inst->impl || (inst->is_leaf() && !leaf_check(*inst))) continue;
    auto [it, fresh] = by_impl.emplace(inst->impl->type_name, pending.size());
    if (!fresh) {
      pending[it->second].result.instances.push_back(inst->path);
      continue;
    }
    Pending p;
    p.result.path = inst->path;
    p.result.implementation = inst->impl->type_name + ".impl";
    p.result.instances.push_back(inst->path);
    p.result.leaf = inst->is_leaf();
    auto layer = p.result.leaf ? ts::compile_component(lib, *inst->type, diags) : ts::compile_layer(lib, *inst->impl, diags);
    if (layer) {
      p.obligations = ts::build_obligations(std::move(*layer));
      p.result.ts = p.obligations->layer.ts;
    }
    pending.push_back(std::move(p));
  }

  auto run = [&](const std::vector<std::function<Verdict()>>& work) {
    return parallel ? engine::run_parallel(work, cfg.jobs) : engine::run_serial(work);
  };

  // Lemmas first; proved lemmas strengthen the induction of the rest.
  std::vector<std::function<Verdict()>> work;
  std::vector<std::pair<std::size_t, const ts::Obligation*>> owner;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!pending[i].obligations) continue;
    const auto& obs = *pending[i].obligations;
    for (const auto& l : obs.lemmas) {
      owner.emplace_back(i, &l);
      work.push_back([&obs, &l, &cfg] { return engine::check_invariant(*obs.layer.ts, l.property, cfg); });
    }
  }
  std::vector<Verdict> lemma_verdicts = run(work);
  std::vector<std::vector<ts::TermPtr>> proven(pending.size());
  for (std::size_t j = 0; j < owner.size(); ++j) {
    auto [i, ob] = owner[j];
    if (lemma_verdicts[j].kind == VerdictKind::Proved) proven[i].push_back(ob->property);
    ObligationResult r = describe(*ob);
    r.verdict = std::move(lemma_verdicts[j]);
    pending[i].result.obligations.push_back(std::move(r));
  }

  work.clear();
  owner.clear();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!pending[i].obligations) continue;
    const auto& obs = *pending[i].obligations;
    std::vector<const ts::Obligation*> list;
    for (const auto& a : obs.assumptions) list.push_back(&a);
    list.push_back(&obs.guarantee);
    for (const ts::Obligation* ob : list) {
      owner.emplace_back(i, ob);
      const auto* strengthen = &proven[i];
      work.push_back(
          [&obs, ob, strengthen, &cfg] { return engine::check_invariant(*obs.layer.ts, ob->property, cfg, *strengthen); });
    }
  }
  std::vector<Verdict> verdicts = run(work);
  for (std::size_t j = 0; j < owner.size(); ++j) {
    auto [i, ob] = owner[j];
    ObligationResult r = describe(*ob);
    r.verdict = std::move(verdicts[j]);
    pending[i].result.obligations.push_back(std::move(r));
  }

  for (auto& p : pending) {
    LayerResult& l = p.result;
    if (!p.obligations) {
      l.status = Status::Unknown;
      report.layers.push_back(std::move(l));
      continue;
    }
    Status s = Status::Proved;
    bool assumptions_proved = true;
    for (const auto& ob : l.obligations) {
      if (ob.kind == ts::ObligationKind::Lemma) continue;
      s = combine(s, status_of(ob.verdict));
      if (ob.kind == ts::ObligationKind::Assumption && ob.verdict.kind != VerdictKind::Proved)
        assumptions_proved = false;
    }
    l.status = s;
    l.sound = assumptions_proved;
    report.layers.push_back(std::move(l));
  }
  return report;
}

namespace {

std::optional<ts::Layer> contract_of(const model::Library& lib, const model::ComponentType& type, Diagnostics& diags) {
  return ts::compile_component(lib, type, diags, false);
}

}  // namespace

ComponentCheck check_component_consistency(const model::Library& lib, const model::ComponentType& type, int depth,
                                           const engine::CheckConfig& cfg, Diagnostics& diags) {
  ComponentCheck c;
  c.component = type.name;
  c.analysis = "consistency";
  c.depth = depth;
  auto layer = contract_of(lib, type, diags);
  if (!layer) {
    c.verdict.reason = "component failed to compile";
    return c;
  }
  c.ts = layer->ts;
  std::vector<ts::TermPtr> constraints;
  for (const auto& s : layer->ts->streams)
    if (s.owner.empty() && (s.kind == ts::StreamKind::Assumption || s.kind == ts::StreamKind::Guarantee))
      constraints.push_back(s.term);
  c.verdict = engine::check_satisfiable(*layer->ts, constraints, depth, cfg);
  return c;
}

ComponentCheck check_component_realizability(const model::Library& lib, const model::ComponentType& type,
                                             int depth, const engine::CheckConfig& cfg, Diagnostics& diags) {
  ComponentCheck c;
  c.component = type.name;
  c.analysis = "realizability";
  c.depth = depth;
  auto layer = contract_of(lib, type, diags);
  if (!layer) {
    c.verdict.reason = "component failed to compile";
    return c;
  }
  c.ts = layer->ts;
  const ts::TransitionSystem& t = *layer->ts;
  c.verdict = engine::check_realizability(t, ts::conjunction(t, ts::StreamKind::Assumption, ""),
                                          ts::conjunction(t, ts::StreamKind::Guarantee, ""), depth, cfg);
  return c;
}

}  // namespace agv::analyses
