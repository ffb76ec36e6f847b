#include "agv/ts/obligation.hpp"

namespace agv::ts {

std::string_view to_string(ObligationKind k) {
  switch (k) {
    case ObligationKind::Assumption: return "assumption";
    case ObligationKind::Guarantee: return "guarantee";
    case ObligationKind::Lemma: return "lemma";
    case ObligationKind::Consistency: return "consistency";
    case ObligationKind::Realizability: return "realizability";
  }
  return "?";
}

namespace {

std::vector<std::string> labels(const TransitionSystem& ts, StreamKind kind, const std::string& owner) {
  std::vector<std::string> out;
  for (const Stream* s : ts.streams_of(kind, owner)) out.push_back(s->name);
  return out;
}

}  // namespace

LayerObligations build_obligations(Layer layer) {
  TransitionSystem& ts = *layer.ts;
  LayerObligations out;

  const TermPtr h_assume = ts.historically(conjunction(ts, StreamKind::Assumption, ""));
  std::vector<TermPtr> z_all;
  std::vector<TermPtr> h_all;
  for (const auto& c : layer.children) {
    TermPtr g = conjunction(ts, StreamKind::SubGuarantee, c);
    TermPtr h = ts.historically(g);
    h_all.push_back(h);
    z_all.push_back(ts.zpred(h));
  }

  std::vector<TermPtr> earlier;
  std::vector<std::string> earlier_names;
  for (std::size_t rank = 0; rank < layer.order.size(); ++rank) {
    const std::size_t ci = layer.order[rank];
    const std::string& c = layer.children[ci];
    auto c_assume = ts.streams_of(StreamKind::SubAssumption, c);
    if (!c_assume.empty()) {
      std::vector<TermPtr> ante{h_assume};
      ante.insert(ante.end(), z_all.begin(), z_all.end());
      ante.insert(ante.end(), earlier.begin(), earlier.end());
      Obligation ob;
      ob.name = c + " assumptions";
      ob.kind = ObligationKind::Assumption;
      ob.subject = c;
      ob.provenance = labels(ts, StreamKind::SubAssumption, c);
      ob.property = mk_implies(mk_and(ante), conjunction(ts, StreamKind::SubAssumption, c));
      ob.sibling_hypotheses = earlier_names;
      out.assumptions.push_back(std::move(ob));
    }
    earlier.push_back(h_all[ci]);
    earlier_names.push_back(c);
  }

  std::vector<TermPtr> ante{h_assume};
  ante.insert(ante.end(), h_all.begin(), h_all.end());
  const TermPtr antecedent = mk_and(ante);

  out.guarantee.name = "guarantees";
  out.guarantee.kind = ObligationKind::Guarantee;
  out.guarantee.provenance = labels(ts, StreamKind::Guarantee, "");
  if (out.guarantee.provenance.empty()) out.guarantee.provenance.push_back(ts.name + " (no guarantees)");
  out.guarantee.property = mk_implies(antecedent, conjunction(ts, StreamKind::Guarantee, ""));

  for (const Stream* l : ts.streams_of(StreamKind::Lemma, "")) {
    Obligation ob;
    ob.name = l->name;
    ob.kind = ObligationKind::Lemma;
    ob.provenance = {l->name};
    ob.property = mk_implies(antecedent, l->term);
    out.lemmas.push_back(std::move(ob));
  }
  out.layer = std::move(layer);
  return out;
}

}  // namespace agv::ts
