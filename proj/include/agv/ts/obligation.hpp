#pragma once

#include "agv/ts/compile.hpp"

#include <string>
#include <vector>

namespace agv::ts {

enum class ObligationKind : std::uint8_t { Assumption, Guarantee, Lemma, Consistency, Realizability };

std::string_view to_string(ObligationKind k);

struct Obligation {
  std::string name;
  ObligationKind kind = ObligationKind::Guarantee;
  std::string subject;                  // subcomponent for assumption obligations
  std::vector<std::string> provenance;  // labels of the statements involved
  TermPtr property;                     // invariant to prove
  std::vector<std::string> sibling_hypotheses;  // v with v < c (assumption obligations)
};

struct LayerObligations {
  Layer layer;
  std::vector<Obligation> assumptions;  // one per subcomponent with assumptions, in SubcomponentOrder
  Obligation guarantee;
  std::vector<Obligation> lemmas;
};

/// Adds the assumption obligations for every subcomponent c with at least
/// one assumption:
///   H(A) and Z(H(w_g)) for every w and H(v_g) for every v before c  =>  c_a
/// and the guarantee obligation
///   H(A) and H(c_g) for every c  =>  G
/// plus one obligation per lemma with the guarantee antecedent.
LayerObligations build_obligations(Layer layer);

}  // namespace agv::ts
