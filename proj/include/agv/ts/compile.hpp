#pragma once

#include "agv/model/instance.hpp"
#include "agv/model/library.hpp"
#include "agv/ts/system.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace agv::ts {

/// One parent/children layer lowered to a transition system. Parent
/// variables keep their names; a child's variables are prefixed `child.`.
struct Layer {
  std::shared_ptr<TransitionSystem> ts;
  const model::ComponentType* type = nullptr;
  const model::ComponentImpl* impl = nullptr;
  std::vector<std::string> children;  // declaration order
  std::vector<std::size_t> order;     // SubcomponentOrder over `children`
};

/// Lowers `impl` together with the contracts of its subcomponents.
/// Subcomponent outputs are free; they are constrained only through the
/// subcomponent guarantee streams used as hypotheses.
std::optional<Layer> compile_layer(const model::Library& lib, const model::ComponentImpl& impl, Diagnostics& diags);

/// Lowers a single component contract (ports, eqs, assumptions,
/// guarantees). With `with_impl`, the eqs and assertions of an
/// implementation without subcomponents are included too.
std::optional<Layer> compile_component(const model::Library& lib, const model::ComponentType& type,
                                       Diagnostics& diags, bool with_impl = true);

/// Conjunction of a component's streams of one kind.
TermPtr conjunction(const TransitionSystem& ts, StreamKind kind, const std::string& owner);

}  // namespace agv::ts
