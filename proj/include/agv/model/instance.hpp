#pragma once

#include "agv/model/library.hpp"

#include <memory>
#include <string>
#include <vector>

namespace agv::model {

struct Instance {
  std::string name;  // instance name; the root uses its type name
  std::string path;  // dotted from the root
  const ComponentType* type = nullptr;
  const ComponentImpl* impl = nullptr;  // null for contract-only components
  std::vector<std::unique_ptr<Instance>> children;  // declaration order
  std::vector<std::size_t> order;  // ranks children: order[0] comes first

  bool is_leaf() const { return children.empty(); }
};

/// Builds the instance tree below `root` (a component name). Reports an
/// error and returns null if a type contains itself transitively.
std::unique_ptr<Instance> instantiate(const Library& lib, const std::string& root, Diagnostics& diags);

/// Total order over the subcomponents of `impl`, as indices into its
/// subcomponent list: strongly connected components of the connection graph
/// in topological order, ties broken by the smallest declaration index, and
/// members of one component in declaration order.
std::vector<std::size_t> order_subcomponents(const ComponentImpl& impl);

/// Deterministic textual form of the elaborated tree.
std::string dump(const Instance& root);

/// Pre-order list of instances.
std::vector<const Instance*> flatten(const Instance& root);

}  // namespace agv::model
