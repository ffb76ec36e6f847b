#pragma once

#include "agv/diagnostics.hpp"
#include "agv/engine/check.hpp"
#include "agv/model/instance.hpp"
#include "agv/ts/obligation.hpp"

#include <memory>
#include <string>
#include <vector>

namespace agv::analyses {

enum class Status : std::uint8_t { Proved, Failed, Unknown };

std::string_view to_string(Status s);

struct ObligationResult {
  std::string name;
  ts::ObligationKind kind = ts::ObligationKind::Guarantee;
  std::string subject;
  std::vector<std::string> provenance;
  engine::Verdict verdict;
};

struct LayerResult {
  std::string path;            // first instance using the implementation
  std::string implementation;  // e.g. FCC.impl
  std::vector<std::string> instances;
  bool leaf = false;           // assertions against guarantees, no subcomponents
  std::shared_ptr<const ts::TransitionSystem> ts;
  std::vector<ObligationResult> obligations;  // lemmas, assumptions in order, guarantees
  Status status = Status::Unknown;  // over the non-lemma obligations
  bool sound = false;  // the guarantee result rests on proved assumption obligations
};

/// Consistency or realizability of one component contract.
struct ComponentCheck {
  std::string component;
  std::string analysis;  // "consistency" | "realizability"
  int depth = 0;
  std::shared_ptr<const ts::TransitionSystem> ts;
  engine::Verdict verdict;
};

struct Report {
  std::string command;
  std::string root;
  std::vector<LayerResult> layers;
  std::vector<ComponentCheck> consistency;
  std::vector<ComponentCheck> realizability;
  std::vector<Diagnostic> lint;

  Status status() const;
};

/// Compositional verification of every layer below `root`. Each
/// implementation is checked once, however many instances share it.
Report verify_all(const model::Library& lib, const model::Instance& root, const engine::CheckConfig& cfg,
                  Diagnostics& diags, bool parallel = true);

ComponentCheck check_component_consistency(const model::Library& lib, const model::ComponentType& type, int depth,
                                           const engine::CheckConfig& cfg, Diagnostics& diags);
ComponentCheck check_component_realizability(const model::Library& lib, const model::ComponentType& type,
                                             int depth, const engine::CheckConfig& cfg, Diagnostics& diags);

/// Variables worth showing in a trace: the user-visible ones, in declaration order.
std::vector<int> visible_vars(const ts::TransitionSystem& ts, const std::vector<int>& vars);

std::string render_human(const Report& r);
std::string render_json(const Report& r);

/// 0 proved, 1 any failure, 3 unknown without failures.
int exit_code(const Report& r);

}  // namespace agv::analyses
