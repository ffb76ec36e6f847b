#pragma once

// Randomized cross-checks of the engine against independent explicit-state
// oracles. Shared by the unit tests and the acceptance runner.

#include "agv/engine/check.hpp"
#include "agv/ts/system.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace agv::testing {

struct InvariantStats {
  int cases = 0;
  int proved = 0;
  int falsified = 0;
  int unknown = 0;
  int replayed = 0;  // falsified traces reproduced by the oracle simulator
  std::vector<std::string> mismatches;
};

/// Random transition systems with up to four boolean state bits, up to two
/// boolean inputs and an optional counter modulo 2..4. Each invariant check
/// is compared against breadth-first reachability: Proved must mean no
/// reachable violation, Falsified must come with the shortest violation
/// depth and a trace the oracle reproduces step by step.
InvariantStats invariant_vs_explicit(int count, std::uint64_t seed, const engine::CheckConfig& cfg);

struct InvariantProblem {
  std::shared_ptr<ts::TransitionSystem> ts;
  ts::TermPtr property;
  int shortest_violation = -1;  // explicit-state answer, -1 when invariant
};

/// The systems `invariant_vs_explicit` draws, for other properties.
std::vector<InvariantProblem> random_invariant_problems(int count, std::uint64_t seed);

struct SoundnessStats {
  int systems = 0;
  int all_proved = 0;      // every obligation of the layer proved
  int some_failed = 0;
  int unknown = 0;
  long long traces = 0;    // complete bounded traces enumerated
  int violations = 0;      // traces breaking H(A) => G despite all obligations proved
  int counterexamples = 0; // guarantee counterexamples the enumeration confirmed
  std::vector<std::string> mismatches;
};

/// Random two- or three-child boolean layers with random contracts and
/// wiring, verified through the text front end. Whenever every obligation
/// is proved, all traces of `depth` steps on which each child honours its
/// contract (H(assumptions) => guarantees) and the wiring holds are
/// enumerated; none may violate the parent's H(assumptions) => guarantees.
/// Conversely every guarantee counterexample within `depth` steps must show
/// up in the enumeration.
SoundnessStats compositional_soundness(int count, std::uint64_t seed, int depth, const engine::CheckConfig& cfg);

}  // namespace agv::testing
