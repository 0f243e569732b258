#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "fsmmint/encode.hpp"
#include "fsmmint/ltl.hpp"
#include "fsmmint/verifier.hpp"

namespace fsmmint {

using Rng = std::mt19937_64;

/// Portable bounded sampling (the standard distributions are not
/// reproducible across standard libraries).
std::uint64_t uniformInt(Rng& rng, std::uint64_t bound);  // [0, bound)
bool bernoulli(Rng& rng, double p);

struct InstanceSpec {
  int maxStates = 3;
  int eventCount = 4;
  int actionCount = 4;
  bool complete = false;
  int scenarioCount = 10;
  int totalScenarioLength = 0;  // 0 = the preset default of 50 * |S|
  int formulaCount = 4;
  std::uint64_t seed = 1;

  int resolvedTotalLength() const {
    return totalScenarioLength > 0 ? totalScenarioLength : 50 * maxStates;
  }

  /// The `paper` benchmark preset: |E| = |Z| = 4, 10 scenarios of total
  /// length 50|S|, 4 formulas.
  static InstanceSpec paperPreset(int maxStates, bool complete, std::uint64_t seed);

  Alphabet makeAlphabet() const;
};

struct Instance {
  InstanceSpec spec;
  Fsm referenceFsm;
  std::vector<Scenario> scenarios;
  std::vector<LtlPtr> formulas;
  bool hard = false;
};

struct RandomFsmResult {
  Fsm fsm;
  int preRepairTransitionCount = 0;  // incomplete mode, before repair
};

RandomFsmResult randomFsmWithStats(const InstanceSpec& spec, Rng& rng);
Fsm randomFsm(const InstanceSpec& spec, Rng& rng);

/// Random walks over the reference FSM; in complete mode a fresh 50% ban set
/// is drawn per instance (regenerated when walks keep dead-ending).
std::vector<Scenario> randomScenarios(const Fsm& fsm, const InstanceSpec& spec, Rng& rng);

/// Template-instantiated formulas that hold on the reference FSM and are
/// discriminative (satisfied by at most 5 of 10 fresh random FSMs).
std::vector<LtlPtr> randomLtl(const Fsm& fsm, const InstanceSpec& spec, Rng& rng);

/// Realizable-by-construction instance; with `hardFilter` the generation
/// repeats until the scenarios-only identification at |S|max yields an FSM
/// violating at least one formula.
Instance generateInstance(const InstanceSpec& spec, bool hardFilter);
Instance makeHardInstance(const InstanceSpec& spec);

struct NoSolutionUpTo {
  int cap = 0;
};
using BruteForceOutcome = std::variant<int, NoSolutionUpTo>;

/// Exhaustive oracle: enumerates every FSM structure (destinations x output
/// subsets, optionally absent transitions in the AtLeastOne mode) for
/// |S| = 1..cap and returns the first size admitting an FSM that accepts all
/// scenarios and satisfies all formulas.
BruteForceOutcome bruteForceMinStates(const Alphabet& alphabet,
                                      const std::vector<Scenario>& scenarios,
                                      const std::vector<LtlPtr>& formulas,
                                      CompletenessMode mode, int capStates);

}  // namespace fsmmint
