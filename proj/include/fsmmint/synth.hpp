#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsmmint/encode.hpp"
#include "fsmmint/ltl.hpp"
#include "fsmmint/verifier.hpp"

namespace fsmmint {

enum class Method { Iterative, Qsat, Exponential, Backtracking };

struct Limits {
  std::optional<double> wallSeconds;
  long long expansionBudget = 20'000'000;
  int stateCap = 32;  // findMinimum stops here
};

struct SynthesisRequest {
  SynthesisRequest(Alphabet alphabet, std::vector<Scenario> scenarios,
                   std::vector<LtlPtr> formulas, int stateCount)
      : alphabet(std::move(alphabet)),
        scenarios(std::move(scenarios)),
        formulas(std::move(formulas)),
        stateCount(stateCount) {}

  Alphabet alphabet;
  std::vector<Scenario> scenarios;
  std::vector<LtlPtr> formulas;
  int stateCount = 1;
  CompletenessMode mode = CompletenessMode::AtLeastOne;
  Method method = Method::Iterative;
  Limits limits;
  std::string qbfSolverCommand;  // empty = unset
  std::string satSolverCommand;  // empty = embedded solver
  bool symmetryBreaking = true;
  std::uint64_t seed = 0;  // reserved for the harness; the methods are deterministic
};

enum class Outcome { Found, Unsatisfiable, Timeout, BudgetExceeded };

struct SynthesisStats {
  int iterations = 0;
  int counterexamplesAdded = 0;
  int finalK = -1;  // -1 for methods without a BMC bound
  std::size_t clauseCount = 0;
  int varCount = 0;
  double wallSeconds = 0.0;
};

struct SynthesisResult {
  Outcome outcome = Outcome::Unsatisfiable;
  std::optional<Fsm> fsm;
  SynthesisStats stats;
};

SynthesisResult identifyIterative(const SynthesisRequest& req);
SynthesisResult identifyExponential(const SynthesisRequest& req);
SynthesisResult identifyQsat(const SynthesisRequest& req);
SynthesisResult identifyBacktracking(const SynthesisRequest& req);

/// Dispatch on req.method.
SynthesisResult identify(const SynthesisRequest& req);

struct PerSizeRecord {
  int stateCount = 0;
  Outcome outcome = Outcome::Unsatisfiable;
  double wallSeconds = 0.0;
  SynthesisStats stats;
};

struct FindMinimumResult {
  SynthesisResult result;           // the terminating run
  int minStates = 0;                // 0 when nothing was found
  int cliqueLowerBound = 1;
  bool cappedOut = false;           // state cap reached with every size Unsat
  std::vector<PerSizeRecord> perSize;
};

/// Minimum-|S| search: starts at the greedy-clique lower bound and increments
/// on Unsatisfiable until Found, the cap, or the cumulative time limit.
FindMinimumResult findMinimum(const SynthesisRequest& req);

namespace detail {

/// Scenario-tree edges whose source node is mapped but whose (state, event)
/// transition is missing from the partial FSM; edges are identified by their
/// child node and ordered by the tree's BFS index. Returns nullopt when the
/// partial FSM contradicts the scenarios.
std::optional<std::vector<int>> findNewFrontier(
    const ScenarioTree& tree, const Fsm& partial,
    const std::vector<int>& bfsIndex);

/// Test hook: called with each partial FSM rejected by model checking during
/// backtracking.
using PruneObserver = std::function<void(const Fsm&)>;
SynthesisResult identifyBacktrackingWithObserver(const SynthesisRequest& req,
                                                 const PruneObserver& onPrune);

}  // namespace detail

}  // namespace fsmmint
