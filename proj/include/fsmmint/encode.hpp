#pragma once

#include <vector>

#include "fsmmint/cnf.hpp"
#include "fsmmint/fsm.hpp"
#include "fsmmint/negative_tree.hpp"
#include "fsmmint/sat_problem.hpp"
#include "fsmmint/scenario_tree.hpp"

namespace fsmmint {

enum class CompletenessMode {
  Complete,    // C_forall: a transition for every (state, event)
  AtLeastOne,  // C_exists: at least one transition per state
};

/// Shared state of one identification run's encodings. The variable pool must
/// stay stable across iterations (incremental solving relies on the ids).
class EncodingContext {
 public:
  EncodingContext(const Alphabet& alphabet, int stateCount, const ScenarioTree& tree,
                  VarPool& pool, CompletenessMode mode)
      : alphabet_(alphabet),
        stateCount_(stateCount),
        tree_(tree),
        pool_(pool),
        mode_(mode) {}

  const Alphabet& alphabet() const { return alphabet_; }
  int stateCount() const { return stateCount_; }
  const ScenarioTree& tree() const { return tree_; }
  VarPool& pool() { return pool_; }
  const VarPool& pool() const { return pool_; }
  CompletenessMode mode() const { return mode_; }

  // Watermarks for incremental negative-tree emission.
  int negNodesEmitted = 1;
  std::size_t negTerminalsEmitted = 0;
  std::size_t negBackEdgesEmitted = 0;
  bool negRootEmitted = false;

 private:
  const Alphabet& alphabet_;
  int stateCount_;
  const ScenarioTree& tree_;
  VarPool& pool_;
  CompletenessMode mode_;
};

/// Constraint S: proper coloring of the scenario tree and coherence between
/// the coloring and the y transition variables.
std::vector<Clause> encodeScenario(EncodingContext& ctx);

/// Constraint Z: output actions comply with every scenario-tree edge.
std::vector<Clause> encodeActions(EncodingContext& ctx);

/// Constraint C (either variant, per the context's mode).
std::vector<Clause> encodeCompleteness(EncodingContext& ctx);

/// Constraint B: BFS symmetry breaking over state indices (no-op at |S|=1).
std::vector<Clause> encodeSymmetryBfs(EncodingContext& ctx);

/// Constraints S1..S4 for the negative scenario tree, emitted incrementally:
/// only material added to the tree since the previous call produces clauses.
std::vector<Clause> encodeNegativeTree(EncodingContext& ctx,
                                       const NegativeScenarioTree& negTree);

/// Inverse of the y/z encoding. Throws MalformedModelError when two y
/// variables fire for one (state, event).
Fsm decodeFsm(const EncodingContext& ctx, const SolveOutcome& model);

}  // namespace fsmmint
