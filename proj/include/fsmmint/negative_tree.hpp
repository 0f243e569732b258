#pragma once

#include <utility>
#include <vector>

#include "fsmmint/fsm.hpp"

namespace fsmmint {

/// A prohibited behavior: either a finite bad prefix (every infinite
/// continuation violates the specification) or a lasso (prefix + cycle).
struct Counterexample {
  enum class Kind { Finite, Looping };

  Kind kind = Kind::Finite;
  std::vector<ScenarioElement> prefix;
  std::vector<ScenarioElement> cycle;  // empty iff Finite

  int totalLength() const {
    return static_cast<int>(prefix.size() + cycle.size());
  }
};

/// Prefix-merged store of counterexamples. Unlike the positive tree, one node
/// may carry several outgoing edges for the same event (several output
/// combinations prohibited), end nodes of finite counterexamples carry a
/// terminal mark, and looping counterexamples add a back edge from the cycle
/// end to the cycle start.
///
/// Terminal marks and back edges are recorded append-only so the encoder can
/// emit incremental clause deltas.
class NegativeScenarioTree {
 public:
  struct Edge {
    int event = 0;
    ActionSet outputs;
    int child = 0;
  };

  NegativeScenarioTree();

  int nodeCount() const { return static_cast<int>(edges_.size()) - 1; }
  const std::vector<Edge>& edges(int node) const { return edges_.at(node); }
  bool terminal(int node) const { return terminal_.at(node) != 0; }
  int parent(int node) const { return parent_.at(node); }
  /// Incoming tree edge of a non-root node.
  const Edge& incomingEdge(int node) const;

  const std::vector<int>& terminalMarks() const { return terminalMarks_; }
  const std::vector<std::pair<int, int>>& backEdges() const { return backEdges_; }

  /// Merges a counterexample into the tree. Returns false iff the identical
  /// terminal mark / back edge was already present (no progress).
  bool addCounterexample(const Counterexample& cex);

 private:
  int walk(int node, const ScenarioElement& element);

  std::vector<std::vector<Edge>> edges_;  // index 0 unused
  std::vector<int> parent_;
  std::vector<char> terminal_;
  std::vector<int> terminalMarks_;             // nodes in mark order
  std::vector<std::pair<int, int>> backEdges_; // (cycle end, cycle start)
};

}  // namespace fsmmint
