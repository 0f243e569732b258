#pragma once

#include <set>
#include <utility>
#include <vector>

#include "fsmmint/fsm.hpp"

namespace fsmmint {

/// Prefix-merged tree of positive scenarios. Node 1 is the root; per node
/// there is at most one outgoing edge per event (the tree would otherwise
/// demand a nondeterministic FSM).
class ScenarioTree {
 public:
  struct Edge {
    int event = 0;
    ActionSet outputs;
    int child = 0;
  };

  ScenarioTree();

  int nodeCount() const { return static_cast<int>(edges_.size()) - 1; }
  const std::vector<Edge>& edges(int node) const { return edges_.at(node); }
  const Edge* findEdge(int node, int event) const;
  int parent(int node) const { return parent_.at(node); }

  /// Walks (creating nodes as needed) the edge for `element`; throws
  /// DeterminismConflictError when the event exists with different outputs.
  int extend(int node, const ScenarioElement& element);

  /// Nodes in breadth-first order, children visited in event order.
  std::vector<int> bfsOrder() const;

 private:
  std::vector<std::vector<Edge>> edges_;  // index 0 unused
  std::vector<int> parent_;
};

ScenarioTree buildScenarioTree(const std::vector<Scenario>& scenarios);

/// Least fixpoint of: (u,v) inconsistent if some event has edges from both
/// with different output sets, or with equal output sets whose children are
/// inconsistent. Pairs are returned with u < v.
std::set<std::pair<int, int>> inconsistentPairs(const ScenarioTree& tree);

/// Greedy (max-degree-first) clique in the consistency graph; its size is a
/// lower bound on the number of FSM states. Returns a single node when the
/// graph has no edges.
std::vector<int> greedyMaxClique(const std::set<std::pair<int, int>>& pairs,
                                 int nodeCount);

}  // namespace fsmmint
