#include "fsmmint/encode.hpp"

#include <algorithm>

#include "fsmmint/errors.hpp"

namespace fsmmint {

std::vector<Clause> encodeScenario(EncodingContext& ctx) {
  VarPool& pool = ctx.pool();
  const ScenarioTree& tree = ctx.tree();
  const int states = ctx.stateCount();
  std::vector<Clause> out;

  // Root is colored with the initial state.
  out.push_back({pool.x(1, 1)});

  // Exactly one color per node.
  for (int v = 1; v <= tree.nodeCount(); ++v) {
    Clause atLeastOne;
    for (int i = 1; i <= states; ++i) atLeastOne.push_back(pool.x(v, i));
    out.push_back(std::move(atLeastOne));
    for (int i = 1; i <= states; ++i)
      for (int j = i + 1; j <= states; ++j)
        out.push_back({-pool.x(v, i), -pool.x(v, j)});
  }

  // Inconsistent nodes never share a color.
  for (const auto& [u, v] : inconsistentPairs(tree))
    for (int i = 1; i <= states; ++i)
      out.push_back({-pool.x(u, i), -pool.x(v, i)});

  // Determinism: at most one destination per (state, event).
  for (int i1 = 1; i1 <= states; ++i1)
    for (int e = 0; e < ctx.alphabet().eventCount(); ++e)
      for (int i2 = 1; i2 <= states; ++i2)
        for (int i3 = i2 + 1; i3 <= states; ++i3)
          out.push_back({-pool.y(i1, i2, e), -pool.y(i1, i3, e)});

  // Tree/transition coherence, both directions.
  for (int v = 1; v <= tree.nodeCount(); ++v) {
    for (const auto& edge : tree.edges(v)) {
      for (int i1 = 1; i1 <= states; ++i1) {
        for (int i2 = 1; i2 <= states; ++i2) {
          out.push_back({-pool.x(v, i1), -pool.x(edge.child, i2), pool.y(i1, i2, edge.event)});
          out.push_back({-pool.x(v, i1), -pool.y(i1, i2, edge.event), pool.x(edge.child, i2)});
        }
      }
    }
  }
  return out;
}

std::vector<Clause> encodeActions(EncodingContext& ctx) {
  VarPool& pool = ctx.pool();
  const ScenarioTree& tree = ctx.tree();
  std::vector<Clause> out;

  for (int v = 1; v <= tree.nodeCount(); ++v) {
    for (int i = 1; i <= ctx.stateCount(); ++i) {
      for (const auto& edge : tree.edges(v)) {
        for (int a = 0; a < ctx.alphabet().actionCount(); ++a) {
          bool inSet = std::binary_search(edge.outputs.begin(), edge.outputs.end(), a);
          int zLit = pool.z(i, a, edge.event);
          out.push_back({-pool.x(v, i), inSet ? zLit : -zLit});
        }
      }
    }
  }
  return out;
}

std::vector<Clause> encodeCompleteness(EncodingContext& ctx) {
  VarPool& pool = ctx.pool();
  const int states = ctx.stateCount();
  const int events = ctx.alphabet().eventCount();
  std::vector<Clause> out;

  if (ctx.mode() == CompletenessMode::Complete) {
    for (int i1 = 1; i1 <= states; ++i1) {
      for (int e = 0; e < events; ++e) {
        Clause c;
        for (int i2 = 1; i2 <= states; ++i2) c.push_back(pool.y(i1, i2, e));
        out.push_back(std::move(c));
      }
    }
  } else {
    for (int i1 = 1; i1 <= states; ++i1) {
      Clause c;
      for (int e = 0; e < events; ++e)
        for (int i2 = 1; i2 <= states; ++i2) c.push_back(pool.y(i1, i2, e));
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Clause> encodeSymmetryBfs(EncodingContext& ctx) {
  VarPool& pool = ctx.pool();
  const int states = ctx.stateCount();
  const int events = ctx.alphabet().eventCount();
  std::vector<Clause> out;
  if (states < 2) return out;

  // t(i,j) <-> OR_e y(i,j,e)                         for i < j
  for (int i = 1; i <= states; ++i) {
    for (int j = i + 1; j <= states; ++j) {
      Clause forward{-pool.t(i, j)};
      for (int e = 0; e < events; ++e) {
        forward.push_back(pool.y(i, j, e));
        out.push_back({-pool.y(i, j, e), pool.t(i, j)});
      }
      out.push_back(std::move(forward));
    }
  }

  // p(j,i) <-> t(i,j) && AND_{c<i} !t(c,j)
  for (int j = 2; j <= states; ++j) {
    for (int i = 1; i < j; ++i) {
      out.push_back({-pool.p(j, i), pool.t(i, j)});
      for (int c = 1; c < i; ++c) out.push_back({-pool.p(j, i), -pool.t(c, j)});
      Clause backward{-pool.t(i, j)};
      for (int c = 1; c < i; ++c) backward.push_back(pool.t(c, j));
      backward.push_back(pool.p(j, i));
      out.push_back(std::move(backward));
    }
  }

  // Every state beyond the first has a parent.
  for (int j = 2; j <= states; ++j) {
    Clause c;
    for (int i = 1; i < j; ++i) c.push_back(pool.p(j, i));
    out.push_back(std::move(c));
  }

  // Parent indices are monotone in the child index.
  for (int j = 2; j + 1 <= states; ++j)
    for (int i = 1; i < j; ++i)
      for (int i2 = 1; i2 < i; ++i2)
        out.push_back({-pool.p(j, i), -pool.p(j + 1, i2)});

  // m(i,j,e) <-> y(i,j,e) && AND_{e'<e} !y(i,j,e')
  for (int i = 1; i <= states; ++i) {
    for (int j = i + 1; j <= states; ++j) {
      for (int e = 0; e < events; ++e) {
        out.push_back({-pool.m(i, j, e), pool.y(i, j, e)});
        for (int e2 = 0; e2 < e; ++e2) out.push_back({-pool.m(i, j, e), -pool.y(i, j, e2)});
        Clause backward{-pool.y(i, j, e)};
        for (int e2 = 0; e2 < e; ++e2) backward.push_back(pool.y(i, j, e2));
        backward.push_back(pool.m(i, j, e));
        out.push_back(std::move(backward));
      }
    }
  }

  // Consecutive children of one parent are ordered by minimal event.
  for (int i = 1; i <= states; ++i) {
    for (int j = i + 1; j + 1 <= states; ++j) {
      for (int e = 0; e < events; ++e) {
        Clause c{-pool.p(j, i), -pool.p(j + 1, i), -pool.m(i, j + 1, e)};
        for (int e2 = 0; e2 < e; ++e2) c.push_back(pool.m(i, j, e2));
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::vector<Clause> encodeNegativeTree(EncodingContext& ctx,
                                       const NegativeScenarioTree& negTree) {
  VarPool& pool = ctx.pool();
  const int states = ctx.stateCount();
  const int actions = ctx.alphabet().actionCount();
  std::vector<Clause> out;

  if (!ctx.negRootEmitted) {
    out.push_back({pool.xbar(1, 1)});  // S1
    ctx.negRootEmitted = true;
  }

  // S2: color propagation along each new tree edge. M's literals enter the
  // clause body negated.
  for (int v = ctx.negNodesEmitted + 1; v <= negTree.nodeCount(); ++v) {
    const auto& edge = negTree.incomingEdge(v);
    int parent = negTree.parent(v);
    for (int i1 = 1; i1 <= states; ++i1) {
      for (int i2 = 1; i2 <= states; ++i2) {
        Clause c{-pool.xbar(parent, i1), -pool.y(i1, i2, edge.event)};
        for (int a = 0; a < actions; ++a) {
          bool inSet = std::binary_search(edge.outputs.begin(), edge.outputs.end(), a);
          int zLit = pool.z(i1, a, edge.event);
          c.push_back(inSet ? -zLit : zLit);
        }
        c.push_back(pool.xbar(v, i2));
        out.push_back(std::move(c));
      }
    }
  }
  ctx.negNodesEmitted = negTree.nodeCount();

  // S3: terminal nodes correspond to no state.
  const auto& marks = negTree.terminalMarks();
  for (std::size_t idx = ctx.negTerminalsEmitted; idx < marks.size(); ++idx)
    for (int i = 1; i <= states; ++i) out.push_back({-pool.xbar(marks[idx], i)});
  ctx.negTerminalsEmitted = marks.size();

  // S4: back-edge endpoints never share a color.
  const auto& backEdges = negTree.backEdges();
  for (std::size_t idx = ctx.negBackEdgesEmitted; idx < backEdges.size(); ++idx) {
    auto [v, u] = backEdges[idx];
    for (int i = 1; i <= states; ++i)
      out.push_back({-pool.xbar(v, i), -pool.xbar(u, i)});
  }
  ctx.negBackEdgesEmitted = backEdges.size();

  return out;
}

Fsm decodeFsm(const EncodingContext& ctx, const SolveOutcome& model) {
  const VarPool& pool = ctx.pool();
  Fsm fsm(ctx.stateCount(), ctx.alphabet().eventCount());

  auto value = [&](const VarName& name) {
    auto var = pool.lookup(name);
    return var && model.value(*var);
  };

  for (int i1 = 1; i1 <= ctx.stateCount(); ++i1) {
    for (int e = 0; e < ctx.alphabet().eventCount(); ++e) {
      int dst = 0;
      for (int i2 = 1; i2 <= ctx.stateCount(); ++i2) {
        if (value({VarName::Kind::Y, i1, i2, e})) {
          if (dst != 0)
            throw MalformedModelError("two destinations for one (state, event)");
          dst = i2;
        }
      }
      if (dst == 0) continue;
      ActionSet outputs;
      for (int a = 0; a < ctx.alphabet().actionCount(); ++a)
        if (value({VarName::Kind::Z, i1, a, e})) outputs.push_back(a);
      fsm.setTransition(i1, e, dst, std::move(outputs));
    }
  }
  return fsm;
}

}  // namespace fsmmint
