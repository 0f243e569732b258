#include "fsmmint/synth.hpp"

#include <algorithm>
#include <chrono>

#include "fsmmint/bmc.hpp"
#include "fsmmint/errors.hpp"

namespace fsmmint {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Deadline makeDeadline(const Limits& limits, Clock::time_point start) {
  if (!limits.wallSeconds) return std::nullopt;
  return start + std::chrono::duration_cast<Clock::duration>(
                     std::chrono::duration<double>(*limits.wallSeconds));
}

bool pastDeadline(const Deadline& deadline) {
  return deadline && Clock::now() > *deadline;
}

std::optional<double> remainingSeconds(const Deadline& deadline) {
  if (!deadline) return std::nullopt;
  return std::chrono::duration<double>(*deadline - Clock::now()).count();
}

struct CegisOptions {
  bool symmetry = true;
  const Fsm* fixedPartial = nullptr;
};

SynthesisResult runCegis(const SynthesisRequest& req, const CegisOptions& opts) {
  auto start = Clock::now();
  Deadline deadline = makeDeadline(req.limits, start);

  ScenarioTree tree = buildScenarioTree(req.scenarios);
  VarPool pool;
  NegativeScenarioTree negTree;
  EncodingContext ctx(req.alphabet, req.stateCount, tree, pool, req.mode);

  CnfProblem problem;
  if (!req.satSolverCommand.empty()) problem.setExternalCommand(req.satSolverCommand);

  problem.addAll(encodeScenario(ctx));
  problem.addAll(encodeActions(ctx));
  problem.addAll(encodeCompleteness(ctx));
  if (opts.symmetry && !opts.fixedPartial) problem.addAll(encodeSymmetryBfs(ctx));
  if (opts.fixedPartial) {
    const Fsm& partial = *opts.fixedPartial;
    for (int s = 1; s <= partial.stateCount(); ++s) {
      for (int e = 0; e < partial.eventCount(); ++e) {
        const auto& t = partial.transition(s, e);
        if (!t) continue;
        problem.add({pool.y(s, t->dst, e)});
        for (int a = 0; a < req.alphabet.actionCount(); ++a) {
          bool inSet = std::binary_search(t->outputs.begin(), t->outputs.end(), a);
          problem.add({inSet ? pool.z(s, a, e) : -pool.z(s, a, e)});
        }
      }
    }
  }
  problem.ensureVarCount(pool.count());

  SynthesisResult result;
  for (;;) {
    if (pastDeadline(deadline)) {
      result.outcome = Outcome::Timeout;
      break;
    }
    SolveOutcome outcome = problem.solve(deadline, remainingSeconds(deadline));
    result.stats.clauseCount = problem.clauseCount();
    result.stats.varCount = problem.varCount();
    if (outcome.status == SatStatus::Timeout) {
      result.outcome = Outcome::Timeout;
      break;
    }
    if (outcome.status == SatStatus::Unsat) {
      result.outcome = Outcome::Unsatisfiable;
      break;
    }
    result.stats.iterations += 1;

    Fsm fsm = decodeFsm(ctx, outcome);
    std::vector<Verdict> verdicts = modelCheck(fsm, req.formulas);
    bool changed = false;
    int violations = 0;
    for (const Verdict& v : verdicts) {
      if (v.holds) continue;
      ++violations;
      changed = negTree.addCounterexample(*v.counterexample) || changed;
    }
    if (violations == 0) {
      result.outcome = Outcome::Found;
      result.fsm = std::move(fsm);
      break;
    }
    if (!changed)
      throw InternalNoProgressError(
          "every counterexample was already prohibited; encoder or verifier bug");
    result.stats.counterexamplesAdded += violations;
    problem.addAll(encodeNegativeTree(ctx, negTree));
    problem.ensureVarCount(pool.count());

    if (pastDeadline(deadline)) {
      result.outcome = Outcome::Timeout;
      break;
    }
  }
  result.stats.wallSeconds = secondsSince(start);
  return result;
}

}  // namespace

SynthesisResult identifyIterative(const SynthesisRequest& req) {
  CegisOptions opts;
  opts.symmetry = req.symmetryBreaking;
  return runCegis(req, opts);
}

SynthesisResult identifyExponential(const SynthesisRequest& req) {
  auto start = Clock::now();
  Deadline deadline = makeDeadline(req.limits, start);
  LtlPtr target = toNnf(ltl::negation(ltl::conjoin(req.formulas)));

  SynthesisResult result;
  for (int k = 0;; ++k) {
    result.stats.finalK = k;
    if (pastDeadline(deadline)) {
      result.outcome = Outcome::Timeout;
      break;
    }

    ScenarioTree tree = buildScenarioTree(req.scenarios);
    VarPool pool;
    CircuitStore store;
    EncodingContext ctx(req.alphabet, req.stateCount, tree, pool, req.mode);

    CnfProblem problem;
    if (!req.satSolverCommand.empty()) problem.setExternalCommand(req.satSolverCommand);
    problem.addAll(encodeScenario(ctx));
    problem.addAll(encodeActions(ctx));
    problem.addAll(encodeCompleteness(ctx));
    if (req.symmetryBreaking) problem.addAll(encodeSymmetryBfs(ctx));

    try {
      problem.addAll(expandUniversals(ctx, store, target, k, req.limits.expansionBudget));
    } catch (const BudgetExceededError&) {
      result.outcome = Outcome::BudgetExceeded;
      break;
    }
    problem.ensureVarCount(pool.count());

    SolveOutcome outcome = problem.solve(deadline, remainingSeconds(deadline));
    result.stats.iterations += 1;
    result.stats.clauseCount = problem.clauseCount();
    result.stats.varCount = problem.varCount();
    if (outcome.status == SatStatus::Timeout) {
      result.outcome = Outcome::Timeout;
      break;
    }
    if (outcome.status == SatStatus::Unsat) {
      // Monotone in k: also unsatisfiable for every larger bound.
      result.outcome = Outcome::Unsatisfiable;
      break;
    }

    Fsm fsm = decodeFsm(ctx, outcome);
    std::vector<Verdict> verdicts = modelCheck(fsm, req.formulas);
    bool clean = std::all_of(verdicts.begin(), verdicts.end(),
                             [](const Verdict& v) { return v.holds; });
    if (clean) {
      result.outcome = Outcome::Found;
      result.fsm = std::move(fsm);
      break;
    }
  }
  result.stats.wallSeconds = secondsSince(start);
  return result;
}

SynthesisResult identifyQsat(const SynthesisRequest& req) {
  if (req.qbfSolverCommand.empty())
    throw NoQbfSolverError("the QSAT method needs --qbf-solver (or FSMMINT_QBF_SOLVER)");

  auto start = Clock::now();
  Deadline deadline = makeDeadline(req.limits, start);
  LtlPtr target = toNnf(ltl::negation(ltl::conjoin(req.formulas)));

  SynthesisResult result;
  for (int k = 0;; ++k) {
    result.stats.finalK = k;
    if (pastDeadline(deadline)) {
      result.outcome = Outcome::Timeout;
      break;
    }

    ScenarioTree tree = buildScenarioTree(req.scenarios);
    VarPool pool;
    CircuitStore store;
    EncodingContext ctx(req.alphabet, req.stateCount, tree, pool, req.mode);

    std::vector<Clause> base = encodeScenario(ctx);
    {
      auto actions = encodeActions(ctx);
      base.insert(base.end(), actions.begin(), actions.end());
      auto completeness = encodeCompleteness(ctx);
      base.insert(base.end(), completeness.begin(), completeness.end());
      if (req.symmetryBreaking) {
        auto symmetry = encodeSymmetryBfs(ctx);
        base.insert(base.end(), symmetry.begin(), symmetry.end());
      }
    }

    QbfInstance qbf = assembleQbf(ctx, store, base, target, k);
    std::string text = toQdimacs(qbf.clauses, qbf.varCount, qbf.prefix);
    result.stats.iterations += 1;
    result.stats.clauseCount = qbf.clauses.size();
    result.stats.varCount = qbf.varCount;

    ExternalResult solved =
        externalSolve(req.qbfSolverCommand, text, SolverKind::Qsat,
                      remainingSeconds(deadline));
    if (solved.status == SatStatus::Timeout) {
      result.outcome = Outcome::Timeout;
      break;
    }
    if (solved.status == SatStatus::Unsat) {
      result.outcome = Outcome::Unsatisfiable;
      break;
    }

    std::optional<Fsm> fsm;
    if (!solved.modelLiterals.empty()) {
      SolveOutcome outer;
      outer.status = SatStatus::Sat;
      outer.model.assign(qbf.varCount + 1, 0);
      for (int lit : solved.modelLiterals)
        if (lit > 0 && lit <= qbf.varCount) outer.model[lit] = 1;
      try {
        Fsm candidate = decodeFsm(ctx, outer);
        if (candidate.allStatesHaveOutgoing()) fsm = std::move(candidate);
      } catch (const MalformedModelError&) {
        // junk model lines; fall through to the re-derivation below
      }
    }
    if (!fsm) {
      // The solver produced no usable outer model; re-derive an FSM by
      // solving the expansion of the same bound with the embedded solver.
      VarPool pool2;
      CircuitStore store2;
      EncodingContext ctx2(req.alphabet, req.stateCount, tree, pool2, req.mode);
      CnfProblem problem;
      problem.addAll(encodeScenario(ctx2));
      problem.addAll(encodeActions(ctx2));
      problem.addAll(encodeCompleteness(ctx2));
      if (req.symmetryBreaking) problem.addAll(encodeSymmetryBfs(ctx2));
      try {
        problem.addAll(
            expandUniversals(ctx2, store2, target, k, req.limits.expansionBudget));
      } catch (const BudgetExceededError&) {
        result.outcome = Outcome::BudgetExceeded;
        break;
      }
      problem.ensureVarCount(pool2.count());
      SolveOutcome outcome = problem.solve(deadline, remainingSeconds(deadline));
      if (outcome.status == SatStatus::Timeout) {
        result.outcome = Outcome::Timeout;
        break;
      }
      if (outcome.status != SatStatus::Sat)
        throw SolverCrashedError("QBF solver reported SAT but the expansion is UNSAT");
      fsm = decodeFsm(ctx2, outcome);
    }

    std::vector<Verdict> verdicts = modelCheck(*fsm, req.formulas);
    bool clean = std::all_of(verdicts.begin(), verdicts.end(),
                             [](const Verdict& v) { return v.holds; });
    if (clean) {
      result.outcome = Outcome::Found;
      result.fsm = std::move(*fsm);
      break;
    }
  }
  result.stats.wallSeconds = secondsSince(start);
  return result;
}

// ---------------------------------------------------------------------------
// Backtracking
// ---------------------------------------------------------------------------

namespace detail {

std::optional<std::vector<int>> findNewFrontier(const ScenarioTree& tree,
                                                const Fsm& partial,
                                                const std::vector<int>& bfsIndex) {
  std::vector<int> nodeState(tree.nodeCount() + 1, 0);
  nodeState[1] = Fsm::kInitialState;
  std::vector<int> frontier;

  std::vector<int> queue{1};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int node = queue[head];
    int state = nodeState[node];
    for (const auto& edge : tree.edges(node)) {
      const auto& t = partial.transition(state, edge.event);
      if (!t) {
        frontier.push_back(edge.child);
        continue;
      }
      if (t->outputs != edge.outputs) return std::nullopt;
      nodeState[edge.child] = t->dst;
      queue.push_back(edge.child);
    }
  }
  std::sort(frontier.begin(), frontier.end(),
            [&](int a, int b) { return bfsIndex[a] < bfsIndex[b]; });
  return frontier;
}

namespace {

struct BtTimeout {};

struct BtSearch {
  const SynthesisRequest& req;
  const ScenarioTree& tree;
  std::vector<int> bfsIndex;
  Deadline deadline;
  const PruneObserver* onPrune;
  SynthesisStats stats;

  /// State the frontier edge's source node maps to (recomputed walk; the
  /// partial FSM passes every edge above the frontier by construction).
  int sourceState(const Fsm& partial, int child) const {
    std::vector<int> chain;
    for (int n = child; n != 0; n = tree.parent(n)) chain.push_back(n);
    std::reverse(chain.begin(), chain.end());
    // Walk to the frontier edge's source node; the final edge (into `child`)
    // is the frontier edge itself and has no transition yet.
    int state = Fsm::kInitialState;
    for (std::size_t i = 0; i + 2 < chain.size(); ++i) {
      const auto* edge = findEdgeTo(chain[i], chain[i + 1]);
      const auto& t = partial.transition(state, edge->event);
      state = t->dst;
    }
    return state;
  }

  const ScenarioTree::Edge* findEdgeTo(int parent, int child) const {
    for (const auto& e : tree.edges(parent))
      if (e.child == child) return &e;
    return nullptr;
  }

  int visitedCount(const Fsm& partial) const {
    int maxUsed = 1;
    for (int s = 1; s <= partial.stateCount(); ++s)
      for (int e = 0; e < partial.eventCount(); ++e)
        if (const auto& t = partial.transition(s, e))
          maxUsed = std::max({maxUsed, s, t->dst});
    return maxUsed;
  }

  std::optional<Fsm> finalize(Fsm partial) {
    int used = visitedCount(partial);

    bool needsCompletion = req.mode == CompletenessMode::Complete;
    if (!needsCompletion)
      for (int s = 1; s <= used; ++s)
        if (partial.outDegree(s) == 0) needsCompletion = true;

    if (!needsCompletion) {
      // Trim to the used states; they are contiguous by the break rule.
      Fsm trimmed(used, partial.eventCount());
      for (int s = 1; s <= used; ++s)
        for (int e = 0; e < partial.eventCount(); ++e)
          if (const auto& t = partial.transition(s, e))
            trimmed.setTransition(s, e, t->dst, t->outputs);
      auto verdicts = modelCheck(trimmed, req.formulas);
      for (const auto& v : verdicts)
        if (!v.holds) return std::nullopt;
      return trimmed;
    }

    // Fill the remaining transitions with the CEGIS completion, the partial
    // FSM's y/z pinned as units. Symmetry breaking is off: the search's state
    // numbering need not be BFS-ordered.
    SynthesisRequest sub = req;
    if (deadline) sub.limits.wallSeconds = std::max(0.001, *remainingSeconds(deadline));
    CegisOptions opts;
    opts.symmetry = false;
    opts.fixedPartial = &partial;
    SynthesisResult completed = runCegis(sub, opts);
    stats.counterexamplesAdded += completed.stats.counterexamplesAdded;
    stats.clauseCount = std::max(stats.clauseCount, completed.stats.clauseCount);
    stats.varCount = std::max(stats.varCount, completed.stats.varCount);
    if (completed.outcome == Outcome::Timeout) throw BtTimeout{};
    if (completed.outcome == Outcome::Found) return std::move(*completed.fsm);
    return std::nullopt;
  }

  std::optional<Fsm> search(Fsm& partial, const std::vector<int>& frontier) {
    if (pastDeadline(deadline)) throw BtTimeout{};
    if (frontier.empty()) return finalize(partial);

    int child = frontier.front();
    int parent = tree.parent(child);
    const ScenarioTree::Edge* edge = findEdgeTo(parent, child);
    int source = sourceState(partial, child);
    int visited = visitedCount(partial);

    for (int dest = 1; dest <= req.stateCount; ++dest) {
      if (dest > visited + 1) break;  // an unvisited smaller state exists
      stats.iterations += 1;
      partial.setTransition(source, edge->event, dest, edge->outputs);
      auto next = findNewFrontier(tree, partial, bfsIndex);
      if (next) {
        auto verdicts = modelCheckPartial(partial, req.formulas);
        bool clean = std::all_of(verdicts.begin(), verdicts.end(),
                                 [](const Verdict& v) { return v.holds; });
        if (clean) {
          auto found = search(partial, *next);
          if (found) return found;
        } else if (onPrune && *onPrune) {
          (*onPrune)(partial);
        }
      }
      partial.clearTransition(source, edge->event);
    }
    return std::nullopt;
  }
};

}  // namespace

SynthesisResult identifyBacktrackingWithObserver(const SynthesisRequest& req,
                                                 const PruneObserver& onPrune) {
  auto start = Clock::now();
  ScenarioTree tree = buildScenarioTree(req.scenarios);

  std::vector<int> bfsIndex(tree.nodeCount() + 1, 0);
  {
    auto order = tree.bfsOrder();
    for (int i = 0; i < static_cast<int>(order.size()); ++i) bfsIndex[order[i]] = i;
  }

  BtSearch searcher{req, tree, std::move(bfsIndex), makeDeadline(req.limits, start),
                    &onPrune, {}};

  SynthesisResult result;
  try {
    Fsm partial(req.stateCount, req.alphabet.eventCount());
    auto initialFrontier = detail::findNewFrontier(tree, partial, searcher.bfsIndex);
    auto found = searcher.search(partial, *initialFrontier);
    result.stats = searcher.stats;
    if (found) {
      result.outcome = Outcome::Found;
      result.fsm = std::move(*found);
    } else {
      result.outcome = Outcome::Unsatisfiable;
    }
  } catch (const BtTimeout&) {
    result.stats = searcher.stats;
    result.outcome = Outcome::Timeout;
  }
  result.stats.wallSeconds = secondsSince(start);
  return result;
}

}  // namespace detail

SynthesisResult identifyBacktracking(const SynthesisRequest& req) {
  return detail::identifyBacktrackingWithObserver(req, nullptr);
}

SynthesisResult identify(const SynthesisRequest& req) {
  switch (req.method) {
    case Method::Iterative: return identifyIterative(req);
    case Method::Exponential: return identifyExponential(req);
    case Method::Qsat: return identifyQsat(req);
    case Method::Backtracking: return identifyBacktracking(req);
  }
  throw std::logic_error("unknown method");
}

FindMinimumResult findMinimum(const SynthesisRequest& req) {
  auto start = Clock::now();
  Deadline deadline = makeDeadline(req.limits, start);

  FindMinimumResult out;
  {
    ScenarioTree tree = buildScenarioTree(req.scenarios);
    auto clique = greedyMaxClique(inconsistentPairs(tree), tree.nodeCount());
    out.cliqueLowerBound = std::max<int>(1, static_cast<int>(clique.size()));
  }

  for (int states = out.cliqueLowerBound; states <= req.limits.stateCap; ++states) {
    SynthesisRequest sub = req;
    sub.stateCount = states;
    if (deadline) {
      auto remaining = remainingSeconds(deadline);
      if (*remaining <= 0) {
        out.result.outcome = Outcome::Timeout;
        out.result.stats.wallSeconds = secondsSince(start);
        return out;
      }
      sub.limits.wallSeconds = *remaining;
    }

    SynthesisResult r = identify(sub);
    out.perSize.push_back({states, r.outcome, r.stats.wallSeconds, r.stats});
    if (r.outcome == Outcome::Found) {
      out.minStates = states;
      out.result = std::move(r);
      return out;
    }
    if (r.outcome != Outcome::Unsatisfiable) {
      out.result = std::move(r);  // Timeout or BudgetExceeded: stop here
      return out;
    }
    out.result = std::move(r);
  }
  out.cappedOut = true;
  return out;
}

}  // namespace fsmmint
