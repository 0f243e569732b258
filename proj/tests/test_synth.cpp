#include <doctest.h>

#include <cstdlib>

#include "fsmmint/errors.hpp"
#include "fsmmint/generator.hpp"
#include "fsmmint/synth.hpp"
#include "support.hpp"

using namespace fsmmint;
using namespace testsupport;

namespace {

std::string qbfCommand() {
  const char* bin = std::getenv("FSMMINT_BIN");
  REQUIRE(bin != nullptr);
  return std::string(bin) + " qbf";
}

void checkSound(const SynthesisRequest& req, const SynthesisResult& result) {
  REQUIRE(result.outcome == Outcome::Found);
  const Fsm& fsm = *result.fsm;
  for (const auto& sc : req.scenarios) CHECK(runScenario(fsm, sc).accepted);
  for (const auto& verdict : modelCheck(fsm, req.formulas)) CHECK(verdict.holds);
  if (req.mode == CompletenessMode::Complete)
    CHECK(fsm.transitionCount() == fsm.stateCount() * fsm.eventCount());
  CHECK(fsm.allStatesHaveOutgoing());
}

}  // namespace

TEST_CASE("iterative: example scenarios need one iteration at |S|=2") {
  SynthesisRequest req{alphabet22(), treeExampleScenarios(), {}, 2};
  SynthesisResult result = identifyIterative(req);
  CHECK(result.stats.iterations == 1);
  checkSound(req, result);
}

TEST_CASE("a false formula makes every instance unsatisfiable") {
  SynthesisRequest req{alphabet22(), treeExampleScenarios(),
                       {ltl::falseFormula()}, 3};
  CHECK(identifyIterative(req).outcome == Outcome::Unsatisfiable);
  CHECK(identifyExponential(req).outcome == Outcome::Unsatisfiable);
  CHECK(identifyBacktracking(req).outcome == Outcome::Unsatisfiable);
  req.qbfSolverCommand = qbfCommand();
  req.method = Method::Qsat;
  CHECK(identify(req).outcome == Outcome::Unsatisfiable);
}

TEST_CASE("round trip: a generated 4-state instance is found and verified") {
  InstanceSpec spec;
  spec.maxStates = 4;
  spec.eventCount = 3;
  spec.actionCount = 3;
  spec.scenarioCount = 8;
  spec.totalScenarioLength = 120;
  spec.seed = 20;
  Instance inst = generateInstance(spec, false);
  SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, 4};
  SynthesisResult result = identifyIterative(req);
  checkSound(req, result);
}

TEST_CASE("exponential: trivial formulas terminate at k=0") {
  SynthesisRequest req{alphabet22(), treeExampleScenarios(),
                       {ltl::trueFormula()}, 2};
  SynthesisResult result = identifyExponential(req);
  CHECK(result.stats.finalK == 0);
  checkSound(req, result);
}

TEST_CASE("exponential: a long-counterexample chain exhausts a small budget") {
  // The scenario pins every e1 output to {} along a long chain, so every
  // consistent FSM keeps an all-e1 lasso with no z1 and violates the chain
  // formula; a 3-state e1-cycle evades the k=0 bounded check, so the bound
  // must grow, and the k=1 expansion exceeds the clause cap.
  Alphabet ab = alphabet22();
  LtlPtr chain = parseLtl("G(wasEvent(e1) -> X X X X X X X X wasAction(z1))", ab);
  Scenario sc(10, ScenarioElement{0, {}});
  SynthesisRequest req{ab, {sc}, {chain}, 3};
  req.limits.expansionBudget = 50;
  SynthesisResult result = identifyExponential(req);
  CHECK(result.outcome == Outcome::BudgetExceeded);
  CHECK(result.stats.finalK == 1);
}

TEST_CASE("qsat: missing solver command fails loudly") {
  SynthesisRequest req{alphabet22(), treeExampleScenarios(), {}, 2};
  req.method = Method::Qsat;
  CHECK_THROWS_AS(identify(req), NoQbfSolverError);
}

TEST_CASE("qsat agrees with exponential on small instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    InstanceSpec spec;
    spec.maxStates = 2;
    spec.eventCount = 2;
    spec.actionCount = 2;
    spec.scenarioCount = 2;
    spec.totalScenarioLength = 10;
    spec.complete = seed % 2 == 0;
    spec.formulaCount = 2;
    spec.seed = seed;
    Instance inst = generateInstance(spec, false);
    auto mode = spec.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;
    for (int states = 1; states <= 2; ++states) {
      SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, states};
      req.mode = mode;
      SynthesisResult viaExpansion = identifyExponential(req);
      req.method = Method::Qsat;
      req.qbfSolverCommand = qbfCommand();
      SynthesisResult viaQbf = identify(req);
      CHECK(viaExpansion.outcome == viaQbf.outcome);
      if (viaQbf.outcome == Outcome::Found) checkSound(req, viaQbf);
    }
  }
}

TEST_CASE("qsat falls back to expansion when the solver gives no model") {
  SynthesisRequest req{alphabet22(), treeExampleScenarios(), {}, 2};
  req.method = Method::Qsat;
  req.qbfSolverCommand = "sh -c 'echo s SATISFIABLE'";  // verdict only
  SynthesisResult result = identify(req);
  checkSound(req, result);
}

TEST_CASE("backtracking: initial frontier holds two occurrences of one element") {
  // An FSM under construction with the e2/e3 transitions already placed and
  // a scenario tree whose two branches both continue with (e1, z1): the
  // frontier consists of exactly those two edges.
  Alphabet ab({"e1", "e2", "e3"}, {"z1", "z2", "z3"});
  std::vector<Scenario> scenarios{
      {{1, {1}}, {0, {0}}},
      {{2, {2}}, {0, {0}}},
  };
  ScenarioTree tree = buildScenarioTree(scenarios);
  std::vector<int> bfsIndex(tree.nodeCount() + 1, 0);
  auto order = tree.bfsOrder();
  for (int i = 0; i < static_cast<int>(order.size()); ++i) bfsIndex[order[i]] = i;

  Fsm partial(3, 3);
  partial.setTransition(1, 1, 2, {1});
  partial.setTransition(1, 2, 3, {2});

  auto frontier = detail::findNewFrontier(tree, partial, bfsIndex);
  REQUIRE(frontier.has_value());
  REQUIRE(frontier->size() == 2);
  // both frontier edges carry the same scenario element (e1, {z1})
  for (int child : *frontier) {
    int parent = tree.parent(child);
    const ScenarioTree::Edge* edge = nullptr;
    for (const auto& e : tree.edges(parent))
      if (e.child == child) edge = &e;
    REQUIRE(edge != nullptr);
    CHECK(edge->event == 0);
    CHECK(edge->outputs == ActionSet{0});
  }

  // a contradicting partial FSM yields no frontier
  Fsm bad(3, 3);
  bad.setTransition(1, 1, 2, {0});  // wrong outputs for (e2, {z2})
  CHECK_FALSE(detail::findNewFrontier(tree, bad, bfsIndex).has_value());
}

TEST_CASE("backtracking: the verdict flips exactly at the brute-force minimum") {
  Alphabet ab({"e1", "e2"}, {"z1", "z2"});
  std::vector<Scenario> scenarios{
      {{0, {0}}, {1, {0}}},
      {{1, {1}}, {1, {1}}},
  };
  auto oracle = bruteForceMinStates(ab, scenarios, {}, CompletenessMode::AtLeastOne, 3);
  REQUIRE(std::holds_alternative<int>(oracle));
  int minimum = std::get<int>(oracle);
  REQUIRE(minimum >= 2);
  SynthesisRequest req{ab, scenarios, {}, minimum - 1};
  CHECK(identifyBacktracking(req).outcome == Outcome::Unsatisfiable);
  req.stateCount = minimum;
  checkSound(req, identifyBacktracking(req));
}

TEST_CASE("backtracking matches iterative on generated instances") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    InstanceSpec spec;
    spec.maxStates = 3;
    spec.eventCount = 2;
    spec.actionCount = 2;
    spec.scenarioCount = 4;
    spec.totalScenarioLength = 30;
    spec.complete = seed % 2 == 0;
    spec.formulaCount = 2;
    spec.seed = seed;
    Instance inst = generateInstance(spec, false);
    auto mode = spec.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;
    for (int states = 1; states <= spec.maxStates; ++states) {
      SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, states};
      req.mode = mode;
      SynthesisResult iterative = identifyIterative(req);
      SynthesisResult backtracking = identifyBacktracking(req);
      CHECK(iterative.outcome == backtracking.outcome);
      if (backtracking.outcome == Outcome::Found) checkSound(req, backtracking);
    }
  }
}

TEST_CASE("backtracking prunes are sound: rejected partials have no completion") {
  // exhaustively complete each pruned partial FSM and re-check: none of the
  // completions may satisfy scenarios + formulas
  int verified = 0;
  for (std::uint64_t seed = 31; seed < 60 && verified < 10; ++seed) {
    InstanceSpec spec;
    spec.maxStates = 2;
    spec.eventCount = 2;
    spec.actionCount = 1;
    spec.scenarioCount = 2;
    spec.totalScenarioLength = 8;
    spec.formulaCount = 2;
    spec.seed = seed;
    Instance inst = generateInstance(spec, false);
    Alphabet ab = spec.makeAlphabet();

    std::vector<Fsm> pruned;
    SynthesisRequest req{ab, inst.scenarios, inst.formulas, 2};
    detail::PruneObserver observer = [&](const Fsm& partial) {
      pruned.push_back(partial);
    };
    detail::identifyBacktrackingWithObserver(req, observer);

    for (const Fsm& partial : pruned) {
      // enumerate every completion of the partial structure (each free slot:
      // absent or (dst, outputs))
      std::vector<std::pair<int, int>> freeSlots;
      for (int s = 1; s <= 2; ++s)
        for (int e = 0; e < 2; ++e)
          if (!partial.transition(s, e)) freeSlots.emplace_back(s, e);
      const int options = 1 + 2 * 2;  // absent | dst in {1,2} x outputs in {{},{z1}}
      std::vector<int> digits(freeSlots.size(), 0);
      bool any = false;
      for (;;) {
        Fsm candidate = partial;
        for (std::size_t i = 0; i < freeSlots.size(); ++i) {
          if (digits[i] == 0) continue;
          int choice = digits[i] - 1;
          candidate.setTransition(freeSlots[i].first, freeSlots[i].second,
                                  1 + choice % 2,
                                  choice / 2 ? ActionSet{0} : ActionSet{});
        }
        bool valid = candidate.allStatesHaveOutgoing();
        for (const auto& sc : inst.scenarios)
          valid = valid && runScenario(candidate, sc).accepted;
        if (valid)
          for (const auto& verdict : modelCheck(candidate, inst.formulas))
            valid = valid && verdict.holds;
        if (valid) {
          any = true;
          break;
        }
        std::size_t i = 0;
        for (; i < digits.size(); ++i) {
          if (++digits[i] < options) break;
          digits[i] = 0;
        }
        if (i == digits.size()) break;
      }
      CHECK_FALSE(any);
      ++verified;
    }
  }
  CHECK(verified > 0);  // the search actually pruned something
}

TEST_CASE("iterative progress: hard instances need several iterations") {
  InstanceSpec spec = InstanceSpec::paperPreset(4, false, 91);
  spec.eventCount = 2;
  spec.actionCount = 2;
  Instance inst = makeHardInstance(spec);
  SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, 4};
  SynthesisResult result = identifyIterative(req);
  checkSound(req, result);
  CHECK(result.stats.iterations >= 2);
  CHECK(result.stats.counterexamplesAdded >= 1);
}

TEST_CASE("findMinimum: one-state instances and clique bound") {
  Alphabet ab({"e1"}, {"z1"});
  Scenario sc{{0, {0}}, {0, {0}}};
  SynthesisRequest req{ab, {sc}, {}, 1};
  FindMinimumResult found = findMinimum(req);
  CHECK(found.minStates == 1);
  CHECK(found.cliqueLowerBound == 1);
  REQUIRE(found.result.outcome == Outcome::Found);
  CHECK(found.result.fsm->stateCount() == 1);
}

TEST_CASE("findMinimum agrees with the brute-force oracle") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    InstanceSpec spec;
    spec.maxStates = 3;
    spec.eventCount = 2;
    spec.actionCount = 1;
    spec.scenarioCount = 3;
    spec.totalScenarioLength = 18;
    spec.complete = seed % 2 == 0;
    spec.formulaCount = 2;
    spec.seed = seed;
    Instance inst = generateInstance(spec, false);
    Alphabet ab = spec.makeAlphabet();
    auto mode = spec.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;

    auto oracle = bruteForceMinStates(ab, inst.scenarios, inst.formulas, mode, 3);
    REQUIRE(std::holds_alternative<int>(oracle));

    SynthesisRequest req{ab, inst.scenarios, inst.formulas, 1};
    req.mode = mode;
    for (Method method : {Method::Iterative, Method::Backtracking}) {
      req.method = method;
      FindMinimumResult found = findMinimum(req);
      CHECK(found.minStates == std::get<int>(oracle));
      CHECK(found.cliqueLowerBound <= found.minStates);
    }
  }
}

TEST_CASE("cross-method agreement per size and on the minimum") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    InstanceSpec spec;
    spec.maxStates = 3;
    spec.eventCount = 2;
    spec.actionCount = 2;
    spec.scenarioCount = 4;
    spec.totalScenarioLength = 24;
    spec.complete = seed % 2 == 0;
    spec.formulaCount = 2;
    spec.seed = seed;
    Instance inst = generateInstance(spec, false);
    auto mode = spec.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;

    std::vector<int> minima;
    for (Method method : {Method::Iterative, Method::Exponential, Method::Backtracking}) {
      SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, 1};
      req.mode = mode;
      req.method = method;
      FindMinimumResult found = findMinimum(req);
      REQUIRE(found.result.outcome == Outcome::Found);
      minima.push_back(found.minStates);
      // per-size verdicts: everything below the minimum was Unsatisfiable
      for (const auto& record : found.perSize)
        CHECK((record.stateCount == found.minStates) ==
              (record.outcome == Outcome::Found));
    }
    CHECK(minima[0] == minima[1]);
    CHECK(minima[0] == minima[2]);
  }
}

TEST_CASE("prohibited paths never replay on the final FSM") {
  // run the CEGIS loop by hand to keep the negative tree visible, then
  // replay every stored terminal path and back-edge lasso against the
  // accepted FSM: each must fail
  InstanceSpec spec = InstanceSpec::paperPreset(4, false, 92);
  spec.eventCount = 2;
  spec.actionCount = 2;
  Instance inst = makeHardInstance(spec);
  Alphabet ab = spec.makeAlphabet();

  ScenarioTree tree = buildScenarioTree(inst.scenarios);
  VarPool pool;
  NegativeScenarioTree neg;
  EncodingContext ctx(ab, 4, tree, pool, CompletenessMode::AtLeastOne);
  CnfProblem problem;
  problem.addAll(encodeScenario(ctx));
  problem.addAll(encodeActions(ctx));
  problem.addAll(encodeCompleteness(ctx));
  problem.addAll(encodeSymmetryBfs(ctx));
  problem.ensureVarCount(pool.count());

  std::optional<Fsm> final;
  for (int iteration = 0; iteration < 500 && !final; ++iteration) {
    auto outcome = problem.solve();
    REQUIRE(outcome.status == SatStatus::Sat);
    Fsm fsm = decodeFsm(ctx, outcome);
    bool clean = true;
    for (const auto& verdict : modelCheck(fsm, inst.formulas)) {
      if (verdict.holds) continue;
      clean = false;
      neg.addCounterexample(*verdict.counterexample);
    }
    if (clean)
      final = std::move(fsm);
    else {
      problem.addAll(encodeNegativeTree(ctx, neg));
      problem.ensureVarCount(pool.count());
    }
  }
  REQUIRE(final.has_value());
  CHECK_FALSE(neg.terminalMarks().empty() + neg.backEdges().empty() == 2);

  // walk the FSM along a negative-tree root path; 0 = diverged
  auto execute = [&](const std::vector<int>& path) {
    int state = Fsm::kInitialState;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const auto& edge = neg.incomingEdge(path[i]);
      const auto& t = final->transition(state, edge.event);
      if (!t || t->outputs != edge.outputs) return 0;
      state = t->dst;
    }
    return state;
  };
  auto rootPath = [&](int node) {
    std::vector<int> path;
    for (int n = node; n != 0; n = neg.parent(n)) path.push_back(n);
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (int node : neg.terminalMarks()) CHECK(execute(rootPath(node)) == 0);
  for (auto [end, start] : neg.backEdges()) {
    int atStart = execute(rootPath(start));
    if (atStart == 0) continue;  // lasso prefix already unrealizable
    int atEnd = execute(rootPath(end));
    CHECK(atEnd != atStart);  // the cycle must not close
  }
}

TEST_CASE("iterative runs against an external DIMACS solver") {
  const char* bin = std::getenv("FSMMINT_BIN");
  REQUIRE(bin != nullptr);
  SynthesisRequest req{alphabet22(), treeExampleScenarios(), {}, 2};
  req.satSolverCommand = std::string(bin) + " qbf";  // doubles as a SAT solver
  SynthesisResult external = identifyIterative(req);
  checkSound(req, external);
  req.satSolverCommand.clear();
  CHECK(identifyIterative(req).outcome == external.outcome);
}

TEST_CASE("timeouts surface as Timeout") {
  InstanceSpec spec = InstanceSpec::paperPreset(6, false, 5);
  Instance inst = generateInstance(spec, false);
  SynthesisRequest req{spec.makeAlphabet(), inst.scenarios, inst.formulas, 6};
  req.limits.wallSeconds = 1e-7;
  CHECK(identifyIterative(req).outcome == Outcome::Timeout);
  CHECK(identifyBacktracking(req).outcome == Outcome::Timeout);
}
