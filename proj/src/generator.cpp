#include "fsmmint/generator.hpp"

#include <algorithm>

#include "fsmmint/errors.hpp"
#include "fsmmint/synth.hpp"

namespace fsmmint {

std::uint64_t uniformInt(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // rejection sampling over the smallest covering power of two
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = rng() & mask;
    if (v < bound) return v;
  }
}

bool bernoulli(Rng& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

InstanceSpec InstanceSpec::paperPreset(int maxStates, bool complete, std::uint64_t seed) {
  InstanceSpec spec;
  spec.maxStates = maxStates;
  spec.eventCount = 4;
  spec.actionCount = 4;
  spec.complete = complete;
  spec.scenarioCount = 10;
  spec.totalScenarioLength = 0;
  spec.formulaCount = 4;
  spec.seed = seed;
  return spec;
}

Alphabet InstanceSpec::makeAlphabet() const {
  std::vector<std::string> events, actions;
  for (int e = 1; e <= eventCount; ++e) events.push_back("e" + std::to_string(e));
  for (int a = 1; a <= actionCount; ++a) actions.push_back("z" + std::to_string(a));
  return Alphabet(std::move(events), std::move(actions));
}

// ---------------------------------------------------------------------------
// Random FSMs
// ---------------------------------------------------------------------------

namespace {

ActionSet randomOutputs(const InstanceSpec& spec, Rng& rng) {
  int maxSize = std::min(4, spec.actionCount);
  int size = static_cast<int>(uniformInt(rng, maxSize + 1));
  std::vector<int> ids(spec.actionCount);
  for (int a = 0; a < spec.actionCount; ++a) ids[a] = a;
  // partial Fisher-Yates: draw `size` distinct actions
  ActionSet out;
  for (int i = 0; i < size; ++i) {
    int j = i + static_cast<int>(uniformInt(rng, ids.size() - i));
    std::swap(ids[i], ids[j]);
    out.push_back(ids[i]);
  }
  return canonicalActionSet(std::move(out));
}

std::vector<int> reachableStates(const Fsm& fsm) {
  std::vector<char> seen(fsm.stateCount() + 1, 0);
  std::vector<int> queue{Fsm::kInitialState};
  seen[Fsm::kInitialState] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int e = 0; e < fsm.eventCount(); ++e) {
      const auto& t = fsm.transition(queue[head], e);
      if (t && !seen[t->dst]) {
        seen[t->dst] = 1;
        queue.push_back(t->dst);
      }
    }
  }
  return queue;
}

}  // namespace

RandomFsmResult randomFsmWithStats(const InstanceSpec& spec, Rng& rng) {
  const int states = spec.maxStates;
  const int events = spec.eventCount;
  Fsm fsm(states, events);

  int preRepair = 0;
  for (int s = 1; s <= states; ++s) {
    for (int e = 0; e < events; ++e) {
      if (!spec.complete && !bernoulli(rng, 0.5)) continue;
      ++preRepair;
      int dst = 1 + static_cast<int>(uniformInt(rng, states));
      fsm.setTransition(s, e, dst, randomOutputs(spec, rng));
    }
  }

  if (!spec.complete) {
    // Repair 1: every state keeps at least one outgoing transition.
    for (int s = 1; s <= states; ++s) {
      if (fsm.outDegree(s) > 0) continue;
      int e = static_cast<int>(uniformInt(rng, events));
      int dst = 1 + static_cast<int>(uniformInt(rng, states));
      fsm.setTransition(s, e, dst, randomOutputs(spec, rng));
    }
  }
  // Repair 2: make every state reachable from the initial one, preferring
  // free (state, event) slots of already reachable states (complete FSMs
  // have none, so an existing transition gets redirected).
  for (int guard = 0; guard < 100 * states && !fsm.allStatesReachable(); ++guard) {
    auto reachable = reachableStates(fsm);
    std::vector<char> isReachable(states + 1, 0);
    for (int s : reachable) isReachable[s] = 1;
    std::vector<int> missing;
    for (int s = 1; s <= states; ++s)
      if (!isReachable[s]) missing.push_back(s);
    int target = missing[uniformInt(rng, missing.size())];

    std::vector<std::pair<int, int>> freeSlots, anySlots;
    for (int s : reachable)
      for (int e = 0; e < events; ++e) {
        anySlots.emplace_back(s, e);
        if (!fsm.transition(s, e)) freeSlots.emplace_back(s, e);
      }
    const auto& slots = freeSlots.empty() ? anySlots : freeSlots;
    auto [s, e] = slots[uniformInt(rng, slots.size())];
    fsm.setTransition(s, e, target, randomOutputs(spec, rng));
  }
  if (!fsm.allStatesReachable())
    throw GenerationStuckError("reachability repair did not converge");
  return {std::move(fsm), preRepair};
}

Fsm randomFsm(const InstanceSpec& spec, Rng& rng) {
  return randomFsmWithStats(spec, rng).fsm;
}

// ---------------------------------------------------------------------------
// Random scenarios
// ---------------------------------------------------------------------------

std::vector<Scenario> randomScenarios(const Fsm& fsm, const InstanceSpec& spec, Rng& rng) {
  const int total = spec.resolvedTotalLength();
  const int count = spec.scenarioCount;
  std::vector<int> lengths(count, total / count);
  lengths.back() += total % count;

  // In the complete case a random half of the transitions is banned from
  // traversal so that scenarios alone underdetermine the FSM.
  auto drawBans = [&]() {
    std::vector<std::vector<char>> banned(fsm.stateCount() + 1,
                                          std::vector<char>(fsm.eventCount(), 0));
    if (spec.complete)
      for (int s = 1; s <= fsm.stateCount(); ++s)
        for (int e = 0; e < fsm.eventCount(); ++e)
          if (fsm.transition(s, e) && bernoulli(rng, 0.5)) banned[s][e] = 1;
    return banned;
  };

  for (int banAttempt = 0; banAttempt < 50; ++banAttempt) {
    auto banned = drawBans();
    std::vector<Scenario> scenarios;
    bool ok = true;

    for (int i = 0; i < count && ok; ++i) {
      bool done = false;
      for (int retry = 0; retry < 100 && !done; ++retry) {
        Scenario sc;
        int state = Fsm::kInitialState;
        bool deadEnd = false;
        for (int step = 0; step < lengths[i]; ++step) {
          std::vector<int> allowed;
          for (int e = 0; e < fsm.eventCount(); ++e)
            if (fsm.transition(state, e) && !banned[state][e]) allowed.push_back(e);
          if (allowed.empty()) {
            deadEnd = true;
            break;
          }
          int e = allowed[uniformInt(rng, allowed.size())];
          const auto& t = fsm.transition(state, e);
          sc.push_back({e, t->outputs});
          state = t->dst;
        }
        if (!deadEnd) {
          scenarios.push_back(std::move(sc));
          done = true;
        }
      }
      if (!done) ok = false;  // walks keep dead-ending: redraw the ban set
    }
    if (ok) return scenarios;
  }
  throw GenerationStuckError("scenario walks kept dead-ending");
}

// ---------------------------------------------------------------------------
// Random LTL
// ---------------------------------------------------------------------------

namespace {

/// Events observed on transitions that can follow a transition marked with
/// `event` in the reference FSM.
std::vector<int> successorEvents(const Fsm& fsm, int event) {
  std::vector<char> seen(fsm.eventCount(), 0);
  for (int s = 1; s <= fsm.stateCount(); ++s) {
    const auto& t = fsm.transition(s, event);
    if (!t) continue;
    for (int e2 = 0; e2 < fsm.eventCount(); ++e2)
      if (fsm.transition(t->dst, e2)) seen[e2] = 1;
  }
  std::vector<int> events;
  for (int e = 0; e < fsm.eventCount(); ++e)
    if (seen[e]) events.push_back(e);
  return events;
}

LtlPtr drawTemplate(const Fsm& fsm, const InstanceSpec& spec, Rng& rng) {
  using namespace ltl;
  auto event = [&]() { return static_cast<int>(uniformInt(rng, spec.eventCount)); };
  auto action = [&]() { return static_cast<int>(uniformInt(rng, spec.actionCount)); };

  switch (uniformInt(rng, 7)) {
    case 0:
      return globally(implication(wasEvent(event()), finally_(wasAction(action()))));
    case 1:
      return globally(implication(wasAction(action()), next(wasAction(action()))));
    case 2:
      return finally_(wasAction(action()));
    case 3:
      return globally(negation(conjunction(wasEvent(event()), wasAction(action()))));
    case 4:
      return disjunction(wasAction(action()), next(wasAction(action())));
    case 5: {
      int e = event();
      auto succ = successorEvents(fsm, e);
      LtlPtr body = falseFormula();
      for (std::size_t i = 0; i < succ.size(); ++i)
        body = i == 0 ? wasEvent(succ[i]) : disjunction(std::move(body), wasEvent(succ[i]));
      return globally(implication(wasEvent(e), next(std::move(body))));
    }
    default:
      return until(negation(wasEvent(event())), wasAction(action()));
  }
}

}  // namespace

std::vector<LtlPtr> randomLtl(const Fsm& fsm, const InstanceSpec& spec, Rng& rng) {
  if (spec.actionCount == 0)
    throw GenerationStuckError("the template pool needs at least one action");

  std::vector<LtlPtr> formulas;
  int attempts = 0;
  while (static_cast<int>(formulas.size()) < spec.formulaCount) {
    if (++attempts > 2000)
      throw GenerationStuckError("LTL template pool exhausted for this alphabet");
    LtlPtr candidate = drawTemplate(fsm, spec, rng);
    if (!modelCheck(fsm, {candidate}).front().holds) continue;

    // Discrimination filter: discard formulas satisfied by more than 5 of 10
    // other random FSMs drawn with the same parameters.
    int satisfied = 0;
    for (int i = 0; i < 10; ++i) {
      Fsm other = randomFsm(spec, rng);
      if (modelCheck(other, {candidate}).front().holds) ++satisfied;
    }
    if (satisfied > 5) continue;
    formulas.push_back(std::move(candidate));
  }
  return formulas;
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

Instance generateInstance(const InstanceSpec& spec, bool hardFilter) {
  Rng rng(spec.seed);
  Alphabet alphabet = spec.makeAlphabet();

  for (int attempt = 0; attempt < 1000; ++attempt) {
    Instance inst{spec, Fsm(1, spec.eventCount), {}, {}, false};
    inst.referenceFsm = randomFsm(spec, rng);
    try {
      inst.scenarios = randomScenarios(inst.referenceFsm, spec, rng);
      inst.formulas = randomLtl(inst.referenceFsm, spec, rng);
    } catch (const GenerationStuckError&) {
      continue;
    }

    if (!hardFilter) return inst;

    // Hard filter: the scenarios-only identification at |S|max must produce
    // an FSM that violates at least one formula.
    SynthesisRequest req{alphabet, inst.scenarios, {}, spec.maxStates};
    req.mode = spec.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;
    SynthesisResult scenariosOnly = identifyIterative(req);
    if (scenariosOnly.outcome != Outcome::Found) continue;

    auto verdicts = modelCheck(*scenariosOnly.fsm, inst.formulas);
    bool violates = std::any_of(verdicts.begin(), verdicts.end(),
                                [](const Verdict& v) { return !v.holds; });
    if (violates) {
      inst.hard = true;
      return inst;
    }
  }
  throw GenerationStuckError("no hard instance within the retry cap");
}

Instance makeHardInstance(const InstanceSpec& spec) { return generateInstance(spec, true); }

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

bool nextChoice(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

BruteForceOutcome bruteForceMinStates(const Alphabet& alphabet,
                                      const std::vector<Scenario>& scenarios,
                                      const std::vector<LtlPtr>& formulas,
                                      CompletenessMode mode, int capStates) {
  const int events = alphabet.eventCount();
  const int actions = alphabet.actionCount();
  const int outputChoices = 1 << actions;

  // negated automata built once; the per-candidate work is a product search
  std::vector<BuchiAutomaton> negated;
  for (const auto& f : formulas)
    negated.push_back(ltlToBuchi(toNnf(ltl::negation(f))));

  for (int states = 1; states <= capStates; ++states) {
    // Per (state, event): destination * output subset, plus "absent" in the
    // AtLeastOne mode (encoded as the last value).
    const int present = states * outputChoices;
    const int perSlot = mode == CompletenessMode::Complete ? present : present + 1;
    const int slots = states * events;

    std::vector<int> digits(slots, 0);
    std::vector<int> radix(slots, perSlot);
    do {
      Fsm fsm(states, events);
      bool valid = true;
      for (int slot = 0; slot < slots; ++slot) {
        int choice = digits[slot];
        if (choice == present) continue;  // absent (AtLeastOne mode only)
        int dst = 1 + choice % states;
        int subset = choice / states;
        ActionSet outputs;
        for (int a = 0; a < actions; ++a)
          if (subset & (1 << a)) outputs.push_back(a);
        fsm.setTransition(slot / events + 1, slot % events, dst, std::move(outputs));
      }
      if (mode == CompletenessMode::AtLeastOne && !fsm.allStatesHaveOutgoing())
        valid = false;

      if (valid) {
        for (const auto& sc : scenarios)
          if (!runScenario(fsm, sc).accepted) {
            valid = false;
            break;
          }
      }
      if (valid && !negated.empty()) {
        KripkeStructure kripke = fsmToKripke(fsm);
        for (const auto& automaton : negated)
          if (!checkAgainstNegation(kripke, automaton).holds) {
            valid = false;
            break;
          }
      }
      if (valid) return states;
    } while (nextChoice(digits, radix));
  }
  return NoSolutionUpTo{capStates};
}

}  // namespace fsmmint
