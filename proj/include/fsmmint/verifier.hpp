#pragma once

#include <optional>
#include <vector>

#include "fsmmint/kripke.hpp"
#include "fsmmint/ltl.hpp"
#include "fsmmint/negative_tree.hpp"

namespace fsmmint {

/// Büchi automaton over wasEvent/wasAction propositions, built by a
/// GPVW-style tableau and degeneralized with a counter product. A state's
/// literal constraints apply to the trace element consumed when entering it.
/// The acceptAll flag marks states with no remaining obligations: once
/// entered, every continuation is accepted.
struct BuchiAutomaton {
  struct State {
    std::vector<int> requiredEvents;    // wasEvent ids that must hold
    std::vector<int> forbiddenEvents;
    std::vector<int> requiredActions;   // wasAction ids that must hold
    std::vector<int> forbiddenActions;
    bool accepting = false;
    bool acceptAll = false;
  };

  std::vector<State> states;
  std::vector<std::vector<int>> succ;
  std::vector<int> initial;

  bool matches(int state, int event, const ActionSet& outputs) const;
};

/// Tableau construction for an NNF formula; the automaton accepts exactly the
/// infinite traces satisfying it.
BuchiAutomaton ltlToBuchi(const LtlPtr& nnf);

struct Verdict {
  bool holds = true;
  std::optional<Counterexample> counterexample;
};

/// Lower-level entry: verdict of a formula given the prebuilt automaton of
/// its NEGATION, against an existing Kripke structure. Lets bulk callers
/// (the brute-force oracle) amortize the tableau construction.
Verdict checkAgainstNegation(const KripkeStructure& kripke,
                             const BuchiAutomaton& negated);

/// Explicit-state model check of each formula over the FSM's Kripke
/// structure. Violations carry a short counterexample found by layered BFS
/// (shortest prefix to an accepting state, then its shortest cycle);
/// reaching an acceptAll product state yields a Finite counterexample
/// (every continuation violates) and drops the cycle.
std::vector<Verdict> modelCheck(const Fsm& fsm, const std::vector<LtlPtr>& formulas);

/// Variant for partial FSMs: dead-end states are tolerated and paths into
/// them are treated as vacuously safe.
std::vector<Verdict> modelCheckPartial(const Fsm& fsm,
                                       const std::vector<LtlPtr>& formulas);

}  // namespace fsmmint
