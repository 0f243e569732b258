#pragma once

#include <vector>

#include "fsmmint/fsm.hpp"

namespace fsmmint {

/// Kripke structure of an FSM: one Kripke state per FSM transition, labeled
/// with wasEvent(e) for the triggering event and wasAction(z) for each output.
struct KripkeState {
  int src = 0;
  int event = 0;
  int dst = 0;
  ActionSet outputs;
};

struct KripkeStructure {
  std::vector<KripkeState> states;
  std::vector<int> initial;             // indices of states with src == 1
  std::vector<std::vector<int>> succ;   // succ[q] = states whose src == dst(q)

  bool hasAction(int state, int action) const;
};

/// Throws DeadStateError when some FSM state has no outgoing transition
/// (the transition relation would not be left-total).
KripkeStructure fsmToKripke(const Fsm& fsm);

/// Variant for partial FSMs explored during backtracking: dead-end states are
/// allowed and paths into them are simply not extended.
KripkeStructure fsmToKripkePartial(const Fsm& fsm);

}  // namespace fsmmint
