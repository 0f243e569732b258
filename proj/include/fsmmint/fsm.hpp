#pragma once

#include <optional>
#include <vector>

#include "fsmmint/alphabet.hpp"

namespace fsmmint {

/// Canonical output set: sorted, duplicate-free action ids.
using ActionSet = std::vector<int>;

ActionSet canonicalActionSet(ActionSet actions);

struct ScenarioElement {
  int event = 0;
  ActionSet outputs;

  auto operator<=>(const ScenarioElement&) const = default;
};

/// A test scenario: the FSM must reproduce the element sequence exactly.
using Scenario = std::vector<ScenarioElement>;

/// Deterministic Mealy-style machine with output action sets. States are
/// 1-based and state 1 is always the initial state. Transitions may be
/// partial (incomplete FSM).
class Fsm {
 public:
  static constexpr int kInitialState = 1;

  struct Transition {
    int dst = 0;
    ActionSet outputs;

    bool operator==(const Transition&) const = default;
  };

  Fsm(int stateCount, int eventCount);

  int stateCount() const { return stateCount_; }
  int eventCount() const { return eventCount_; }

  /// Installs (overwriting if present) the transition for (src, event).
  void setTransition(int src, int event, int dst, ActionSet outputs);
  void clearTransition(int src, int event);

  const std::optional<Transition>& transition(int src, int event) const;

  int transitionCount() const;
  int outDegree(int state) const;
  bool isComplete() const;
  /// True when every state has at least one outgoing transition (the C_exists
  /// requirement; LTL over infinite paths is vague without it).
  bool allStatesHaveOutgoing() const;
  /// True when every state is reachable from the initial state.
  bool allStatesReachable() const;

  bool operator==(const Fsm&) const = default;

 private:
  int stateCount_;
  int eventCount_;
  // table_[src - 1][event]
  std::vector<std::vector<std::optional<Transition>>> table_;
};

struct RunResult {
  bool accepted = false;
  int rejectPosition = 0;  // 1-based position of the first failing element
};

/// Replays a scenario from the initial state. Rejects at the first element
/// whose transition is missing or whose output set differs.
RunResult runScenario(const Fsm& fsm, const Scenario& scenario);

}  // namespace fsmmint
