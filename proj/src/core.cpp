#include <algorithm>
#include <deque>
#include <map>

#include "fsmmint/errors.hpp"
#include "fsmmint/kripke.hpp"
#include "fsmmint/negative_tree.hpp"
#include "fsmmint/scenario_tree.hpp"

namespace fsmmint {

// ---------------------------------------------------------------------------
// Alphabet
// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> events, std::vector<std::string> actions)
    : events_(std::move(events)), actions_(std::move(actions)) {
  if (events_.empty()) throw IoError("alphabet needs at least one event");
  for (int i = 0; i < static_cast<int>(events_.size()); ++i) {
    if (!eventIds_.emplace(events_[i], i).second)
      throw IoError("duplicate event symbol: " + events_[i]);
  }
  for (int i = 0; i < static_cast<int>(actions_.size()); ++i) {
    if (!actionIds_.emplace(actions_[i], i).second)
      throw IoError("duplicate action symbol: " + actions_[i]);
  }
}

std::optional<int> Alphabet::eventId(std::string_view name) const {
  auto it = eventIds_.find(std::string(name));
  if (it == eventIds_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Alphabet::actionId(std::string_view name) const {
  auto it = actionIds_.find(std::string(name));
  if (it == actionIds_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Fsm
// ---------------------------------------------------------------------------

ActionSet canonicalActionSet(ActionSet actions) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  return actions;
}

Fsm::Fsm(int stateCount, int eventCount)
    : stateCount_(stateCount), eventCount_(eventCount) {
  if (stateCount_ < 1) throw IoError("FSM needs at least one state");
  table_.assign(stateCount_, std::vector<std::optional<Transition>>(eventCount_));
}

void Fsm::setTransition(int src, int event, int dst, ActionSet outputs) {
  table_.at(src - 1).at(event) =
      Transition{dst, canonicalActionSet(std::move(outputs))};
}

void Fsm::clearTransition(int src, int event) {
  table_.at(src - 1).at(event).reset();
}

const std::optional<Fsm::Transition>& Fsm::transition(int src, int event) const {
  return table_.at(src - 1).at(event);
}

int Fsm::transitionCount() const {
  int n = 0;
  for (const auto& row : table_)
    for (const auto& t : row)
      if (t) ++n;
  return n;
}

int Fsm::outDegree(int state) const {
  int n = 0;
  for (const auto& t : table_.at(state - 1))
    if (t) ++n;
  return n;
}

bool Fsm::isComplete() const {
  return transitionCount() == stateCount_ * eventCount_;
}

bool Fsm::allStatesHaveOutgoing() const {
  for (int s = 1; s <= stateCount_; ++s)
    if (outDegree(s) == 0) return false;
  return true;
}

bool Fsm::allStatesReachable() const {
  std::vector<char> seen(stateCount_ + 1, 0);
  std::deque<int> queue{kInitialState};
  seen[kInitialState] = 1;
  int count = 1;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int e = 0; e < eventCount_; ++e) {
      const auto& t = transition(s, e);
      if (t && !seen[t->dst]) {
        seen[t->dst] = 1;
        ++count;
        queue.push_back(t->dst);
      }
    }
  }
  return count == stateCount_;
}

RunResult runScenario(const Fsm& fsm, const Scenario& scenario) {
  int state = Fsm::kInitialState;
  for (int i = 0; i < static_cast<int>(scenario.size()); ++i) {
    const auto& t = fsm.transition(state, scenario[i].event);
    if (!t || t->outputs != scenario[i].outputs) return {false, i + 1};
    state = t->dst;
  }
  return {true, 0};
}

// ---------------------------------------------------------------------------
// Kripke structure
// ---------------------------------------------------------------------------

bool KripkeStructure::hasAction(int state, int action) const {
  const auto& out = states.at(state).outputs;
  return std::binary_search(out.begin(), out.end(), action);
}

namespace {

KripkeStructure buildKripke(const Fsm& fsm, bool allowDeadEnds) {
  if (!allowDeadEnds && !fsm.allStatesHaveOutgoing())
    throw DeadStateError("FSM has a state with no outgoing transition");

  KripkeStructure k;
  // index of the first Kripke state per FSM source state
  std::vector<std::vector<int>> bySrc(fsm.stateCount() + 1);
  for (int s = 1; s <= fsm.stateCount(); ++s) {
    for (int e = 0; e < fsm.eventCount(); ++e) {
      const auto& t = fsm.transition(s, e);
      if (!t) continue;
      bySrc[s].push_back(static_cast<int>(k.states.size()));
      k.states.push_back({s, e, t->dst, t->outputs});
    }
  }
  k.succ.resize(k.states.size());
  for (int q = 0; q < static_cast<int>(k.states.size()); ++q)
    k.succ[q] = bySrc[k.states[q].dst];
  k.initial = bySrc[Fsm::kInitialState];
  return k;
}

}  // namespace

KripkeStructure fsmToKripke(const Fsm& fsm) { return buildKripke(fsm, false); }

KripkeStructure fsmToKripkePartial(const Fsm& fsm) {
  return buildKripke(fsm, true);
}

// ---------------------------------------------------------------------------
// Scenario tree
// ---------------------------------------------------------------------------

ScenarioTree::ScenarioTree() : edges_(2), parent_(2, 0) {}

const ScenarioTree::Edge* ScenarioTree::findEdge(int node, int event) const {
  for (const auto& e : edges_.at(node))
    if (e.event == event) return &e;
  return nullptr;
}

int ScenarioTree::extend(int node, const ScenarioElement& element) {
  for (const auto& e : edges_.at(node)) {
    if (e.event != element.event) continue;
    if (e.outputs != element.outputs)
      throw DeterminismConflictError(
          "scenarios demand two output sets for one (node, event)");
    return e.child;
  }
  int child = static_cast<int>(edges_.size());
  edges_.push_back({});
  parent_.push_back(node);
  edges_[node].push_back({element.event, element.outputs, child});
  return child;
}

std::vector<int> ScenarioTree::bfsOrder() const {
  std::vector<int> order;
  order.reserve(nodeCount());
  std::deque<int> queue{1};
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    order.push_back(node);
    auto sorted = edges_[node];
    std::sort(sorted.begin(), sorted.end(),
              [](const Edge& a, const Edge& b) { return a.event < b.event; });
    for (const auto& e : sorted) queue.push_back(e.child);
  }
  return order;
}

ScenarioTree buildScenarioTree(const std::vector<Scenario>& scenarios) {
  ScenarioTree tree;
  for (const auto& sc : scenarios) {
    int node = 1;
    for (const auto& element : sc) node = tree.extend(node, element);
  }
  return tree;
}

std::set<std::pair<int, int>> inconsistentPairs(const ScenarioTree& tree) {
  const int n = tree.nodeCount();
  std::set<std::pair<int, int>> result;
  std::deque<std::pair<int, int>> worklist;

  auto mark = [&](int u, int v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    if (result.emplace(u, v).second) worklist.emplace_back(u, v);
  };

  // Direct conflicts: same event, different outputs.
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      for (const auto& eu : tree.edges(u)) {
        const auto* ev = tree.findEdge(v, eu.event);
        if (ev && ev->outputs != eu.outputs) {
          mark(u, v);
          break;
        }
      }
    }
  }

  // Propagate upwards: equal-labeled edges into an inconsistent pair make the
  // parents inconsistent. Each node has a unique incoming edge, so we only
  // need to look at the parents of a newly marked pair.
  auto incoming = [&](int node) -> const ScenarioTree::Edge* {
    int p = tree.parent(node);
    if (p == 0) return nullptr;
    for (const auto& e : tree.edges(p))
      if (e.child == node) return &e;
    return nullptr;
  };

  while (!worklist.empty()) {
    auto [u, v] = worklist.front();
    worklist.pop_front();
    const auto* eu = incoming(u);
    const auto* ev = incoming(v);
    if (eu && ev && eu->event == ev->event && eu->outputs == ev->outputs)
      mark(tree.parent(u), tree.parent(v));
  }
  return result;
}

std::vector<int> greedyMaxClique(const std::set<std::pair<int, int>>& pairs,
                                 int nodeCount) {
  if (nodeCount <= 0) return {};

  std::vector<std::vector<char>> adj(nodeCount + 1,
                                     std::vector<char>(nodeCount + 1, 0));
  std::vector<int> degree(nodeCount + 1, 0);
  for (const auto& [u, v] : pairs) {
    adj[u][v] = adj[v][u] = 1;
    ++degree[u];
    ++degree[v];
  }

  std::vector<int> order(nodeCount);
  for (int i = 0; i < nodeCount; ++i) order[i] = i + 1;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return degree[a] > degree[b]; });

  std::vector<int> clique;
  for (int candidate : order) {
    bool connected = true;
    for (int member : clique) {
      if (!adj[candidate][member]) {
        connected = false;
        break;
      }
    }
    if (connected) clique.push_back(candidate);
  }
  std::sort(clique.begin(), clique.end());
  return clique;
}

// ---------------------------------------------------------------------------
// Negative scenario tree
// ---------------------------------------------------------------------------

NegativeScenarioTree::NegativeScenarioTree()
    : edges_(2), parent_(2, 0), terminal_(2, 0) {}

const NegativeScenarioTree::Edge& NegativeScenarioTree::incomingEdge(int node) const {
  int p = parent_.at(node);
  for (const auto& e : edges_.at(p))
    if (e.child == node) return e;
  throw std::logic_error("negative tree node has no incoming edge");
}

int NegativeScenarioTree::walk(int node, const ScenarioElement& element) {
  for (const auto& e : edges_.at(node))
    if (e.event == element.event && e.outputs == element.outputs) return e.child;
  int child = static_cast<int>(edges_.size());
  edges_.push_back({});
  parent_.push_back(node);
  terminal_.push_back(0);
  edges_[node].push_back({element.event, element.outputs, child});
  return child;
}

bool NegativeScenarioTree::addCounterexample(const Counterexample& cex) {
  int node = 1;
  for (const auto& element : cex.prefix) node = walk(node, element);

  if (cex.kind == Counterexample::Kind::Finite) {
    if (terminal_[node]) return false;
    terminal_[node] = 1;
    terminalMarks_.push_back(node);
    return true;
  }

  int cycleStart = node;
  for (const auto& element : cex.cycle) node = walk(node, element);
  std::pair<int, int> backEdge{node, cycleStart};
  if (std::find(backEdges_.begin(), backEdges_.end(), backEdge) != backEdges_.end())
    return false;
  backEdges_.push_back(backEdge);
  return true;
}

}  // namespace fsmmint
