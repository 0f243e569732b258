#include "fsmmint/verifier.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "fsmmint/errors.hpp"

namespace fsmmint {

// ---------------------------------------------------------------------------
// Tableau construction (GPVW)
// ---------------------------------------------------------------------------

namespace {

/// Formula table with structural hash-consing so tableau sets can be sets of
/// small integers.
class FormulaIndex {
 public:
  int intern(const LtlPtr& f) {
    int left = f->left() ? intern(f->left()) : -1;
    int right = f->right() ? intern(f->right()) : -1;
    auto key = std::make_tuple(f->kind(), f->symbol(), left, right);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({f->kind(), f->symbol(), left, right});
    ids_.emplace(key, id);
    return id;
  }

  LtlKind kind(int id) const { return nodes_[id].kind; }
  int symbol(int id) const { return nodes_[id].symbol; }
  int left(int id) const { return nodes_[id].left; }
  int right(int id) const { return nodes_[id].right; }

  int negatedAtom(int atomId) {
    auto key = std::make_tuple(LtlKind::Not, -1, atomId, -1);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({LtlKind::Not, -1, atomId, -1});
    ids_.emplace(key, id);
    return id;
  }

 private:
  struct Node {
    LtlKind kind;
    int symbol;
    int left, right;
  };
  std::vector<Node> nodes_;
  std::map<std::tuple<LtlKind, int, int, int>, int> ids_;
};

struct TableauNode {
  std::set<int> news, old, next;
  std::set<int> incoming;  // indices into the finished node list; -1 = init
};

struct Tableau {
  FormulaIndex index;
  std::vector<TableauNode> nodes;  // finished nodes

  int findEquivalent(const TableauNode& n) const {
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (nodes[i].old == n.old && nodes[i].next == n.next) return i;
    return -1;
  }

  void expand(TableauNode node);
};

void Tableau::expand(TableauNode node) {
  if (node.news.empty()) {
    int existing = findEquivalent(node);
    if (existing >= 0) {
      nodes[existing].incoming.insert(node.incoming.begin(), node.incoming.end());
      return;
    }
    int id = static_cast<int>(nodes.size());
    nodes.push_back(node);
    TableauNode successor;
    successor.news = nodes[id].next;
    successor.incoming = {id};
    expand(std::move(successor));
    return;
  }

  int f = *node.news.begin();
  node.news.erase(node.news.begin());
  const LtlKind kind = index.kind(f);

  switch (kind) {
    case LtlKind::True:
      expand(std::move(node));  // no obligation recorded
      return;
    case LtlKind::False:
      return;  // contradiction; drop this node
    case LtlKind::WasEvent:
    case LtlKind::WasAction: {
      if (node.old.count(index.negatedAtom(f))) return;
      node.old.insert(f);
      expand(std::move(node));
      return;
    }
    case LtlKind::Not: {  // NNF: argument is an atom
      if (node.old.count(index.left(f))) return;
      node.old.insert(f);
      expand(std::move(node));
      return;
    }
    case LtlKind::And: {
      if (!node.old.count(index.left(f))) node.news.insert(index.left(f));
      if (!node.old.count(index.right(f))) node.news.insert(index.right(f));
      node.old.insert(f);
      expand(std::move(node));
      return;
    }
    case LtlKind::Or: {
      node.old.insert(f);
      TableauNode branch = node;
      if (!branch.old.count(index.left(f))) branch.news.insert(index.left(f));
      expand(std::move(branch));
      if (!node.old.count(index.right(f))) node.news.insert(index.right(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Next: {
      node.old.insert(f);
      node.next.insert(index.left(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Globally: {
      node.old.insert(f);
      node.next.insert(f);
      if (!node.old.count(index.left(f))) node.news.insert(index.left(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Finally: {
      node.old.insert(f);
      TableauNode wait = node;
      wait.next.insert(f);
      expand(std::move(wait));
      if (!node.old.count(index.left(f))) node.news.insert(index.left(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Until: {
      node.old.insert(f);
      TableauNode wait = node;
      if (!wait.old.count(index.left(f))) wait.news.insert(index.left(f));
      wait.next.insert(f);
      expand(std::move(wait));
      if (!node.old.count(index.right(f))) node.news.insert(index.right(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Release: {
      node.old.insert(f);
      TableauNode wait = node;
      if (!wait.old.count(index.right(f))) wait.news.insert(index.right(f));
      wait.next.insert(f);
      expand(std::move(wait));
      if (!node.old.count(index.left(f))) node.news.insert(index.left(f));
      if (!node.old.count(index.right(f))) node.news.insert(index.right(f));
      expand(std::move(node));
      return;
    }
    case LtlKind::Implies:
      throw std::logic_error("tableau expects negation normal form");
  }
}

}  // namespace

bool BuchiAutomaton::matches(int state, int event, const ActionSet& outputs) const {
  const State& s = states[state];
  for (int e : s.requiredEvents)
    if (event != e) return false;
  for (int e : s.forbiddenEvents)
    if (event == e) return false;
  for (int a : s.requiredActions)
    if (!std::binary_search(outputs.begin(), outputs.end(), a)) return false;
  for (int a : s.forbiddenActions)
    if (std::binary_search(outputs.begin(), outputs.end(), a)) return false;
  return true;
}

BuchiAutomaton ltlToBuchi(const LtlPtr& nnf) {
  Tableau tableau;
  TableauNode root;
  root.news.insert(tableau.index.intern(nnf));
  root.incoming.insert(-1);
  tableau.expand(std::move(root));

  const auto& ix = tableau.index;
  const int n = static_cast<int>(tableau.nodes.size());

  // Generalized acceptance: one set per Until/Finally subformula appearing in
  // some node's old set.
  std::set<int> untils;
  for (const auto& node : tableau.nodes)
    for (int f : node.old)
      if (ix.kind(f) == LtlKind::Until || ix.kind(f) == LtlKind::Finally)
        untils.insert(f);

  std::vector<std::vector<char>> acceptanceSets;
  for (int u : untils) {
    int fulfilled = ix.kind(u) == LtlKind::Until ? ix.right(u) : ix.left(u);
    std::vector<char> inSet(n, 0);
    for (int i = 0; i < n; ++i) {
      const auto& old = tableau.nodes[i].old;
      inSet[i] = !old.count(u) || old.count(fulfilled);
    }
    acceptanceSets.push_back(std::move(inSet));
  }
  const int m = static_cast<int>(acceptanceSets.size());

  auto fillState = [&](int i) {
    BuchiAutomaton::State s;
    const auto& node = tableau.nodes[i];
    bool hasAtoms = false;
    for (int f : node.old) {
      if (ix.kind(f) == LtlKind::WasEvent) {
        s.requiredEvents.push_back(ix.symbol(f));
        hasAtoms = true;
      } else if (ix.kind(f) == LtlKind::WasAction) {
        s.requiredActions.push_back(ix.symbol(f));
        hasAtoms = true;
      } else if (ix.kind(f) == LtlKind::Not) {
        int atom = ix.left(f);
        if (ix.kind(atom) == LtlKind::WasEvent)
          s.forbiddenEvents.push_back(ix.symbol(atom));
        else
          s.forbiddenActions.push_back(ix.symbol(atom));
        hasAtoms = true;
      }
    }
    s.acceptAll = !hasAtoms && node.old.empty() && node.next.empty();
    return s;
  };

  BuchiAutomaton automaton;
  if (m <= 1) {
    for (int i = 0; i < n; ++i) {
      auto s = fillState(i);
      s.accepting = m == 0 || acceptanceSets[0][i];
      automaton.states.push_back(std::move(s));
    }
    automaton.succ.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int from : tableau.nodes[i].incoming) {
        if (from == -1)
          automaton.initial.push_back(i);
        else
          automaton.succ[from].push_back(i);
      }
    }
    return automaton;
  }

  // Counter-product degeneralization: state (q, c) waits for acceptance set
  // c; the counter advances on leaving a member of set c and the automaton
  // accepts when the last set wraps around.
  auto degId = [&](int q, int c) { return q * m + c; };
  automaton.states.resize(n * m);
  automaton.succ.resize(n * m);
  for (int q = 0; q < n; ++q) {
    auto base = fillState(q);
    for (int c = 0; c < m; ++c) {
      auto s = base;
      s.accepting = c == m - 1 && acceptanceSets[m - 1][q];
      automaton.states[degId(q, c)] = std::move(s);
    }
  }
  for (int q = 0; q < n; ++q) {
    for (int from : tableau.nodes[q].incoming) {
      if (from == -1) {
        automaton.initial.push_back(degId(q, 0));
        continue;
      }
      for (int c = 0; c < m; ++c) {
        int nextCounter;
        if (c == m - 1 && acceptanceSets[m - 1][from])
          nextCounter = 0;
        else
          nextCounter = acceptanceSets[c][from] ? c + 1 : c;
        if (nextCounter >= m) nextCounter = m - 1;
        automaton.succ[degId(from, c)].push_back(degId(q, nextCounter));
      }
    }
  }
  return automaton;
}

// ---------------------------------------------------------------------------
// Product search
// ---------------------------------------------------------------------------

namespace {

struct ProductSearch {
  const KripkeStructure& kripke;
  const BuchiAutomaton& buchi;
  int buchiCount;

  int id(int kr, int b) const { return kr * buchiCount + b; }

  std::vector<int> dist, parent;

  void bfsFromInitial() {
    const int total = static_cast<int>(kripke.states.size()) * buchiCount;
    dist.assign(total, -1);
    parent.assign(total, -1);
    std::deque<int> queue;
    for (int kr : kripke.initial) {
      for (int b : buchi.initial) {
        if (!buchi.matches(b, kripke.states[kr].event, kripke.states[kr].outputs))
          continue;
        int p = id(kr, b);
        if (dist[p] != -1) continue;
        dist[p] = 0;
        queue.push_back(p);
      }
    }
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      int kr = p / buchiCount, b = p % buchiCount;
      for (int kr2 : kripke.succ[kr]) {
        for (int b2 : buchi.succ[b]) {
          if (!buchi.matches(b2, kripke.states[kr2].event, kripke.states[kr2].outputs))
            continue;
          int q = id(kr2, b2);
          if (dist[q] != -1) continue;
          dist[q] = dist[p] + 1;
          parent[q] = p;
          queue.push_back(q);
        }
      }
    }
  }

  /// Shortest cycle through `target`, as the list of product states
  /// q_0 = target, q_1, ..., q_{c-1} (the cycle re-enters target afterwards).
  /// Empty when no cycle exists.
  std::vector<int> shortestCycle(int target) const {
    const int total = static_cast<int>(kripke.states.size()) * buchiCount;
    std::vector<int> d(total, -1), par(total, -1);
    std::deque<int> queue{target};
    d[target] = 0;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      int kr = p / buchiCount, b = p % buchiCount;
      for (int kr2 : kripke.succ[kr]) {
        for (int b2 : buchi.succ[b]) {
          if (!buchi.matches(b2, kripke.states[kr2].event, kripke.states[kr2].outputs))
            continue;
          int q = id(kr2, b2);
          if (q == target) {
            std::vector<int> cycle;
            for (int cur = p; cur != -1; cur = par[cur]) cycle.push_back(cur);
            std::reverse(cycle.begin(), cycle.end());
            return cycle;  // starts at target (par[target] == -1)
          }
          if (d[q] != -1) continue;
          d[q] = d[p] + 1;
          par[q] = p;
          queue.push_back(q);
        }
      }
    }
    return {};
  }

  std::vector<int> pathFromInitial(int target) const {
    std::vector<int> path;
    for (int cur = target; cur != -1; cur = parent[cur]) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
  }

  ScenarioElement element(int productState) const {
    const KripkeState& ks = kripke.states[productState / buchiCount];
    return {ks.event, ks.outputs};
  }
};

Verdict checkOne(const KripkeStructure& kripke, const BuchiAutomaton& buchi) {
  if (buchi.states.empty() || kripke.states.empty()) return {true, std::nullopt};

  ProductSearch search{kripke, buchi, static_cast<int>(buchi.states.size()), {}, {}};
  search.bfsFromInitial();

  // A reachable acceptAll state discharges every obligation: the consumed
  // elements form a bad prefix and every continuation violates the formula.
  int bestFinite = -1;
  for (int p = 0; p < static_cast<int>(search.dist.size()); ++p) {
    if (search.dist[p] == -1 || !buchi.states[p % search.buchiCount].acceptAll)
      continue;
    if (bestFinite == -1 || search.dist[p] < search.dist[bestFinite]) bestFinite = p;
  }
  if (bestFinite != -1) {
    auto path = search.pathFromInitial(bestFinite);
    Counterexample cex;
    cex.kind = Counterexample::Kind::Finite;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      cex.prefix.push_back(search.element(path[i]));
    return {false, std::move(cex)};
  }

  // Layered search for the shortest accepting lasso: shortest prefix to each
  // accepting state, then its shortest cycle; minimize the total.
  int bestState = -1;
  std::vector<int> bestCycle;
  long bestTotal = -1;
  for (int p = 0; p < static_cast<int>(search.dist.size()); ++p) {
    if (search.dist[p] == -1 || !buchi.states[p % search.buchiCount].accepting)
      continue;
    std::vector<int> cycle = search.shortestCycle(p);
    if (cycle.empty()) continue;
    long total = search.dist[p] + static_cast<long>(cycle.size());
    if (bestTotal == -1 || total < bestTotal) {
      bestTotal = total;
      bestState = p;
      bestCycle = std::move(cycle);
    }
  }
  if (bestState == -1) return {true, std::nullopt};

  auto path = search.pathFromInitial(bestState);
  Counterexample cex;
  cex.kind = Counterexample::Kind::Looping;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    cex.prefix.push_back(search.element(path[i]));
  for (int p : bestCycle) cex.cycle.push_back(search.element(p));
  return {false, std::move(cex)};
}

}  // namespace

Verdict checkAgainstNegation(const KripkeStructure& kripke,
                             const BuchiAutomaton& negated) {
  return checkOne(kripke, negated);
}

std::vector<Verdict> modelCheck(const Fsm& fsm, const std::vector<LtlPtr>& formulas) {
  KripkeStructure kripke = fsmToKripke(fsm);
  std::vector<Verdict> verdicts;
  verdicts.reserve(formulas.size());
  for (const auto& f : formulas)
    verdicts.push_back(checkOne(kripke, ltlToBuchi(toNnf(ltl::negation(f)))));
  return verdicts;
}

std::vector<Verdict> modelCheckPartial(const Fsm& fsm,
                                       const std::vector<LtlPtr>& formulas) {
  KripkeStructure kripke = fsmToKripkePartial(fsm);
  std::vector<Verdict> verdicts;
  verdicts.reserve(formulas.size());
  for (const auto& f : formulas)
    verdicts.push_back(checkOne(kripke, ltlToBuchi(toNnf(ltl::negation(f)))));
  return verdicts;
}

}  // namespace fsmmint
