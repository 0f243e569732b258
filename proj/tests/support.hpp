#pragma once

// Shared test helpers: fixtures from the worked examples, a direct semantic
// evaluator for LTL over ultimately-periodic words (the independent oracle
// the checker tests compare against), and small conveniences.

#include <set>
#include <vector>

#include "fsmmint/bmc.hpp"
#include "fsmmint/fsm.hpp"
#include "fsmmint/ltl.hpp"
#include "fsmmint/sat_problem.hpp"

namespace testsupport {

using namespace fsmmint;

inline Alphabet alphabet22() { return Alphabet({"e1", "e2"}, {"z1", "z2"}); }

/// The four scenarios of the worked scenario-tree example (9 nodes).
inline std::vector<Scenario> treeExampleScenarios() {
  auto el = [](int e, std::initializer_list<int> as) {
    return ScenarioElement{e, ActionSet(as)};
  };
  return {
      {el(0, {0}), el(0, {0}), el(0, {0})},
      {el(0, {0}), el(0, {0}), el(1, {0})},
      {el(0, {0}), el(1, {0})},
      {el(1, {0}), el(1, {1}), el(0, {0})},
  };
}

/// The 2-state machine consistent with those scenarios:
/// 1 -e1/z1-> 1, 1 -e2/z1-> 2, 2 -e2/z2-> 1.
inline Fsm twoStateExampleFsm() {
  Fsm fsm(2, 2);
  fsm.setTransition(1, 0, 1, {0});
  fsm.setTransition(1, 1, 2, {0});
  fsm.setTransition(2, 1, 1, {1});
  return fsm;
}

/// Ultimately-periodic word prefix . cycle^omega of (event, outputs) elements.
struct LassoWord {
  std::vector<ScenarioElement> prefix;
  std::vector<ScenarioElement> cycle;  // non-empty

  int positions() const { return static_cast<int>(prefix.size() + cycle.size()); }
  int successor(int i) const {
    return i + 1 < positions() ? i + 1 : static_cast<int>(prefix.size());
  }
  const ScenarioElement& at(int i) const {
    return i < static_cast<int>(prefix.size()) ? prefix[i]
                                               : cycle[i - prefix.size()];
  }
};

/// Direct semantic evaluation of an LTL formula at a position of the word,
/// by walking the successor chain (at most |positions| distinct states).
inline bool evalLasso(const LtlPtr& f, const LassoWord& word, int pos = 0) {
  const int n = word.positions();
  auto hasAction = [&](int i, int a) {
    const auto& out = word.at(i).outputs;
    return std::find(out.begin(), out.end(), a) != out.end();
  };
  switch (f->kind()) {
    case LtlKind::True: return true;
    case LtlKind::False: return false;
    case LtlKind::WasEvent: return word.at(pos).event == f->symbol();
    case LtlKind::WasAction: return hasAction(pos, f->symbol());
    case LtlKind::Not: return !evalLasso(f->left(), word, pos);
    case LtlKind::And:
      return evalLasso(f->left(), word, pos) && evalLasso(f->right(), word, pos);
    case LtlKind::Or:
      return evalLasso(f->left(), word, pos) || evalLasso(f->right(), word, pos);
    case LtlKind::Implies:
      return !evalLasso(f->left(), word, pos) || evalLasso(f->right(), word, pos);
    case LtlKind::Next: return evalLasso(f->left(), word, word.successor(pos));
    case LtlKind::Globally: {
      int i = pos;
      for (int steps = 0; steps <= n; ++steps) {
        if (!evalLasso(f->left(), word, i)) return false;
        i = word.successor(i);
      }
      return true;
    }
    case LtlKind::Finally: {
      int i = pos;
      for (int steps = 0; steps <= n; ++steps) {
        if (evalLasso(f->left(), word, i)) return true;
        i = word.successor(i);
      }
      return false;
    }
    case LtlKind::Until: {
      int i = pos;
      for (int steps = 0; steps <= n; ++steps) {
        if (evalLasso(f->right(), word, i)) return true;
        if (!evalLasso(f->left(), word, i)) return false;
        i = word.successor(i);
      }
      return false;
    }
    case LtlKind::Release: {
      int i = pos;
      for (int steps = 0; steps <= n; ++steps) {
        if (!evalLasso(f->right(), word, i)) return false;
        if (evalLasso(f->left(), word, i)) return true;
        i = word.successor(i);
      }
      return true;  // right side held forever around the loop
    }
  }
  return false;
}

/// Replays prefix + cycle elements against an FSM from the initial state;
/// true when every step's transition exists with exactly these outputs and
/// the cycle closes on the same FSM state (checked by running it twice).
inline bool replayLasso(const Fsm& fsm, const std::vector<ScenarioElement>& prefix,
                        const std::vector<ScenarioElement>& cycle) {
  int state = Fsm::kInitialState;
  auto step = [&](const ScenarioElement& el) {
    const auto& t = fsm.transition(state, el.event);
    if (!t || t->outputs != el.outputs) return false;
    state = t->dst;
    return true;
  };
  for (const auto& el : prefix)
    if (!step(el)) return false;
  int cycleStart = state;
  for (const auto& el : cycle)
    if (!step(el)) return false;
  if (state != cycleStart) return false;
  for (const auto& el : cycle)
    if (!step(el)) return false;
  return state == cycleStart;
}

/// Canonical structural signature of a circuit: And/Or children compare as
/// multisets, Implies/Iff keep operand order, literals print by id.
inline std::string circuitSignature(const CircuitStore& store, int id) {
  const auto& n = store.node(id);
  switch (n.op) {
    case CircuitStore::Op::True: return "T";
    case CircuitStore::Op::False: return "F";
    case CircuitStore::Op::Lit: return "L" + std::to_string(n.lit);
    case CircuitStore::Op::Not: return "!(" + circuitSignature(store, n.kids[0]) + ")";
    case CircuitStore::Op::Implies:
      return ">(" + circuitSignature(store, n.kids[0]) + "," +
             circuitSignature(store, n.kids[1]) + ")";
    case CircuitStore::Op::Iff:
      return "=(" + circuitSignature(store, n.kids[0]) + "," +
             circuitSignature(store, n.kids[1]) + ")";
    case CircuitStore::Op::And:
    case CircuitStore::Op::Or: {
      std::vector<std::string> kids;
      for (int k : n.kids) kids.push_back(circuitSignature(store, k));
      std::sort(kids.begin(), kids.end());
      std::string out = n.op == CircuitStore::Op::And ? "&(" : "|(";
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += ",";
        out += kids[i];
      }
      return out + ")";
    }
  }
  return "?";
}

inline std::vector<std::string> circuitChildSignatures(const CircuitStore& store,
                                                       int id) {
  std::vector<std::string> out;
  for (int k : store.node(id).kids) out.push_back(circuitSignature(store, k));
  std::sort(out.begin(), out.end());
  return out;
}

/// Bounded witness check for a FIXED machine: is [[M]]_k && W satisfiable
/// with the machine's y/z pinned as units? This is the [[M, f]]_k instance of
/// bounded model checking, used to cross-validate the explicit checker.
inline bool bmcWitnessSat(const Fsm& fsm, const Alphabet& alphabet, const LtlPtr& nnf,
                          int k) {
  VarPool pool;
  CircuitStore store;
  BmcBuilder builder(store, pool, alphabet, fsm.stateCount(), CompletenessMode::AtLeastOne);
  BmcPieces pieces = builder.buildPathValidity(k);
  int witness = builder.buildWitness(nnf, k);

  std::vector<int> parts{pieces.sigmaInit, pieces.pSigma, pieces.pEps, pieces.pY};
  if (pieces.pYk) parts.push_back(*pieces.pYk);
  parts.push_back(pieces.pZ);
  parts.push_back(witness);
  int whole = store.conjunction(std::move(parts));

  CnfProblem problem;
  for (int s = 1; s <= fsm.stateCount(); ++s) {
    for (int e = 0; e < fsm.eventCount(); ++e) {
      const auto& t = fsm.transition(s, e);
      for (int d = 1; d <= fsm.stateCount(); ++d)
        problem.add({(t && t->dst == d) ? pool.y(s, d, e) : -pool.y(s, d, e)});
      if (t)
        for (int a = 0; a < alphabet.actionCount(); ++a) {
          bool inSet = std::binary_search(t->outputs.begin(), t->outputs.end(), a);
          problem.add({inSet ? pool.z(s, a, e) : -pool.z(s, a, e)});
        }
    }
  }
  std::vector<Clause> defining;
  int root = store.tseitin(whole, pool, defining);
  problem.addAll(defining);
  problem.add({root});
  problem.ensureVarCount(pool.count());
  return problem.solve().status == SatStatus::Sat;
}

}  // namespace testsupport
