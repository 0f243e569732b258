#include "fsmmint/solver.hpp"

#include <algorithm>
#include <cmath>

namespace fsmmint {

namespace {

// Luby restart sequence: 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t x) {
  std::uint64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) / 2;
    --seq;
    x %= size;
  }
  return 1ull << seq;
}

constexpr double kVarDecay = 0.95;
constexpr int kRestartBase = 100;

}  // namespace

void SatSolver::ensureVarCount(int n) {
  while (varCount() < n) {
    assign_.push_back(kUndef);
    polarity_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    order_.push({0.0, varCount()});
  }
}

void SatSolver::attach(int clauseIdx) {
  const Clause& c = clauses_[clauseIdx];
  watches_[litIndex(-c[0])].push_back({clauseIdx, c[1]});
  watches_[litIndex(-c[1])].push_back({clauseIdx, c[0]});
}

bool SatSolver::addClause(const Clause& clause) {
  // All additions happen at level 0.
  cancelUntil(0);
  if (!ok_) return false;

  int maxVar = 0;
  for (int lit : clause) maxVar = std::max(maxVar, std::abs(lit));
  ensureVarCount(maxVar);
  if (watches_.size() < 2 * static_cast<std::size_t>(varCount()) + 2)
    watches_.resize(2 * varCount() + 2);

  // Simplify against level-0 assignments; drop duplicates and tautologies.
  Clause c(clause);
  std::sort(c.begin(), c.end(), [](int a, int b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  Clause simplified;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i + 1 < c.size() && c[i] == -c[i + 1]) return true;  // tautology
    if (i > 0 && c[i] == c[i - 1]) continue;
    std::uint8_t v = litValue(c[i]);
    if (v == kTrue) return true;  // already satisfied at level 0
    if (v == kFalse) continue;
    simplified.push_back(c[i]);
  }

  if (simplified.empty()) {
    ok_ = false;
    return false;
  }
  if (simplified.size() == 1) {
    uncheckedEnqueue(simplified[0], -1);
    if (propagate() != -1) ok_ = false;
    return ok_;
  }
  clauses_.push_back(std::move(simplified));
  attach(static_cast<int>(clauses_.size()) - 1);
  return true;
}

void SatSolver::uncheckedEnqueue(int lit, int reason) {
  int v = std::abs(lit);
  assign_[v] = lit > 0 ? kTrue : kFalse;
  level_[v] = decisionLevel();
  reason_[v] = reason;
  trail_.push_back(lit);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int lit = trail_[qhead_++];  // lit became true; clauses watching -lit wake
    std::vector<Watcher>& ws = watches_[litIndex(lit)];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      Watcher w = ws[i];
      if (litValue(w.blocker) == kTrue) {
        ws[keep++] = w;
        continue;
      }
      Clause& c = clauses_[w.clause];
      int falseLit = -lit;
      if (c[0] == falseLit) std::swap(c[0], c[1]);
      // c[1] == falseLit now
      if (litValue(c[0]) == kTrue) {
        ws[keep++] = {w.clause, c[0]};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (litValue(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[litIndex(-c[1])].push_back({w.clause, c[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      if (litValue(c[0]) == kFalse) {
        // conflict; keep remaining watchers
        for (std::size_t k = i; k < ws.size(); ++k) ws[keep++] = ws[k];
        ws.resize(keep);
        qhead_ = trail_.size();
        return w.clause;
      }
      ws[keep++] = w;
      uncheckedEnqueue(c[0], w.clause);
    }
    ws.resize(keep);
  }
  return -1;
}

void SatSolver::bumpVar(int var) {
  activity_[var] += varInc_;
  if (activity_[var] > 1e100) {
    for (int v = 1; v <= varCount(); ++v) activity_[v] *= 1e-100;
    varInc_ *= 1e-100;
    // rebuild the heap with rescaled activities
    std::priority_queue<OrderEntry> fresh;
    for (int v = 1; v <= varCount(); ++v) fresh.push({activity_[v], v});
    order_ = std::move(fresh);
    return;
  }
  order_.push({activity_[var], var});
}

void SatSolver::decayActivities() { varInc_ /= kVarDecay; }

bool SatSolver::literalRedundant(int lit) const {
  int v = std::abs(lit);
  int r = reason_[v];
  if (r < 0) return false;
  for (int q : clauses_[r]) {
    int qv = std::abs(q);
    if (qv == v) continue;
    if (!seen_[qv] && level_[qv] > 0) return false;
  }
  return true;
}

void SatSolver::analyze(int conflict, Clause& learnt, int& backtrackLevel) {
  learnt.clear();
  learnt.push_back(0);  // placeholder for the asserting literal
  std::vector<int> marked;

  int pathCount = 0;
  int p = 0;
  std::size_t index = trail_.size();
  int clauseIdx = conflict;

  do {
    const Clause& c = clauses_[clauseIdx];
    for (int q : c) {
      if (p != 0 && q == p) continue;  // the reason's own implied literal
      int v = std::abs(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        marked.push_back(v);
        bumpVar(v);
        if (level_[v] >= decisionLevel())
          ++pathCount;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[std::abs(trail_[index - 1])]) --index;
    p = trail_[--index];
    seen_[std::abs(p)] = 0;
    --pathCount;
    if (pathCount > 0) clauseIdx = reason_[std::abs(p)];
  } while (pathCount > 0);
  learnt[0] = -p;

  // Cheap clause minimization: drop literals implied by the rest. The seen
  // flags of dropped literals are cleared below with everything else.
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i)
    if (!literalRedundant(learnt[i])) learnt[keep++] = learnt[i];
  learnt.resize(keep);

  backtrackLevel = 0;
  if (learnt.size() > 1) {
    std::size_t maxIdx = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[std::abs(learnt[i])] > level_[std::abs(learnt[maxIdx])]) maxIdx = i;
    std::swap(learnt[1], learnt[maxIdx]);
    backtrackLevel = level_[std::abs(learnt[1])];
  }

  for (int v : marked) seen_[v] = 0;
}

void SatSolver::cancelUntil(int level) {
  if (decisionLevel() <= level) return;
  for (std::size_t i = trail_.size(); i > static_cast<std::size_t>(trailLim_[level]);) {
    --i;
    int v = std::abs(trail_[i]);
    polarity_[v] = assign_[v] == kTrue ? 1 : 0;
    assign_[v] = kUndef;
    reason_[v] = -1;
    order_.push({activity_[v], v});
  }
  trail_.resize(trailLim_[level]);
  trailLim_.resize(level);
  qhead_ = trail_.size();
}

int SatSolver::pickBranchVar() {
  while (!order_.empty()) {
    int v = order_.top().var;
    order_.pop();
    if (assign_[v] == kUndef) return v;
  }
  for (int v = 1; v <= varCount(); ++v)
    if (assign_[v] == kUndef) return v;
  return 0;
}

SatSolver::Status SatSolver::solve(const Deadline& deadline) {
  cancelUntil(0);
  if (!ok_) return Status::Unsat;

  std::uint64_t restartCount = 0;
  std::uint64_t conflictBudget = luby(restartCount) * kRestartBase;
  std::uint64_t conflictsThisRestart = 0;
  std::uint64_t checkCounter = 0;

  for (;;) {
    int conflict = propagate();
    if (conflict != -1) {
      ++conflicts_;
      ++conflictsThisRestart;
      if (decisionLevel() == 0) {
        ok_ = false;
        return Status::Unsat;
      }
      Clause learnt;
      int backtrackLevel = 0;
      analyze(conflict, learnt, backtrackLevel);
      cancelUntil(backtrackLevel);
      if (learnt.size() == 1) {
        uncheckedEnqueue(learnt[0], -1);
      } else {
        clauses_.push_back(learnt);
        int idx = static_cast<int>(clauses_.size()) - 1;
        attach(idx);
        uncheckedEnqueue(learnt[0], idx);
      }
      decayActivities();
      continue;
    }

    if (deadline && (++checkCounter & 1023) == 0 &&
        std::chrono::steady_clock::now() > *deadline) {
      cancelUntil(0);
      return Status::Interrupted;
    }

    if (conflictsThisRestart >= conflictBudget) {
      conflictsThisRestart = 0;
      conflictBudget = luby(++restartCount) * kRestartBase;
      cancelUntil(0);
      continue;
    }

    int v = pickBranchVar();
    if (v == 0) {  // full assignment
      model_.assign(assign_.begin(), assign_.end());
      cancelUntil(0);
      return Status::Sat;
    }
    trailLim_.push_back(static_cast<int>(trail_.size()));
    uncheckedEnqueue(polarity_[v] ? v : -v, -1);
  }
}

bool SatSolver::modelValue(int var) const {
  if (var < 1 || var >= static_cast<int>(model_.size())) return false;
  return model_[var] == kTrue;
}

}  // namespace fsmmint
