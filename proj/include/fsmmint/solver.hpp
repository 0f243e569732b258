#pragma once

#include <chrono>
#include <optional>
#include <queue>
#include <vector>

#include "fsmmint/cnf.hpp"

namespace fsmmint {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Incremental CDCL solver: two-watched-literal propagation, 1-UIP clause
/// learning, VSIDS branching with phase saving, Luby restarts. Clauses can
/// only be added, never removed, so learned clauses stay valid across solve
/// calls. Fully deterministic.
class SatSolver {
 public:
  enum class Status { Sat, Unsat, Interrupted };

  void ensureVarCount(int n);
  int varCount() const { return static_cast<int>(assign_.size()) - 1; }

  /// Adds a clause (at decision level 0). Returns false when the formula has
  /// become trivially unsatisfiable.
  bool addClause(const Clause& clause);

  /// Solves and, on Sat, snapshots the model (the trail is reset so clauses
  /// can keep being added afterwards).
  Status solve(const Deadline& deadline = std::nullopt);

  /// Model access after the last Sat; unconstrained variables read false.
  bool modelValue(int var) const;

  bool inConflictState() const { return !ok_; }

  std::uint64_t conflictCount() const { return conflicts_; }

 private:
  enum : std::uint8_t { kTrue, kFalse, kUndef };

  static int litIndex(int lit) {
    int v = lit > 0 ? lit : -lit;
    return 2 * v + (lit < 0 ? 1 : 0);
  }

  std::uint8_t litValue(int lit) const {
    std::uint8_t v = assign_[lit > 0 ? lit : -lit];
    if (v == kUndef) return kUndef;
    return (lit > 0) == (v == kTrue) ? kTrue : kFalse;
  }

  void attach(int clauseIdx);
  void uncheckedEnqueue(int lit, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int conflict, Clause& learnt, int& backtrackLevel);
  bool literalRedundant(int lit) const;
  void cancelUntil(int level);
  int pickBranchVar();
  void bumpVar(int var);
  void decayActivities();

  int decisionLevel() const { return static_cast<int>(trailLim_.size()); }

  struct Watcher {
    int clause;
    int blocker;
  };

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assign_{kUndef};  // per var; slot 0 unused
  std::vector<char> polarity_{0};             // saved phase, false by default
  std::vector<int> level_{0};
  std::vector<int> reason_{-1};
  std::vector<double> activity_{0.0};
  std::vector<int> trail_;
  std::vector<int> trailLim_;
  std::size_t qhead_ = 0;

  // max-heap over (activity, smaller var first on ties), lazy entries
  struct OrderEntry {
    double activity;
    int var;
    bool operator<(const OrderEntry& o) const {
      if (activity != o.activity) return activity < o.activity;
      return var > o.var;
    }
  };
  std::priority_queue<OrderEntry> order_;

  double varInc_ = 1.0;
  std::uint64_t conflicts_ = 0;
  std::vector<std::uint8_t> model_;
  mutable std::vector<char> seen_{0};
};

}  // namespace fsmmint
