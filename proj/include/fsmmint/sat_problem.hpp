#pragma once

#include <string>
#include <vector>

#include "fsmmint/cnf.hpp"
#include "fsmmint/solver.hpp"

namespace fsmmint {

enum class SatStatus { Sat, Unsat, Timeout };

struct SolveOutcome {
  SatStatus status = SatStatus::Unsat;
  std::vector<std::uint8_t> model;  // indexed by var; absent vars read false

  bool value(int var) const {
    return var > 0 && var < static_cast<int>(model.size()) && model[var];
  }
};

/// Clause store with monotone (addition-only) incrementality. Solving uses
/// the embedded CDCL solver, or re-runs an external DIMACS solver over the
/// whole store when a command is configured.
class CnfProblem {
 public:
  void setExternalCommand(std::string command) { externalCommand_ = std::move(command); }

  void add(Clause clause);
  void addAll(const std::vector<Clause>& clauses);

  int varCount() const { return varCount_; }
  /// Raises the exported variable count (pool allocations may outrun clause
  /// literals; DIMACS headers must still cover them).
  void ensureVarCount(int n);

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t clauseCount() const { return clauses_.size(); }

  SolveOutcome solve(const Deadline& deadline = std::nullopt,
                     std::optional<double> externalTimeoutSeconds = std::nullopt);

  std::string dimacs() const { return toDimacs(clauses_, varCount_); }

 private:
  std::vector<Clause> clauses_;
  int varCount_ = 0;
  SatSolver solver_;
  std::string externalCommand_;
};

enum class SolverKind { Sat, Qsat };

struct ExternalResult {
  SatStatus status = SatStatus::Unsat;
  std::vector<int> modelLiterals;  // from v-lines, possibly partial or empty
};

/// Pipes `input` to `command` (via the shell) and parses the conventional
/// solver protocol: "s SATISFIABLE"/"s UNSATISFIABLE" lines, "v"/"V" model
/// lines, exit codes 10/20. Throws SolverCrashedError on anything else;
/// returns Timeout when the time limit expires.
ExternalResult externalSolve(const std::string& command, const std::string& input,
                             SolverKind kind,
                             std::optional<double> timeoutSeconds = std::nullopt);

/// Small complete QDIMACS solver used as the built-in fallback for the QSAT
/// method: eliminates universal blocks by expansion (inner existential
/// variables are duplicated per assignment), then runs the embedded CDCL
/// solver. Intended for desk-scale prefixes only.
struct QdimacsSolveResult {
  bool sat = false;
  std::vector<int> outerModel;  // literals for the leading existential block
};
QdimacsSolveResult solveQdimacsByExpansion(const std::string& qdimacs,
                                           std::size_t clauseBudget = 10'000'000);

}  // namespace fsmmint
