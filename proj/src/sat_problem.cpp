#include "fsmmint/sat_problem.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fsmmint/errors.hpp"

namespace fsmmint {

// ---------------------------------------------------------------------------
// VarPool / DIMACS (declared in cnf.hpp)
// ---------------------------------------------------------------------------

int VarPool::var(const VarName& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<int> VarPool::lookup(const VarName& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string VarPool::display(int var, const Alphabet* alphabet) const {
  const VarName& n = names_.at(var);
  auto ev = [&](int e) {
    return alphabet ? alphabet->eventName(e) : "e?" + std::to_string(e);
  };
  auto ac = [&](int a) {
    return alphabet ? alphabet->actionName(a) : "a?" + std::to_string(a);
  };
  std::ostringstream out;
  switch (n.kind) {
    case VarName::Kind::X: out << "x(" << n.a << "," << n.b << ")"; break;
    case VarName::Kind::Y: out << "y(" << n.a << "," << n.b << "," << ev(n.c) << ")"; break;
    case VarName::Kind::Z: out << "z(" << n.a << "," << ac(n.b) << "," << ev(n.c) << ")"; break;
    case VarName::Kind::XBar: out << "xbar(" << n.a << "," << n.b << ")"; break;
    case VarName::Kind::T: out << "t(" << n.a << "," << n.b << ")"; break;
    case VarName::Kind::P: out << "p(" << n.a << "," << n.b << ")"; break;
    case VarName::Kind::M: out << "m(" << n.a << "," << n.b << "," << ev(n.c) << ")"; break;
    case VarName::Kind::Sigma: out << "sigma(" << n.a << "," << n.b << ")"; break;
    case VarName::Kind::Eps: out << "eps(" << ev(n.a) << "," << n.b << ")"; break;
    case VarName::Kind::Zeta: out << "zeta(" << ac(n.a) << "," << n.b << ")"; break;
    case VarName::Kind::Aux: out << "aux(" << n.a << ")"; break;
  }
  return out.str();
}

std::string toDimacs(const std::vector<Clause>& clauses, int varCount) {
  std::ostringstream out;
  out << "p cnf " << varCount << " " << clauses.size() << "\n";
  for (const Clause& c : clauses) {
    for (int lit : c) out << lit << " ";
    out << "0\n";
  }
  return out.str();
}

std::string toQdimacs(const std::vector<Clause>& clauses, int varCount,
                      const std::vector<QuantifierBlock>& prefix) {
  std::vector<char> covered(varCount + 1, 0);
  for (const auto& block : prefix) {
    for (int v : block.vars) {
      if (v < 1 || v > varCount || covered[v])
        throw UnquantifiedVariableError(
            "variable " + std::to_string(v) + " out of range or quantified twice");
      covered[v] = 1;
    }
  }
  for (int v = 1; v <= varCount; ++v)
    if (!covered[v])
      throw UnquantifiedVariableError("variable " + std::to_string(v) +
                                      " not covered by the quantifier prefix");

  std::ostringstream out;
  out << "p cnf " << varCount << " " << clauses.size() << "\n";
  for (const auto& block : prefix) {
    if (block.vars.empty()) continue;
    out << block.quantifier;
    for (int v : block.vars) out << " " << v;
    out << " 0\n";
  }
  for (const Clause& c : clauses) {
    for (int lit : c) out << lit << " ";
    out << "0\n";
  }
  return out.str();
}

std::string symbolicDump(const std::vector<Clause>& clauses, const VarPool& pool,
                         const Alphabet* alphabet) {
  std::ostringstream out;
  for (const Clause& c : clauses) {
    out << "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i > 0) out << " | ";
      if (c[i] < 0) out << "-";
      out << pool.display(std::abs(c[i]), alphabet);
    }
    out << ")\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// CnfProblem
// ---------------------------------------------------------------------------

void CnfProblem::add(Clause clause) {
  for (int lit : clause) varCount_ = std::max(varCount_, std::abs(lit));
  solver_.addClause(clause);
  clauses_.push_back(std::move(clause));
}

void CnfProblem::addAll(const std::vector<Clause>& clauses) {
  for (const Clause& c : clauses) add(c);
}

void CnfProblem::ensureVarCount(int n) {
  varCount_ = std::max(varCount_, n);
  solver_.ensureVarCount(n);
}

SolveOutcome CnfProblem::solve(const Deadline& deadline,
                               std::optional<double> externalTimeoutSeconds) {
  SolveOutcome outcome;
  if (!externalCommand_.empty()) {
    ExternalResult r =
        externalSolve(externalCommand_, dimacs(), SolverKind::Sat, externalTimeoutSeconds);
    outcome.status = r.status;
    if (r.status == SatStatus::Sat) {
      outcome.model.assign(varCount_ + 1, 0);
      for (int lit : r.modelLiterals)
        if (lit > 0 && lit <= varCount_) outcome.model[lit] = 1;
    }
    return outcome;
  }

  solver_.ensureVarCount(varCount_);
  switch (solver_.solve(deadline)) {
    case SatSolver::Status::Sat: {
      outcome.status = SatStatus::Sat;
      outcome.model.assign(varCount_ + 1, 0);
      for (int v = 1; v <= varCount_; ++v)
        outcome.model[v] = solver_.modelValue(v) ? 1 : 0;
      break;
    }
    case SatSolver::Status::Unsat:
      outcome.status = SatStatus::Unsat;
      break;
    case SatSolver::Status::Interrupted:
      outcome.status = SatStatus::Timeout;
      break;
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// External solver adapter
// ---------------------------------------------------------------------------

namespace {

struct TempFile {
  std::string path;

  explicit TempFile(const std::string& contents) {
    char name[] = "/tmp/fsmmint-XXXXXX";
    int fd = mkstemp(name);
    if (fd < 0) throw SolverCrashedError("cannot create temporary file");
    path = name;
    FILE* f = fdopen(fd, "w");
    if (!f) throw SolverCrashedError("cannot open temporary file");
    std::fwrite(contents.data(), 1, contents.size(), f);
    std::fclose(f);
  }

  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

ExternalResult externalSolve(const std::string& command, const std::string& input,
                             SolverKind kind, std::optional<double> timeoutSeconds) {
  (void)kind;  // the protocol is identical; QSAT models just cover the outer block
  TempFile file(input);

  std::string shellLine;
  if (timeoutSeconds)
    shellLine = "timeout " + std::to_string(std::max(1, static_cast<int>(*timeoutSeconds))) + " ";
  shellLine += command + " < " + file.path + " 2>/dev/null";

  FILE* pipe = popen(shellLine.c_str(), "r");
  if (!pipe) throw SolverCrashedError("cannot run solver: " + command);

  std::string output;
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  int rawStatus = pclose(pipe);
  int exitCode = WIFEXITED(rawStatus) ? WEXITSTATUS(rawStatus) : -1;

  if (exitCode == 124) return {SatStatus::Timeout, {}};

  ExternalResult result;
  bool verdictSeen = false;
  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        result.status = SatStatus::Unsat;
        verdictSeen = true;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        result.status = SatStatus::Sat;
        verdictSeen = true;
      }
    } else if (line.rfind("v ", 0) == 0 || line.rfind("V ", 0) == 0) {
      std::istringstream lits(line.substr(2));
      int lit;
      while (lits >> lit)
        if (lit != 0) result.modelLiterals.push_back(lit);
    }
  }

  if (!verdictSeen) {
    if (exitCode == 10) {
      result.status = SatStatus::Sat;
      verdictSeen = true;
    } else if (exitCode == 20) {
      result.status = SatStatus::Unsat;
      verdictSeen = true;
    }
  }
  if (!verdictSeen)
    throw SolverCrashedError("solver produced no verdict (exit code " +
                             std::to_string(exitCode) + "): " + command);
  return result;
}

// ---------------------------------------------------------------------------
// QDIMACS solving by universal expansion
// ---------------------------------------------------------------------------

namespace {

struct ParsedQdimacs {
  int varCount = 0;
  std::vector<QuantifierBlock> prefix;
  std::vector<Clause> clauses;
};

ParsedQdimacs parseQdimacs(const std::string& text) {
  ParsedQdimacs parsed;
  std::istringstream in(text);
  std::string line;
  bool headerSeen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream tokens(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      std::size_t clauseCount;
      tokens >> p >> cnf >> parsed.varCount >> clauseCount;
      headerSeen = true;
      continue;
    }
    if (line[0] == 'e' || line[0] == 'a') {
      QuantifierBlock block;
      tokens >> block.quantifier;
      int v;
      while (tokens >> v && v != 0) block.vars.push_back(v);
      parsed.prefix.push_back(std::move(block));
      continue;
    }
    Clause c;
    int lit;
    while (tokens >> lit && lit != 0) c.push_back(lit);
    parsed.clauses.push_back(std::move(c));
  }
  if (!headerSeen) throw SolverCrashedError("QDIMACS input has no header");
  return parsed;
}

}  // namespace

QdimacsSolveResult solveQdimacsByExpansion(const std::string& qdimacs,
                                           std::size_t clauseBudget) {
  ParsedQdimacs q = parseQdimacs(qdimacs);

  // Free variables count as outermost existentials.
  {
    std::vector<char> covered(q.varCount + 1, 0);
    for (const auto& b : q.prefix)
      for (int v : b.vars) covered[v] = 1;
    QuantifierBlock free{'e', {}};
    for (int v = 1; v <= q.varCount; ++v)
      if (!covered[v]) free.vars.push_back(v);
    if (!free.vars.empty()) q.prefix.insert(q.prefix.begin(), std::move(free));
  }

  // Repeatedly expand the innermost universal block. Existential variables
  // inside it depend on its assignment and are renamed per branch.
  while (true) {
    int uIndex = -1;
    for (int i = static_cast<int>(q.prefix.size()) - 1; i >= 0; --i) {
      if (q.prefix[i].quantifier == 'a') {
        uIndex = i;
        break;
      }
    }
    if (uIndex < 0) break;

    std::vector<int> universals = q.prefix[uIndex].vars;
    std::vector<int> inner;
    for (std::size_t i = uIndex + 1; i < q.prefix.size(); ++i)
      for (int v : q.prefix[i].vars) inner.push_back(v);

    if (universals.size() > 24)
      throw SolverCrashedError("universal block too large for expansion");
    std::size_t branches = 1ull << universals.size();

    // Clauses not touching the universal block or the inner variables are
    // branch-independent and emitted once.
    std::vector<char> touched(q.varCount + 1, 0);
    for (int v : universals) touched[v] = 1;
    for (int v : inner) touched[v] = 1;

    std::vector<Clause> expanded;
    std::vector<const Clause*> branchClauses;
    for (const Clause& c : q.clauses) {
      bool copies = false;
      for (int lit : c)
        if (touched[std::abs(lit)]) {
          copies = true;
          break;
        }
      if (copies)
        branchClauses.push_back(&c);
      else
        expanded.push_back(c);
    }

    int nextVar = q.varCount;
    std::vector<int> innerRename(q.varCount + 1, 0);
    std::vector<QuantifierBlock> innerBlocks;

    for (std::size_t mask = 0; mask < branches; ++mask) {
      std::vector<std::int8_t> fixed(q.varCount + 1, -1);
      for (std::size_t i = 0; i < universals.size(); ++i)
        fixed[universals[i]] = (mask >> i) & 1;
      std::fill(innerRename.begin(), innerRename.end(), 0);
      QuantifierBlock branchBlock{'e', {}};
      for (int v : inner) {
        innerRename[v] = ++nextVar;
        branchBlock.vars.push_back(nextVar);
      }

      for (const Clause* cp : branchClauses) {
        Clause mapped;
        bool satisfied = false;
        for (int lit : *cp) {
          int v = std::abs(lit);
          if (fixed[v] >= 0) {
            bool value = (lit > 0) == (fixed[v] == 1);
            if (value) {
              satisfied = true;
              break;
            }
            continue;  // falsified literal drops out
          }
          int mappedVar = innerRename[v] ? innerRename[v] : v;
          mapped.push_back(lit > 0 ? mappedVar : -mappedVar);
        }
        if (!satisfied) expanded.push_back(std::move(mapped));
        if (expanded.size() > clauseBudget)
          throw SolverCrashedError("expansion exceeds the clause budget");
      }
      if (!branchBlock.vars.empty()) innerBlocks.push_back(std::move(branchBlock));
    }

    q.prefix.resize(uIndex);
    for (auto& b : innerBlocks) q.prefix.push_back(std::move(b));
    q.clauses = std::move(expanded);
    q.varCount = nextVar;
  }

  SatSolver solver;
  solver.ensureVarCount(q.varCount);
  bool ok = true;
  for (const Clause& c : q.clauses)
    if (!solver.addClause(c)) {
      ok = false;
      break;
    }

  QdimacsSolveResult result;
  result.sat = ok && solver.solve() == SatSolver::Status::Sat;
  if (result.sat && !q.prefix.empty() && q.prefix.front().quantifier == 'e') {
    for (int v : q.prefix.front().vars)
      result.outerModel.push_back(solver.modelValue(v) ? v : -v);
  }
  return result;
}

}  // namespace fsmmint
