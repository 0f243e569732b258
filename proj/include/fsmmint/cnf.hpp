#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsmmint/alphabet.hpp"

namespace fsmmint {

/// Structured variable name. States and tree nodes are 1-based, event/action
/// ids and path positions 0-based (printed through the alphabet where one is
/// available).
struct VarName {
  enum class Kind : std::uint8_t {
    X,      // x(v, i): scenario-tree node v colored with state i
    Y,      // y(i1, i2, e): transition i1 -e-> i2
    Z,      // z(i, a, e): transition from i on e emits action a
    XBar,   // xbar(v, i): negative-tree node v corresponds to state i
    T,      // t(i, j): some transition i -> j (BFS breaking)
    P,      // p(j, i): BFS parent of state j is i
    M,      // m(i, j, e): e is the minimal event with y(i, j, e)
    Sigma,  // sigma(i, j): path position j starts in state i
    Eps,    // eps(e, j): path position j is triggered by event e
    Zeta,   // zeta(a, j): path position j emits action a
    Aux,    // Tseitin auxiliary
  };

  Kind kind{};
  int a = 0, b = 0, c = 0;

  bool operator==(const VarName&) const = default;
};

struct VarNameHash {
  std::size_t operator()(const VarName& n) const {
    std::size_t h = static_cast<std::size_t>(n.kind);
    h = h * 1000003u + static_cast<std::size_t>(n.a + 1);
    h = h * 1000003u + static_cast<std::size_t>(n.b + 1);
    h = h * 1000003u + static_cast<std::size_t>(n.c + 1);
    return h;
  }
};

/// Bijection between structured names and positive variable ids, stable for
/// the lifetime of a synthesis run (incremental solving relies on it).
class VarPool {
 public:
  int var(const VarName& name);

  int x(int v, int i) { return var({VarName::Kind::X, v, i, 0}); }
  int y(int i1, int i2, int e) { return var({VarName::Kind::Y, i1, i2, e}); }
  int z(int i, int a, int e) { return var({VarName::Kind::Z, i, a, e}); }
  int xbar(int v, int i) { return var({VarName::Kind::XBar, v, i, 0}); }
  int t(int i, int j) { return var({VarName::Kind::T, i, j, 0}); }
  int p(int j, int i) { return var({VarName::Kind::P, j, i, 0}); }
  int m(int i, int j, int e) { return var({VarName::Kind::M, i, j, e}); }
  int sigma(int i, int j) { return var({VarName::Kind::Sigma, i, j, 0}); }
  int eps(int e, int j) { return var({VarName::Kind::Eps, e, j, 0}); }
  int zeta(int a, int j) { return var({VarName::Kind::Zeta, a, j, 0}); }
  int newAux() { return var({VarName::Kind::Aux, ++auxCounter_, 0, 0}); }

  std::optional<int> lookup(const VarName& name) const;
  const VarName& name(int var) const { return names_.at(var); }
  int count() const { return static_cast<int>(names_.size()) - 1; }

  /// Human-readable form, e.g. "y(1,2,e1)"; falls back to raw indices when no
  /// alphabet is given.
  std::string display(int var, const Alphabet* alphabet = nullptr) const;

 private:
  std::unordered_map<VarName, int, VarNameHash> ids_;
  std::vector<VarName> names_{VarName{}};  // slot 0 unused
  int auxCounter_ = 0;
};

using Clause = std::vector<int>;

std::string toDimacs(const std::vector<Clause>& clauses, int varCount);

struct QuantifierBlock {
  char quantifier = 'e';  // 'e' or 'a'
  std::vector<int> vars;
};

/// QDIMACS export; every variable 1..varCount must sit in exactly one block.
/// Throws UnquantifiedVariableError otherwise.
std::string toQdimacs(const std::vector<Clause>& clauses, int varCount,
                      const std::vector<QuantifierBlock>& prefix);

/// Debug dump with symbolic names, one clause per line.
std::string symbolicDump(const std::vector<Clause>& clauses, const VarPool& pool,
                         const Alphabet* alphabet = nullptr);

}  // namespace fsmmint
