#pragma once

#include <functional>
#include <map>
#include <vector>

#include "fsmmint/cnf.hpp"

namespace fsmmint {

/// Hash-consed Boolean circuit DAG over CNF literals. Constructors do not
/// constant-fold: the BMC translation rules must keep their exact shape
/// (including `false` leaves). Folding happens in substitute() and at
/// Tseitin time.
class CircuitStore {
 public:
  enum class Op : std::uint8_t { True, False, Lit, Not, And, Or, Implies, Iff };

  struct Node {
    Op op{};
    int lit = 0;            // for Op::Lit: a signed CNF literal
    std::vector<int> kids;  // child node ids
  };

  CircuitStore();

  int trueNode() const { return 0; }
  int falseNode() const { return 1; }
  int literal(int lit);
  int negation(int id);
  int conjunction(std::vector<int> kids);
  int disjunction(std::vector<int> kids);
  int implication(int a, int b);
  int equivalence(int a, int b);

  const Node& node(int id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  bool eval(int id, const std::function<bool(int var)>& varValue) const;

  /// Structural copy with constant folding. `mapVar` returns the replacement
  /// circuit for a positive variable: trueNode(), falseNode(), a literal
  /// node, or the variable's own literal when untouched.
  int substitute(int id, const std::function<int(int var)>& mapVar);

  /// Emits equisatisfiability-preserving defining clauses (full Tseitin
  /// gates, both directions) and returns the root literal.
  int tseitin(int id, VarPool& pool, std::vector<Clause>& out);

 private:
  int intern(Node node);

  std::vector<Node> nodes_;
  std::map<std::tuple<Op, int, std::vector<int>>, int> interned_;
};

}  // namespace fsmmint
