#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fsmmint/alphabet.hpp"

namespace fsmmint {

enum class LtlKind {
  True,
  False,
  WasEvent,
  WasAction,
  Not,
  And,
  Or,
  Implies,
  Next,
  Globally,
  Finally,
  Until,
  Release,
};

class Ltl;
using LtlPtr = std::shared_ptr<const Ltl>;

/// Immutable LTL formula node over wasEvent/wasAction atoms.
class Ltl {
 public:
  Ltl(LtlKind kind, int symbol, LtlPtr left, LtlPtr right)
      : kind_(kind), symbol_(symbol), left_(std::move(left)), right_(std::move(right)) {}

  LtlKind kind() const { return kind_; }
  int symbol() const { return symbol_; }
  const LtlPtr& left() const { return left_; }
  const LtlPtr& right() const { return right_; }

 private:
  LtlKind kind_;
  int symbol_;  // event or action id for atoms
  LtlPtr left_, right_;
};

namespace ltl {

LtlPtr trueFormula();
LtlPtr falseFormula();
LtlPtr wasEvent(int event);
LtlPtr wasAction(int action);
LtlPtr negation(LtlPtr f);
LtlPtr conjunction(LtlPtr a, LtlPtr b);
LtlPtr disjunction(LtlPtr a, LtlPtr b);
LtlPtr implication(LtlPtr a, LtlPtr b);
LtlPtr next(LtlPtr f);
LtlPtr globally(LtlPtr f);
LtlPtr finally_(LtlPtr f);
LtlPtr until(LtlPtr a, LtlPtr b);
LtlPtr release(LtlPtr a, LtlPtr b);

/// Conjunction of a formula list; empty list yields `true`.
LtlPtr conjoin(const std::vector<LtlPtr>& formulas);

}  // namespace ltl

bool structurallyEqual(const LtlPtr& a, const LtlPtr& b);

/// True when the formula is in negation normal form (Not only above atoms,
/// no Implies).
bool isNnf(const LtlPtr& f);

/// Negation normal form: negations pushed to the atoms via the standard
/// dualities, implications expanded.
LtlPtr toNnf(const LtlPtr& f);

std::string printLtl(const LtlPtr& f, const Alphabet& alphabet);

/// Parses a formula. Precedence (low to high): `->` (right-assoc), `||`,
/// `&&`, unary `!`/`X`/`G`/`F`, binary `U`/`R` (right-assoc), atoms.
/// Throws ParseError / UnknownSymbolError.
LtlPtr parseLtl(std::string_view text, const Alphabet& alphabet);

}  // namespace fsmmint
