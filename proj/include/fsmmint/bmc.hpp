#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fsmmint/circuit.hpp"
#include "fsmmint/encode.hpp"
#include "fsmmint/ltl.hpp"

namespace fsmmint {

/// Circuits of the bounded path encoding at bound k. [[M]]_k is the
/// conjunction sigmaInit && pSigma && pEps && pY && pYk && pZ (pYk is dropped
/// under the Complete mode, where it is implied).
struct BmcPieces {
  int k = 0;
  int sigmaInit = 0;
  int pSigma = 0;
  int pEps = 0;
  int pY = 0;
  std::optional<int> pYk;
  int pZ = 0;
};

/// Builder for the bounded-model-checking encodings. Path variables live in
/// the shared pool under sigma/eps/zeta names; translation circuits are
/// memoized per (subformula, position, loop variant).
class BmcBuilder {
 public:
  BmcBuilder(CircuitStore& store, VarPool& pool, const Alphabet& alphabet,
             int stateCount, CompletenessMode mode)
      : store_(store), pool_(pool), alphabet_(alphabet), stateCount_(stateCount),
        mode_(mode) {}

  BmcPieces buildPathValidity(int k);

  /// Loop conditions _l L_k for l = 0..k.
  std::vector<int> buildLoops(int k);

  /// Structural translation [[f]]_k^j (loop == nullopt) or _l[[f]]_k^j.
  /// `f` must be in negation normal form.
  int translate(const LtlPtr& f, int j, int k, std::optional<int> loop);

  /// Witness condition W = (!L_k && [[f]]_k^0) || OR_l (_l L_k && _l[[f]]_k^0).
  int buildWitness(const LtlPtr& f, int k);

  CircuitStore& store() { return store_; }

 private:
  int atomLiteral(const LtlPtr& atom, int j, bool negated);

  CircuitStore& store_;
  VarPool& pool_;
  const Alphabet& alphabet_;
  int stateCount_;
  CompletenessMode mode_;

  // (formula node, position, loop or -1, k) -> circuit id
  std::map<std::tuple<const Ltl*, int, int, int>, int> memo_;
};

struct QbfInstance {
  std::vector<QuantifierBlock> prefix;
  std::vector<Clause> clauses;
  int varCount = 0;
};

/// Assembles the quantified formula: exists {x,y,z(,t,p,m)} forall
/// {sigma,eps,zeta} (exists aux): S && Z && B && C && (![[M]]_k || !W),
/// with the matrix Tseitin-transformed. `baseClauses` carries S, Z, B, C.
QbfInstance assembleQbf(EncodingContext& ctx, CircuitStore& store,
                        const std::vector<Clause>& baseClauses, const LtlPtr& nnf,
                        int k);

/// Universal-quantifier elimination: enumerates all valid (sigma, eps)
/// assignments (|T| = |S|^k * |E|^(k+1)), substitutes them (zeta becomes the
/// matching z literal) into !P_y || !P_y^k || !W and emits Tseitin clauses
/// per term. Throws BudgetExceededError beyond `clauseBudget`.
std::vector<Clause> expandUniversals(EncodingContext& ctx, CircuitStore& store,
                                     const LtlPtr& nnf, int k,
                                     long long clauseBudget);

}  // namespace fsmmint
