#include "fsmmint/bmc.hpp"

#include <cmath>
#include <stdexcept>

#include "fsmmint/errors.hpp"

namespace fsmmint {

BmcPieces BmcBuilder::buildPathValidity(int k) {
  const int states = stateCount_;
  const int events = alphabet_.eventCount();
  const int actions = alphabet_.actionCount();

  BmcPieces pieces;
  pieces.k = k;
  pieces.sigmaInit = store_.literal(pool_.sigma(1, 0));

  // P_sigma, P_eps: binomial exactly-one per position.
  std::vector<int> sigmaParts, epsParts;
  for (int j = 0; j <= k; ++j) {
    std::vector<int> any;
    for (int i = 1; i <= states; ++i) any.push_back(store_.literal(pool_.sigma(i, j)));
    sigmaParts.push_back(store_.disjunction(std::move(any)));
    for (int i1 = 1; i1 <= states; ++i1)
      for (int i2 = i1 + 1; i2 <= states; ++i2)
        sigmaParts.push_back(store_.negation(store_.conjunction(
            {store_.literal(pool_.sigma(i1, j)), store_.literal(pool_.sigma(i2, j))})));
  }
  for (int j = 0; j <= k; ++j) {
    std::vector<int> any;
    for (int e = 0; e < events; ++e) any.push_back(store_.literal(pool_.eps(e, j)));
    epsParts.push_back(store_.disjunction(std::move(any)));
    for (int e1 = 0; e1 < events; ++e1)
      for (int e2 = e1 + 1; e2 < events; ++e2)
        epsParts.push_back(store_.negation(store_.conjunction(
            {store_.literal(pool_.eps(e1, j)), store_.literal(pool_.eps(e2, j))})));
  }
  pieces.pSigma = store_.conjunction(std::move(sigmaParts));
  pieces.pEps = store_.conjunction(std::move(epsParts));

  // P_y over positions 0..k-1.
  std::vector<int> pyParts;
  for (int j = 0; j + 1 <= k; ++j) {
    for (int i1 = 1; i1 <= states; ++i1)
      for (int i2 = 1; i2 <= states; ++i2)
        for (int e = 0; e < events; ++e)
          pyParts.push_back(store_.implication(
              store_.conjunction({store_.literal(pool_.sigma(i1, j)),
                                  store_.literal(pool_.eps(e, j)),
                                  store_.literal(pool_.sigma(i2, j + 1))}),
              store_.literal(pool_.y(i1, i2, e))));
  }
  pieces.pY = store_.conjunction(std::move(pyParts));

  // P_y^k: the last position's transition must exist; implied when the
  // completeness constraint is part of the formula.
  if (mode_ != CompletenessMode::Complete) {
    std::vector<int> parts;
    for (int i1 = 1; i1 <= states; ++i1) {
      for (int e = 0; e < events; ++e) {
        std::vector<int> any;
        for (int i2 = 1; i2 <= states; ++i2) any.push_back(store_.literal(pool_.y(i1, i2, e)));
        parts.push_back(store_.implication(
            store_.conjunction({store_.literal(pool_.sigma(i1, k)),
                                store_.literal(pool_.eps(e, k))}),
            store_.disjunction(std::move(any))));
      }
    }
    pieces.pYk = store_.conjunction(std::move(parts));
  }

  // P_z: zeta variables mirror the z variables of the visited transition.
  std::vector<int> pzParts;
  for (int j = 0; j <= k; ++j)
    for (int i = 1; i <= states; ++i)
      for (int a = 0; a < actions; ++a)
        for (int e = 0; e < events; ++e)
          pzParts.push_back(store_.implication(
              store_.conjunction({store_.literal(pool_.sigma(i, j)),
                                  store_.literal(pool_.eps(e, j))}),
              store_.equivalence(store_.literal(pool_.zeta(a, j)),
                                 store_.literal(pool_.z(i, a, e)))));
  pieces.pZ = store_.conjunction(std::move(pzParts));

  return pieces;
}

std::vector<int> BmcBuilder::buildLoops(int k) {
  std::vector<int> loops;
  for (int l = 0; l <= k; ++l) {
    std::vector<int> disjuncts;
    for (int i1 = 1; i1 <= stateCount_; ++i1)
      for (int i2 = 1; i2 <= stateCount_; ++i2)
        for (int e = 0; e < alphabet_.eventCount(); ++e)
          disjuncts.push_back(store_.conjunction(
              {store_.literal(pool_.sigma(i1, k)), store_.literal(pool_.eps(e, k)),
               store_.literal(pool_.sigma(i2, l)), store_.literal(pool_.y(i1, i2, e))}));
    loops.push_back(store_.disjunction(std::move(disjuncts)));
  }
  return loops;
}

int BmcBuilder::atomLiteral(const LtlPtr& atom, int j, bool negated) {
  int var;
  if (atom->kind() == LtlKind::WasEvent)
    var = pool_.eps(atom->symbol(), j);
  else if (atom->kind() == LtlKind::WasAction)
    var = pool_.zeta(atom->symbol(), j);
  else
    throw std::logic_error("not an atom");
  return store_.literal(negated ? -var : var);
}

int BmcBuilder::translate(const LtlPtr& f, int j, int k, std::optional<int> loop) {
  auto key = std::make_tuple(f.get(), j, loop ? *loop : -1, k);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  const int l = loop ? *loop : -1;
  auto recur = [&](const LtlPtr& g, int pos) { return translate(g, pos, k, loop); };

  int result;
  switch (f->kind()) {
    case LtlKind::True:
      result = store_.trueNode();
      break;
    case LtlKind::False:
      result = store_.falseNode();
      break;
    case LtlKind::WasEvent:
    case LtlKind::WasAction:
      result = atomLiteral(f, j, false);
      break;
    case LtlKind::Not:
      result = atomLiteral(f->left(), j, true);  // NNF: negation only on atoms
      break;
    case LtlKind::And:
      result = store_.conjunction({recur(f->left(), j), recur(f->right(), j)});
      break;
    case LtlKind::Or:
      result = store_.disjunction({recur(f->left(), j), recur(f->right(), j)});
      break;
    case LtlKind::Next:
      if (!loop)
        result = j < k ? recur(f->left(), j + 1) : store_.falseNode();
      else
        result = recur(f->left(), j < k ? j + 1 : l);
      break;
    case LtlKind::Globally: {
      if (!loop) {
        result = store_.falseNode();
      } else {
        std::vector<int> parts;
        for (int i = std::min(j, l); i <= k; ++i) parts.push_back(recur(f->left(), i));
        result = store_.conjunction(std::move(parts));
      }
      break;
    }
    case LtlKind::Finally: {
      std::vector<int> parts;
      int start = loop ? std::min(j, l) : j;
      for (int i = start; i <= k; ++i) parts.push_back(recur(f->left(), i));
      result = store_.disjunction(std::move(parts));
      break;
    }
    case LtlKind::Until: {
      // OR_{i=j..k} ([[g]]^i && AND_{n=j..i-1}[[f]]^n), plus the wrapped
      // range l..j-1 in the loop variant (f must then hold j..k and l..i-1).
      std::vector<int> disjuncts;
      std::vector<int> fPrefix;  // [[f]]^j .. [[f]]^{i-1}, grown incrementally
      for (int i = j; i <= k; ++i) {
        std::vector<int> parts{recur(f->right(), i)};
        parts.insert(parts.end(), fPrefix.begin(), fPrefix.end());
        disjuncts.push_back(store_.conjunction(std::move(parts)));
        fPrefix.push_back(recur(f->left(), i));
      }
      if (loop) {
        std::vector<int> wrapPrefix;
        for (int i = l; i < j; ++i) {
          std::vector<int> parts{recur(f->right(), i)};
          parts.insert(parts.end(), fPrefix.begin(), fPrefix.end());  // f on j..k
          parts.insert(parts.end(), wrapPrefix.begin(), wrapPrefix.end());
          disjuncts.push_back(store_.conjunction(std::move(parts)));
          wrapPrefix.push_back(recur(f->left(), i));
        }
      }
      result = store_.disjunction(std::move(disjuncts));
      break;
    }
    case LtlKind::Release: {
      // No loop: OR_{i=j..k} ([[f]]^i && AND_{n=j..i}[[g]]^n).
      // Loop: additionally AND_{i=min(j,l)..k}[[g]]^i, and the wrapped range.
      std::vector<int> disjuncts;
      std::vector<int> gPrefix;
      for (int i = j; i <= k; ++i) {
        gPrefix.push_back(recur(f->right(), i));
        std::vector<int> parts{recur(f->left(), i)};
        parts.insert(parts.end(), gPrefix.begin(), gPrefix.end());
        disjuncts.push_back(store_.conjunction(std::move(parts)));
      }
      if (loop) {
        std::vector<int> always;
        for (int i = std::min(j, l); i <= k; ++i) always.push_back(recur(f->right(), i));
        disjuncts.insert(disjuncts.begin(), store_.conjunction(std::move(always)));
        std::vector<int> wrapPrefix;
        for (int i = l; i < j; ++i) {
          wrapPrefix.push_back(recur(f->right(), i));
          std::vector<int> parts{recur(f->left(), i)};
          parts.insert(parts.end(), gPrefix.begin(), gPrefix.end());  // g on j..k
          parts.insert(parts.end(), wrapPrefix.begin(), wrapPrefix.end());
          disjuncts.push_back(store_.conjunction(std::move(parts)));
        }
      }
      result = store_.disjunction(std::move(disjuncts));
      break;
    }
    case LtlKind::Implies:
      throw std::logic_error("translate expects negation normal form");
    default:
      throw std::logic_error("unhandled LTL kind");
  }

  memo_.emplace(key, result);
  return result;
}

int BmcBuilder::buildWitness(const LtlPtr& f, int k) {
  std::vector<int> loops = buildLoops(k);
  int lk = store_.disjunction(loops);

  std::vector<int> disjuncts;
  disjuncts.push_back(store_.conjunction(
      {store_.negation(lk), translate(f, 0, k, std::nullopt)}));
  for (int l = 0; l <= k; ++l)
    disjuncts.push_back(store_.conjunction({loops[l], translate(f, 0, k, l)}));
  return store_.disjunction(std::move(disjuncts));
}

QbfInstance assembleQbf(EncodingContext& ctx, CircuitStore& store,
                        const std::vector<Clause>& baseClauses, const LtlPtr& nnf,
                        int k) {
  BmcBuilder builder(store, ctx.pool(), ctx.alphabet(), ctx.stateCount(), ctx.mode());
  BmcPieces pieces = builder.buildPathValidity(k);

  std::vector<int> pathParts{pieces.sigmaInit, pieces.pSigma, pieces.pEps, pieces.pY};
  if (pieces.pYk) pathParts.push_back(*pieces.pYk);
  pathParts.push_back(pieces.pZ);
  int pathValidity = store.conjunction(std::move(pathParts));
  int witness = builder.buildWitness(nnf, k);
  int matrixTail =
      store.disjunction({store.negation(pathValidity), store.negation(witness)});

  QbfInstance instance;
  instance.clauses = baseClauses;
  int root = store.tseitin(matrixTail, ctx.pool(), instance.clauses);
  instance.clauses.push_back({root});
  instance.varCount = ctx.pool().count();

  QuantifierBlock outer{'e', {}}, universal{'a', {}}, inner{'e', {}};
  for (int v = 1; v <= instance.varCount; ++v) {
    switch (ctx.pool().name(v).kind) {
      case VarName::Kind::Sigma:
      case VarName::Kind::Eps:
      case VarName::Kind::Zeta:
        universal.vars.push_back(v);
        break;
      case VarName::Kind::Aux:
        inner.vars.push_back(v);
        break;
      default:
        outer.vars.push_back(v);
        break;
    }
  }
  instance.prefix = {std::move(outer), std::move(universal), std::move(inner)};
  return instance;
}

std::vector<Clause> expandUniversals(EncodingContext& ctx, CircuitStore& store,
                                     const LtlPtr& nnf, int k,
                                     long long clauseBudget) {
  const int states = ctx.stateCount();
  const int events = ctx.alphabet().eventCount();

  // |T| = |S|^k * |E|^(k+1); each term is at least one unit of work.
  double projected = std::pow(states, k) * std::pow(events, k + 1);
  if (projected > static_cast<double>(clauseBudget))
    throw BudgetExceededError("universal expansion needs " +
                              std::to_string(projected) + " terms");

  BmcBuilder builder(store, ctx.pool(), ctx.alphabet(), ctx.stateCount(), ctx.mode());
  BmcPieces pieces = builder.buildPathValidity(k);
  int witness = builder.buildWitness(nnf, k);

  VarPool& pool = ctx.pool();
  std::vector<Clause> out;

  // Path assignment: stateAt[j] (stateAt[0] = 1) and eventAt[j].
  std::vector<int> stateAt(k + 1, 1), eventAt(k + 1, 0);

  auto emitTerm = [&]() {
    auto mapVar = [&](int var) -> int {
      const VarName& n = pool.name(var);
      switch (n.kind) {
        case VarName::Kind::Sigma:
          return stateAt[n.b] == n.a ? store.trueNode() : store.falseNode();
        case VarName::Kind::Eps:
          return eventAt[n.b] == n.a ? store.trueNode() : store.falseNode();
        case VarName::Kind::Zeta:
          return store.literal(pool.z(stateAt[n.b], n.a, eventAt[n.b]));
        default:
          return store.literal(var);
      }
    };

    std::vector<int> parts{store.negation(pieces.pY)};
    if (pieces.pYk) parts.push_back(store.negation(*pieces.pYk));
    parts.push_back(store.negation(witness));
    int term = store.substitute(store.disjunction(std::move(parts)), mapVar);

    if (term == store.trueNode()) return;
    if (term == store.falseNode()) {
      out.push_back({});
      return;
    }
    int root = store.tseitin(term, pool, out);
    out.push_back({root});
    if (static_cast<long long>(out.size()) > clauseBudget)
      throw BudgetExceededError("universal expansion exceeded the clause budget");
  };

  // Enumerate T: sigma at position 0 is fixed to state 1.
  std::function<void(int)> enumerate = [&](int j) {
    if (j > k) {
      emitTerm();
      return;
    }
    for (int e = 0; e < events; ++e) {
      eventAt[j] = e;
      if (j == k) {
        enumerate(j + 1);
      } else {
        for (int s = 1; s <= states; ++s) {
          stateAt[j + 1] = s;
          enumerate(j + 1);
        }
      }
    }
  };
  enumerate(0);
  return out;
}

}  // namespace fsmmint
