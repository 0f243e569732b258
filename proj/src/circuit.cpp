#include "fsmmint/circuit.hpp"

#include <stdexcept>
#include <unordered_map>

namespace fsmmint {

CircuitStore::CircuitStore() {
  nodes_.push_back({Op::True, 0, {}});
  nodes_.push_back({Op::False, 0, {}});
}

int CircuitStore::intern(Node node) {
  auto key = std::make_tuple(node.op, node.lit, node.kids);
  auto it = interned_.find(key);
  if (it != interned_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(node));
  interned_.emplace(std::move(key), id);
  return id;
}

int CircuitStore::literal(int lit) {
  if (lit == 0) throw std::invalid_argument("literal 0");
  return intern({Op::Lit, lit, {}});
}

int CircuitStore::negation(int id) { return intern({Op::Not, 0, {id}}); }

int CircuitStore::conjunction(std::vector<int> kids) {
  return intern({Op::And, 0, std::move(kids)});
}

int CircuitStore::disjunction(std::vector<int> kids) {
  return intern({Op::Or, 0, std::move(kids)});
}

int CircuitStore::implication(int a, int b) { return intern({Op::Implies, 0, {a, b}}); }

int CircuitStore::equivalence(int a, int b) { return intern({Op::Iff, 0, {a, b}}); }

bool CircuitStore::eval(int id, const std::function<bool(int var)>& varValue) const {
  const Node& n = nodes_.at(id);
  switch (n.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Lit: {
      bool v = varValue(std::abs(n.lit));
      return n.lit > 0 ? v : !v;
    }
    case Op::Not: return !eval(n.kids[0], varValue);
    case Op::And:
      for (int k : n.kids)
        if (!eval(k, varValue)) return false;
      return true;
    case Op::Or:
      for (int k : n.kids)
        if (eval(k, varValue)) return true;
      return false;
    case Op::Implies: return !eval(n.kids[0], varValue) || eval(n.kids[1], varValue);
    case Op::Iff: return eval(n.kids[0], varValue) == eval(n.kids[1], varValue);
  }
  throw std::logic_error("unhandled circuit op");
}

int CircuitStore::substitute(int id, const std::function<int(int var)>& mapVar) {
  std::unordered_map<int, int> memo;

  std::function<int(int)> go = [&](int cur) -> int {
    auto it = memo.find(cur);
    if (it != memo.end()) return it->second;
    const Node n = nodes_[cur];  // copy; nodes_ may reallocate below
    int result;
    switch (n.op) {
      case Op::True:
      case Op::False:
        result = cur;
        break;
      case Op::Lit: {
        int mapped = mapVar(std::abs(n.lit));
        if (n.lit > 0) {
          result = mapped;
        } else if (mapped == trueNode()) {
          result = falseNode();
        } else if (mapped == falseNode()) {
          result = trueNode();
        } else {
          const Node& m = nodes_[mapped];
          if (m.op != Op::Lit) throw std::logic_error("substitute: non-literal mapping");
          result = literal(-m.lit);
        }
        break;
      }
      case Op::Not: {
        int k = go(n.kids[0]);
        if (k == trueNode()) result = falseNode();
        else if (k == falseNode()) result = trueNode();
        else result = negation(k);
        break;
      }
      case Op::And:
      case Op::Or: {
        const bool isAnd = n.op == Op::And;
        const int absorb = isAnd ? falseNode() : trueNode();
        const int neutral = isAnd ? trueNode() : falseNode();
        std::vector<int> kids;
        bool absorbed = false;
        for (int kid : n.kids) {
          int k = go(kid);
          if (k == absorb) { absorbed = true; break; }
          if (k == neutral) continue;
          kids.push_back(k);
        }
        if (absorbed) result = absorb;
        else if (kids.empty()) result = neutral;
        else if (kids.size() == 1) result = kids[0];
        else result = isAnd ? conjunction(std::move(kids)) : disjunction(std::move(kids));
        break;
      }
      case Op::Implies: {
        int a = go(n.kids[0]);
        int b = go(n.kids[1]);
        if (a == falseNode() || b == trueNode()) result = trueNode();
        else if (a == trueNode()) result = b;
        else if (b == falseNode()) {
          const Node& na = nodes_[a];
          result = na.op == Op::Lit ? literal(-na.lit) : negation(a);
        } else result = implication(a, b);
        break;
      }
      case Op::Iff: {
        int a = go(n.kids[0]);
        int b = go(n.kids[1]);
        if (a == b) result = trueNode();
        else if (a == trueNode()) result = b;
        else if (b == trueNode()) result = a;
        else if (a == falseNode()) {
          const Node& nb = nodes_[b];
          result = nb.op == Op::Lit ? literal(-nb.lit) : negation(b);
        } else if (b == falseNode()) {
          const Node& na = nodes_[a];
          result = na.op == Op::Lit ? literal(-na.lit) : negation(a);
        } else result = equivalence(a, b);
        break;
      }
      default:
        throw std::logic_error("unhandled circuit op");
    }
    memo.emplace(cur, result);
    return result;
  };
  return go(id);
}

int CircuitStore::tseitin(int id, VarPool& pool, std::vector<Clause>& out) {
  std::unordered_map<int, int> memo;  // node id -> literal
  int constLit = 0;                   // literal forced true, for constants

  auto constantTrue = [&]() {
    if (constLit == 0) {
      constLit = pool.newAux();
      out.push_back({constLit});
    }
    return constLit;
  };

  std::function<int(int)> go = [&](int cur) -> int {
    auto it = memo.find(cur);
    if (it != memo.end()) return it->second;
    const Node& n = nodes_[cur];
    int lit;
    switch (n.op) {
      case Op::True: lit = constantTrue(); break;
      case Op::False: lit = -constantTrue(); break;
      case Op::Lit: lit = n.lit; break;
      case Op::Not: lit = -go(n.kids[0]); break;
      case Op::And: {
        std::vector<int> kids;
        kids.reserve(n.kids.size());
        for (int k : n.kids) kids.push_back(go(k));
        int g = pool.newAux();
        Clause reverse{g};
        for (int k : kids) {
          out.push_back({-g, k});
          reverse.push_back(-k);
        }
        out.push_back(std::move(reverse));
        lit = g;
        break;
      }
      case Op::Or: {
        std::vector<int> kids;
        kids.reserve(n.kids.size());
        for (int k : n.kids) kids.push_back(go(k));
        int g = pool.newAux();
        Clause forward{-g};
        for (int k : kids) {
          out.push_back({g, -k});
          forward.push_back(k);
        }
        out.push_back(std::move(forward));
        lit = g;
        break;
      }
      case Op::Implies: {
        int a = go(n.kids[0]);
        int b = go(n.kids[1]);
        int g = pool.newAux();
        out.push_back({-g, -a, b});
        out.push_back({g, a});
        out.push_back({g, -b});
        lit = g;
        break;
      }
      case Op::Iff: {
        int a = go(n.kids[0]);
        int b = go(n.kids[1]);
        int g = pool.newAux();
        out.push_back({-g, -a, b});
        out.push_back({-g, a, -b});
        out.push_back({g, a, b});
        out.push_back({g, -a, -b});
        lit = g;
        break;
      }
      default:
        throw std::logic_error("unhandled circuit op");
    }
    memo.emplace(cur, lit);
    return lit;
  };
  return go(id);
}

}  // namespace fsmmint
