#include "fsmmint/ltl.hpp"

#include <cctype>

#include "fsmmint/errors.hpp"

namespace fsmmint {

namespace ltl {

namespace {
LtlPtr make(LtlKind kind, int symbol, LtlPtr left, LtlPtr right) {
  return std::make_shared<const Ltl>(kind, symbol, std::move(left), std::move(right));
}
}  // namespace

LtlPtr trueFormula() {
  static const LtlPtr f = make(LtlKind::True, -1, nullptr, nullptr);
  return f;
}

LtlPtr falseFormula() {
  static const LtlPtr f = make(LtlKind::False, -1, nullptr, nullptr);
  return f;
}

LtlPtr wasEvent(int event) { return make(LtlKind::WasEvent, event, nullptr, nullptr); }
LtlPtr wasAction(int action) { return make(LtlKind::WasAction, action, nullptr, nullptr); }
LtlPtr negation(LtlPtr f) { return make(LtlKind::Not, -1, std::move(f), nullptr); }
LtlPtr conjunction(LtlPtr a, LtlPtr b) { return make(LtlKind::And, -1, std::move(a), std::move(b)); }
LtlPtr disjunction(LtlPtr a, LtlPtr b) { return make(LtlKind::Or, -1, std::move(a), std::move(b)); }
LtlPtr implication(LtlPtr a, LtlPtr b) { return make(LtlKind::Implies, -1, std::move(a), std::move(b)); }
LtlPtr next(LtlPtr f) { return make(LtlKind::Next, -1, std::move(f), nullptr); }
LtlPtr globally(LtlPtr f) { return make(LtlKind::Globally, -1, std::move(f), nullptr); }
LtlPtr finally_(LtlPtr f) { return make(LtlKind::Finally, -1, std::move(f), nullptr); }
LtlPtr until(LtlPtr a, LtlPtr b) { return make(LtlKind::Until, -1, std::move(a), std::move(b)); }
LtlPtr release(LtlPtr a, LtlPtr b) { return make(LtlKind::Release, -1, std::move(a), std::move(b)); }

LtlPtr conjoin(const std::vector<LtlPtr>& formulas) {
  if (formulas.empty()) return trueFormula();
  LtlPtr acc = formulas.front();
  for (std::size_t i = 1; i < formulas.size(); ++i)
    acc = conjunction(acc, formulas[i]);
  return acc;
}

}  // namespace ltl

bool structurallyEqual(const LtlPtr& a, const LtlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind() || a->symbol() != b->symbol()) return false;
  return structurallyEqual(a->left(), b->left()) &&
         structurallyEqual(a->right(), b->right());
}

bool isNnf(const LtlPtr& f) {
  if (!f) return true;
  switch (f->kind()) {
    case LtlKind::Implies:
      return false;
    case LtlKind::Not: {
      auto k = f->left()->kind();
      return k == LtlKind::WasEvent || k == LtlKind::WasAction;
    }
    default:
      return isNnf(f->left()) && isNnf(f->right());
  }
}

namespace {

LtlPtr nnf(const LtlPtr& f, bool negated) {
  using namespace ltl;
  switch (f->kind()) {
    case LtlKind::True:
      return negated ? falseFormula() : trueFormula();
    case LtlKind::False:
      return negated ? trueFormula() : falseFormula();
    case LtlKind::WasEvent:
    case LtlKind::WasAction:
      return negated ? negation(f) : f;
    case LtlKind::Not:
      return nnf(f->left(), !negated);
    case LtlKind::And:
      return negated ? disjunction(nnf(f->left(), true), nnf(f->right(), true))
                     : conjunction(nnf(f->left(), false), nnf(f->right(), false));
    case LtlKind::Or:
      return negated ? conjunction(nnf(f->left(), true), nnf(f->right(), true))
                     : disjunction(nnf(f->left(), false), nnf(f->right(), false));
    case LtlKind::Implies:
      // a -> b == !a || b
      return negated ? conjunction(nnf(f->left(), false), nnf(f->right(), true))
                     : disjunction(nnf(f->left(), true), nnf(f->right(), false));
    case LtlKind::Next:
      return next(nnf(f->left(), negated));
    case LtlKind::Globally:
      return negated ? finally_(nnf(f->left(), true)) : globally(nnf(f->left(), false));
    case LtlKind::Finally:
      return negated ? globally(nnf(f->left(), true)) : finally_(nnf(f->left(), false));
    case LtlKind::Until:
      return negated ? release(nnf(f->left(), true), nnf(f->right(), true))
                     : until(nnf(f->left(), false), nnf(f->right(), false));
    case LtlKind::Release:
      return negated ? until(nnf(f->left(), true), nnf(f->right(), true))
                     : release(nnf(f->left(), false), nnf(f->right(), false));
  }
  throw std::logic_error("unhandled LTL kind");
}

}  // namespace

LtlPtr toNnf(const LtlPtr& f) { return nnf(f, false); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Precedence levels, low to high; used to decide parenthesization.
int precedence(LtlKind kind) {
  switch (kind) {
    case LtlKind::Implies: return 1;
    case LtlKind::Or: return 2;
    case LtlKind::And: return 3;
    case LtlKind::Not:
    case LtlKind::Next:
    case LtlKind::Globally:
    case LtlKind::Finally: return 4;
    case LtlKind::Until:
    case LtlKind::Release: return 5;
    default: return 6;
  }
}

void print(const LtlPtr& f, const Alphabet& ab, int parentPrec, std::string& out) {
  int prec = precedence(f->kind());
  bool parens = prec < parentPrec;
  if (parens) out += '(';
  switch (f->kind()) {
    case LtlKind::True: out += "true"; break;
    case LtlKind::False: out += "false"; break;
    case LtlKind::WasEvent:
      out += "wasEvent(" + ab.eventName(f->symbol()) + ")";
      break;
    case LtlKind::WasAction:
      out += "wasAction(" + ab.actionName(f->symbol()) + ")";
      break;
    case LtlKind::Not:
      out += '!';
      print(f->left(), ab, prec + 1, out);
      break;
    case LtlKind::Next:
      out += "X ";
      print(f->left(), ab, prec, out);
      break;
    case LtlKind::Globally:
      out += "G ";
      print(f->left(), ab, prec, out);
      break;
    case LtlKind::Finally:
      out += "F ";
      print(f->left(), ab, prec, out);
      break;
    case LtlKind::And:
      print(f->left(), ab, prec, out);
      out += " && ";
      print(f->right(), ab, prec + 1, out);
      break;
    case LtlKind::Or:
      print(f->left(), ab, prec, out);
      out += " || ";
      print(f->right(), ab, prec + 1, out);
      break;
    case LtlKind::Implies:
      print(f->left(), ab, prec + 1, out);
      out += " -> ";
      print(f->right(), ab, prec, out);
      break;
    case LtlKind::Until:
      print(f->left(), ab, prec + 1, out);
      out += " U ";
      print(f->right(), ab, prec, out);
      break;
    case LtlKind::Release:
      print(f->left(), ab, prec + 1, out);
      out += " R ";
      print(f->right(), ab, prec, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string printLtl(const LtlPtr& f, const Alphabet& alphabet) {
  std::string out;
  print(f, alphabet, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Type { Ident, LParen, RParen, Arrow, OrOp, AndOp, Bang, End };
  Type type;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Type::End, "", start};
      return;
    }
    char c = text_[pos_];
    if (c == '(') { ++pos_; current_ = {Token::Type::LParen, "(", start}; return; }
    if (c == ')') { ++pos_; current_ = {Token::Type::RParen, ")", start}; return; }
    if (c == '!') { ++pos_; current_ = {Token::Type::Bang, "!", start}; return; }
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        pos_ += 2;
        current_ = {Token::Type::Arrow, "->", start};
        return;
      }
      throw ParseError("expected '->'", start);
    }
    if (c == '|') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '|') {
        pos_ += 2;
        current_ = {Token::Type::OrOp, "||", start};
        return;
      }
      throw ParseError("expected '||'", start);
    }
    if (c == '&') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '&') {
        pos_ += 2;
        current_ = {Token::Type::AndOp, "&&", start};
        return;
      }
      throw ParseError("expected '&&'", start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_ = {Token::Type::Ident, std::string(text_.substr(pos_, end - pos_)), start};
      pos_ = end;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Type::End, "", 0};
};

class Parser {
 public:
  Parser(std::string_view text, const Alphabet& alphabet)
      : lexer_(text), alphabet_(alphabet) {}

  LtlPtr parse() {
    LtlPtr f = parseImplies();
    if (lexer_.peek().type != Token::Type::End)
      throw ParseError("trailing input after formula", lexer_.peek().pos);
    return f;
  }

 private:
  LtlPtr parseImplies() {
    LtlPtr lhs = parseOr();
    if (lexer_.peek().type == Token::Type::Arrow) {
      lexer_.take();
      return ltl::implication(std::move(lhs), parseImplies());
    }
    return lhs;
  }

  LtlPtr parseOr() {
    LtlPtr lhs = parseAnd();
    while (lexer_.peek().type == Token::Type::OrOp) {
      lexer_.take();
      lhs = ltl::disjunction(std::move(lhs), parseAnd());
    }
    return lhs;
  }

  LtlPtr parseAnd() {
    LtlPtr lhs = parseUnary();
    while (lexer_.peek().type == Token::Type::AndOp) {
      lexer_.take();
      lhs = ltl::conjunction(std::move(lhs), parseUnary());
    }
    return lhs;
  }

  LtlPtr parseUnary() {
    const Token& t = lexer_.peek();
    if (t.type == Token::Type::Bang) {
      lexer_.take();
      return ltl::negation(parseUnary());
    }
    if (t.type == Token::Type::Ident && t.text.size() == 1) {
      if (t.text == "X") { lexer_.take(); return ltl::next(parseUnary()); }
      if (t.text == "G") { lexer_.take(); return ltl::globally(parseUnary()); }
      if (t.text == "F") { lexer_.take(); return ltl::finally_(parseUnary()); }
    }
    return parseUntil();
  }

  // U and R bind tighter than the unary operators and associate to the right;
  // their right operand admits unary prefixes so `p U !q` parses.
  LtlPtr parseUntil() {
    LtlPtr lhs = parsePrimary();
    const Token& t = lexer_.peek();
    if (t.type == Token::Type::Ident && (t.text == "U" || t.text == "R")) {
      bool isUntil = t.text == "U";
      lexer_.take();
      LtlPtr rhs = parseUnary();
      return isUntil ? ltl::until(std::move(lhs), std::move(rhs))
                     : ltl::release(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  LtlPtr parsePrimary() {
    Token t = lexer_.take();
    switch (t.type) {
      case Token::Type::LParen: {
        LtlPtr f = parseImplies();
        Token close = lexer_.take();
        if (close.type != Token::Type::RParen)
          throw ParseError("expected ')'", close.pos);
        return f;
      }
      case Token::Type::Ident:
        if (t.text == "true") return ltl::trueFormula();
        if (t.text == "false") return ltl::falseFormula();
        if (t.text == "wasEvent") return parseAtom(t, true);
        if (t.text == "wasAction") return parseAtom(t, false);
        throw ParseError("unexpected identifier '" + t.text + "'", t.pos);
      default:
        throw ParseError("expected a formula", t.pos);
    }
  }

  LtlPtr parseAtom(const Token& head, bool isEvent) {
    Token open = lexer_.take();
    if (open.type != Token::Type::LParen)
      throw ParseError("expected '(' after " + head.text, open.pos);
    Token arg = lexer_.take();
    if (arg.type != Token::Type::Ident)
      throw ParseError("expected a symbol in " + head.text, arg.pos);
    Token close = lexer_.take();
    if (close.type != Token::Type::RParen)
      throw ParseError("expected ')'", close.pos);
    if (isEvent) {
      auto id = alphabet_.eventId(arg.text);
      if (!id) throw UnknownSymbolError("unknown event: " + arg.text);
      return ltl::wasEvent(*id);
    }
    auto id = alphabet_.actionId(arg.text);
    if (!id) throw UnknownSymbolError("unknown action: " + arg.text);
    return ltl::wasAction(*id);
  }

  Lexer lexer_;
  const Alphabet& alphabet_;
};

}  // namespace

LtlPtr parseLtl(std::string_view text, const Alphabet& alphabet) {
  return Parser(text, alphabet).parse();
}

}  // namespace fsmmint
