#include <doctest.h>

#include "fsmmint/errors.hpp"
#include "fsmmint/generator.hpp"
#include "fsmmint/ltl.hpp"
#include "fsmmint/verifier.hpp"
#include "support.hpp"

using namespace fsmmint;
using namespace testsupport;

TEST_CASE("parses the response property") {
  Alphabet ab = alphabet22();
  LtlPtr f = parseLtl("G(wasEvent(e1) -> F(wasAction(z1)))", ab);
  REQUIRE(f->kind() == LtlKind::Globally);
  const auto& imp = f->left();
  REQUIRE(imp->kind() == LtlKind::Implies);
  CHECK(imp->left()->kind() == LtlKind::WasEvent);
  CHECK(imp->left()->symbol() == 0);
  REQUIRE(imp->right()->kind() == LtlKind::Finally);
  CHECK(imp->right()->left()->kind() == LtlKind::WasAction);
  CHECK(imp->right()->left()->symbol() == 0);
}

TEST_CASE("parses the first-cycle property") {
  Alphabet ab = alphabet22();
  LtlPtr f = parseLtl("wasAction(z1) && X(wasAction(z1) || wasAction(z2))", ab);
  REQUIRE(f->kind() == LtlKind::And);
  CHECK(f->left()->kind() == LtlKind::WasAction);
  REQUIRE(f->right()->kind() == LtlKind::Next);
  CHECK(f->right()->left()->kind() == LtlKind::Or);
}

TEST_CASE("precedence: implication is lowest, U binds tighter than unary") {
  Alphabet ab = alphabet22();

  LtlPtr a = parseLtl("wasEvent(e1) -> wasEvent(e2) -> wasEvent(e1)", ab);
  REQUIRE(a->kind() == LtlKind::Implies);  // right associative
  CHECK(a->right()->kind() == LtlKind::Implies);

  LtlPtr b = parseLtl("G wasEvent(e1) U wasAction(z1)", ab);
  REQUIRE(b->kind() == LtlKind::Globally);  // G (e1 U z1)
  CHECK(b->left()->kind() == LtlKind::Until);

  LtlPtr c = parseLtl("F wasEvent(e1) && wasEvent(e2)", ab);
  REQUIRE(c->kind() == LtlKind::And);  // (F e1) && e2
  CHECK(c->left()->kind() == LtlKind::Finally);

  LtlPtr d = parseLtl("wasEvent(e1) U wasEvent(e2) U wasAction(z1)", ab);
  REQUIRE(d->kind() == LtlKind::Until);  // right associative
  CHECK(d->right()->kind() == LtlKind::Until);

  LtlPtr e = parseLtl("wasEvent(e1) U !wasAction(z1)", ab);
  REQUIRE(e->kind() == LtlKind::Until);
  CHECK(e->right()->kind() == LtlKind::Not);

  LtlPtr g = parseLtl("!wasEvent(e1) U wasAction(z1)", ab);
  REQUIRE(g->kind() == LtlKind::Not);  // unary is weaker than U
  CHECK(g->left()->kind() == LtlKind::Until);

  CHECK(parseLtl("true", ab)->kind() == LtlKind::True);
  CHECK(parseLtl("false", ab)->kind() == LtlKind::False);
}

TEST_CASE("parse errors carry a position; unknown symbols are flagged") {
  Alphabet ab = alphabet22();
  CHECK_THROWS_AS(parseLtl("wasEvent(e9)", ab), UnknownSymbolError);
  CHECK_THROWS_AS(parseLtl("wasAction(e1)", ab), UnknownSymbolError);

  try {
    parseLtl("G (wasEvent(e1) ->", ab);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position >= 17);
  }
  CHECK_THROWS_AS(parseLtl("wasEvent(e1) wasEvent(e2)", ab), ParseError);
  CHECK_THROWS_AS(parseLtl("", ab), ParseError);
  CHECK_THROWS_AS(parseLtl("G | wasEvent(e1)", ab), ParseError);
}

TEST_CASE("NNF of the bounded-response negation") {
  Alphabet ab = alphabet22();
  LtlPtr f = parseLtl("G(wasAction(z2) -> X wasAction(z1))", ab);
  LtlPtr nnf = toNnf(ltl::negation(f));
  // F(wasAction(z2) && X !wasAction(z1))
  LtlPtr expected = ltl::finally_(ltl::conjunction(
      ltl::wasAction(1), ltl::next(ltl::negation(ltl::wasAction(0)))));
  CHECK(structurallyEqual(nnf, expected));
  CHECK(isNnf(nnf));
}

TEST_CASE("NNF dualities") {
  using namespace ltl;
  LtlPtr p = wasEvent(0), q = wasAction(0);

  CHECK(structurallyEqual(toNnf(negation(negation(p))), p));
  CHECK(structurallyEqual(toNnf(negation(until(p, q))),
                          release(negation(p), negation(q))));
  CHECK(structurallyEqual(toNnf(negation(release(p, q))),
                          until(negation(p), negation(q))));
  CHECK(structurallyEqual(toNnf(negation(next(p))), next(negation(p))));
  CHECK(structurallyEqual(toNnf(negation(globally(p))), finally_(negation(p))));
  CHECK(structurallyEqual(toNnf(negation(finally_(p))), globally(negation(p))));
  CHECK(structurallyEqual(toNnf(negation(trueFormula())), falseFormula()));
}

namespace {

LtlPtr randomFormula(Rng& rng, int depth, int events, int actions) {
  using namespace ltl;
  if (depth == 0 || uniformInt(rng, 4) == 0) {
    switch (uniformInt(rng, 4)) {
      case 0: return wasEvent(static_cast<int>(uniformInt(rng, events)));
      case 1: return wasAction(static_cast<int>(uniformInt(rng, actions)));
      case 2: return trueFormula();
      default: return falseFormula();
    }
  }
  auto sub = [&]() { return randomFormula(rng, depth - 1, events, actions); };
  switch (uniformInt(rng, 9)) {
    case 0: return negation(sub());
    case 1: return conjunction(sub(), sub());
    case 2: return disjunction(sub(), sub());
    case 3: return implication(sub(), sub());
    case 4: return next(sub());
    case 5: return globally(sub());
    case 6: return finally_(sub());
    case 7: return until(sub(), sub());
    default: return release(sub(), sub());
  }
}

}  // namespace

TEST_CASE("toNnf is idempotent and parse/print round-trips") {
  Alphabet ab = alphabet22();
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    LtlPtr f = randomFormula(rng, 4, 2, 2);
    LtlPtr nnf = toNnf(f);
    CHECK(isNnf(nnf));
    CHECK(structurallyEqual(toNnf(nnf), nnf));

    LtlPtr reparsed = parseLtl(printLtl(f, ab), ab);
    CHECK(structurallyEqual(reparsed, f));
  }
}

TEST_CASE("toNnf preserves the verifier verdict on random small FSMs") {
  Rng rng(77);
  InstanceSpec spec;
  spec.maxStates = 3;
  spec.eventCount = 2;
  spec.actionCount = 2;
  for (int trial = 0; trial < 100; ++trial) {
    Fsm fsm = randomFsm(spec, rng);
    LtlPtr f = randomFormula(rng, 4, 2, 2);
    bool before = modelCheck(fsm, {f}).front().holds;
    bool after = modelCheck(fsm, {toNnf(f)}).front().holds;
    CHECK(before == after);
  }
}

TEST_CASE("conjoin folds the empty list to true") {
  CHECK(ltl::conjoin({})->kind() == LtlKind::True);
  auto two = ltl::conjoin({ltl::wasEvent(0), ltl::wasEvent(1)});
  CHECK(two->kind() == LtlKind::And);
}
