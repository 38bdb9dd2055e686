#include "doctest.h"

#include "levels/config.hpp"
#include "levels/logic/eval.hpp"
#include "levels/logic/translate.hpp"
#include "levels/models.hpp"

using namespace levels;
using namespace levels::logic;
using levels::models::blt_universe;
using levels::models::lt_universe;
using levels::models::potentialize;

namespace {

Formula P(const char* s) { return parse_formula(s); }

const std::vector<const char*> kFirstOrder = {
    "(exists x (eq x x))",
    "(forall x (forall y (notin x y)))",
    "(exists x (forall y (notin y x)))",
    "(forall a (exists b (in a b)))",
    "(forall a (forall b (implies (forall x (iff (in x a) (in x b))) (eq a b))))",
    "(exists s (and (Lev s) (forall x (Sub x s))))",
    "(forall a (exists s (and (Lev s) (Sub a s))))",
    "(exists a (exists b (and (in a b) (not (eq a b)))))",
    "(forall a (notin a a))",
    "(exists a (and (Trans a) (not (Empty a))))",
    "(forall a (forall b (exists c (and (in a c) (in b c)))))",
    "(exists s (and (Lev s) (exists t (and (Lev t) (in s t)))))",
};

const std::vector<const char*> kModal = {
    "(dia (forall x (forall y (notin x y))))",
    "(forall x (always-future (E! x)))",
    "(past (exists x (eq x x)))",
    "(future (exists x (exists y (in x y))))",
    "(box (forall a (forall x (implies (in x a) (past (E! x))))))",
    "(exists a (future (exists b (in a b))))",
    "(always-past (exists x (forall y (notin y x))))",
    "(forall a (box (implies (E! a) (dia (exists b (in a b))))))",
    "(dia (exists s (Maxlev s)))",
    "(forall a (future (exists b (and (in a b) (past (exists c (in c b)))))))",
    "(always-future (exists x (forall y (implies (E! y) (Sub y x)))))",
};

// The duality sample: the BLT axioms and assorted sentences.
std::vector<Formula> duality_sample() {
  std::vector<Formula> out;
  for (const auto& a : models::suite("BLT").axioms) out.push_back(a.formula);
  for (const auto& a : models::suite("BLT-ZF-facts").axioms) out.push_back(a.formula);
  for (const char* s : {"(exists a (in a a))", "(forall a (exists c (Compl c a)))", "(exists s (BLev s))",
                        "(forall a (forall b (exists c (and (in a c) (in b c)))))",
                        "(exists a (forall x (in x a)))", "(forall a (implies (in a a) (exists x (notin x a))))",
                        "(exists a (exists b (and (in a b) (in b a) (not (eq a b)))))",
                        "(forall s (implies (BLev s) (notin s s)))", "(exists a (and (Helow a) (not (Empty a))))",
                        "(forall a (implies (notin a a) (forallP (F x (in x a)) (exists b (forall x (iff (F x) (in x b)))))))",
                        "(forall a (exists b (forall x (iff (in x b) (and (in x a) (notin x x))))))"})
    out.push_back(P(s));
  return out;
}

EpsilonStructure dual(const EpsilonStructure& e) {
  EpsilonStructure d = e;
  for (Bits& m : d.members) m.flip();
  return d;
}

}  // namespace

TEST_CASE("star translation clauses") {
  CHECK(star_st(P("(at x s)")) == P("(Sub x s)"));
  CHECK(star_st(P("(before s t)")) == P("(in s t)"));
  CHECK(star_st(P("(forall-stage s (at x s))")) == P("(forall s (implies (Lev s) (Sub x s)))"));
  CHECK(star_st(P("(exists-stage s (at x s))")) == P("(exists s (and (Lev s) (Sub x s)))"));
  CHECK(star_bst(P("(low x)")) == P("(notin x x)"));
  CHECK(star_bst(P("(high x)")) == P("(in x x)"));
  CHECK(star_bst(P("(at x s)")) == P("(or (Sub x s) (CSub x s))"));
  CHECK_THROWS_AS(star_st(P("(dia (in x y))")), DomainError);
  CHECK_THROWS_AS(star_st(P("(low x)")), DomainError);
}

TEST_CASE("star translation agrees with the stage structures") {
  std::vector<Formula> sample;
  for (const auto& a : models::suite("ST").axioms) sample.push_back(a.formula);
  for (const char* s : {"(exists-stage s (forall a (at a s)))", "(forall-stage s (exists-stage t (before s t)))",
                        "(forall a (forall-stage s (implies (at a s) (forall-stage t (implies (before s t) "
                        "(at a t))))))",
                        "(exists-stage s (forall-stage t (not (before t s))))"})
    sample.push_back(P(s));
  for (std::size_t n = 1; n <= 4; ++n) {
    const EpsilonStructure a = lt_universe(n);
    const StageStructure st = models::st_structure_from_lt(a);
    for (const Formula& f : sample) CHECK_MESSAGE(eval(st, f) == eval(a, star_st(f)), to_sexpr(f));
  }
  std::vector<Formula> bsample;
  for (const auto& a : models::suite("BST").axioms) bsample.push_back(a.formula);
  bsample.push_back(P("(exists-stage s (forall a (implies (high a) (at a s))))"));
  bsample.push_back(P("(forall a (implies (low a) (exists-stage s (and (at a s) (forall x (implies (in x a) "
                      "(exists-stage t (and (before t s) (at x t)))))))))"));
  for (std::size_t n = 1; n <= 3; ++n) {
    const EpsilonStructure b = blt_universe(n);
    const StageStructure st = models::bst_structure_from_blt(b);
    for (const Formula& f : bsample) CHECK_MESSAGE(eval(st, f) == eval(b, star_bst(f)), to_sexpr(f));
  }
}

TEST_CASE("modalization clauses") {
  CHECK(modalize(P("(in x y)")) == P("(dia (in x y))"));
  CHECK(modalize(P("(exists x (eq x x))")) == P("(dia (exists x (dia (eq x x))))"));
  CHECK(modalize(P("(not (in x y))")) == P("(not (dia (in x y)))"));
  CHECK(modalize(P("(forall x (in x y))")) == P("(not (dia (exists x (not (dia (in x y))))))"));
  CHECK_THROWS_AS(modalize(P("(dia (in x y))")), DomainError);
  CHECK_THROWS_AS(modalize(P("(forallP F (F x))")), DomainError);
}

TEST_CASE("modalization is adequate for the flattening") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const KripkeStructure p = potentialize(lt_universe(n));
    const EpsilonStructure flat = models::flatten(p);
    for (const char* s : kFirstOrder) {
      const Formula f = P(s);
      const bool expected = eval(flat, f);
      for (std::size_t w = 0; w < p.worlds(); ++w) CHECK_MESSAGE(eval(p, modalize(f), {}, w) == expected, s);
    }
  }
}

TEST_CASE("levelling clauses") {
  CHECK(levelling(P("(in x y)"), "s") == P("(and (in x y) (Sub y s))"));
  CHECK(levelling(P("(past (in x y))"), "s") ==
        P("(exists t1 (and (Lev t1) (in t1 s) (and (in x y) (Sub y t1))))"));
  CHECK(levelling(P("(exists x (in x y))"), "s") == P("(exists x (and (Sub x s) (and (in x y) (Sub y s))))"));
  CHECK(levelling(P("(dia (dia (E! t1)))"), "s") ==
        P("(exists t2 (and (Lev t2) (exists t3 (and (Lev t3) (and (eq t1 t1) (Sub t1 t3))))))"));
  CHECK_THROWS_AS(levelling(P("(in s y)"), "s"), DomainError);
}

TEST_CASE("levelling is adequate for the potentialization") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const EpsilonStructure a = lt_universe(n);
    const KripkeStructure p = potentialize(a);
    const auto lev = models::levels_of(a);
    REQUIRE(lev.size() == p.worlds());
    for (const char* s : kModal) {
      const Formula lf = levelling(P(s), "lv");
      for (std::size_t w = 0; w < lev.size(); ++w)
        CHECK_MESSAGE(eval(a, lf, {{"lv", lev[w]}}) == eval(p, P(s), {}, w), s << " at " << p.world_labels[w]);
    }
  }
}

TEST_CASE("bullet elimination") {
  CHECK(mlt_bullet(P("(in x y)")) == P("(in x y)"));
  CHECK(mlt_bullet(P("(dia (in x y))")) == P("(dia (in x y))"));
  CHECK(mlt_bullet(P("(past (in x y))")) == P("(exists x1 (dia (and (not (E! x1)) (in x y))))"));
  for (std::size_t n = 1; n <= 3; ++n) {
    const KripkeStructure p = potentialize(lt_universe(n));
    for (const char* s : kModal) {
      const Formula b = mlt_bullet(P(s));
      for (std::size_t w = 0; w < p.worlds(); ++w) CHECK_MESSAGE(eval(p, P(s), {}, w) == eval(p, b, {}, w), s);
    }
  }
}

TEST_CASE("round trips through the modal language") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const EpsilonStructure a = lt_universe(n);
    const KripkeStructure p = potentialize(a);
    const std::size_t top = models::levels_of(a).back();
    for (const char* s : kFirstOrder) {
      const Formula f = P(s);
      CHECK_MESSAGE(eval(a, f) == eval(a, levelling(modalize(f), "lv"), {{"lv", top}}), s);
    }
    const std::size_t last = p.worlds() - 1;
    for (const char* s : kModal) {
      const Formula f = P(s);
      CHECK_MESSAGE(eval(p, f, {}, last) == eval(p, modalize(levelling(f, "lv")), {{"lv", top}}, last), s);
    }
  }
}

TEST_CASE("duality swap") {
  CHECK(dual_swap(P("(in x y)")) == P("(notin x y)"));
  for (const Formula& f : duality_sample()) CHECK(dual_swap(dual_swap(f)) == expand_definitions(f));
  CHECK_THROWS_AS(dual_swap(P("(at x s)")), DomainError);
  const auto sample = duality_sample();
  REQUIRE(sample.size() >= 20);
  for (std::size_t n = 1; n <= 2; ++n) {
    const EpsilonStructure u = blt_universe(n);
    const EpsilonStructure d = dual(u);
    for (const Formula& f : sample) {
      const bool direct = eval(u, f);
      CHECK_MESSAGE(direct == eval(u, dual_swap(f)), to_sexpr(f));
      CHECK_MESSAGE(eval(u, dual_swap(f)) == eval(d, f), to_sexpr(f));
    }
  }
  const EpsilonStructure u3 = blt_universe(3);
  const EpsilonStructure d3 = dual(u3);
  for (const Formula& f : sample) CHECK_MESSAGE(eval(u3, f) == eval(d3, f), to_sexpr(f));
}

TEST_CASE("helow relativization") {
  CHECK(helow_relativize(P("(exists x (in x y))")) == P("(exists x (and (Helow x) (in x y)))"));
  CHECK(helow_relativize(P("(forall x (in x y))")) == P("(forall x (implies (Helow x) (in x y)))"));
}
