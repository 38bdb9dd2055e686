#include "doctest.h"

#include <random>

#include "levels/config.hpp"
#include "levels/hfset.hpp"
#include "levels/logic/eval.hpp"
#include "levels/logic/formula.hpp"
#include "support.hpp"

using namespace levels;
using namespace levels::logic;

namespace {

Formula P(const char* s) { return parse_formula(s); }

EpsilonStructure hf_structure(const std::vector<HFSet>& sets) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    labels.push_back(to_string(sets[a]));
    for (std::size_t x = 0; x < sets.size(); ++x)
      if (member(sets[x], sets[a])) pairs.emplace_back(x, a);
  }
  return make_epsilon(labels, pairs);
}

// The ∈-structure on {0..k-1} whose relation is the bit pattern `code`:
// bit (a*k + x) set iff x ∈ a.
EpsilonStructure coded_structure(std::size_t k, std::uint64_t code) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("e" + std::to_string(i));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t x = 0; x < k; ++x)
      if (code >> (a * k + x) & 1u) pairs.emplace_back(x, a);
  return make_epsilon(labels, pairs);
}

constexpr EvalOptions kNaive{false, false};

// Random one-sorted formula over the free variables a, b.
Formula random_formula(std::mt19937_64& rng, int depth, std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, 99);
  auto var = [&] { return vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]; };
  const int r = pick(rng);
  if (depth == 0 || r < 30) {
    const int a = pick(rng) % 8;
    const std::vector<std::string> unary = {"Trans", "Potent", "Hist", "Lev", "BHist", "BLev", "Helow", "Empty"};
    const std::vector<std::string> binary = {"Sub", "CSub", "IsPot", "IsAcc", "IsBPot", "Compl"};
    switch (a) {
      case 0:
      case 1: return in(var(), var());
      case 2: return not_in(var(), var());
      case 3: return eq(var(), var());
      case 4: return def(unary[static_cast<std::size_t>(pick(rng)) % unary.size()], {var()});
      default: return def(binary[static_cast<std::size_t>(pick(rng)) % binary.size()], {var(), var()});
    }
  }
  if (r < 40) return lnot(random_formula(rng, depth - 1, vars));
  if (r < 55) return land({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
  if (r < 65) return lor({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
  if (r < 72) return implies(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
  if (r < 78) return iff(random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars));
  const std::string x = "v" + std::to_string(vars.size());
  vars.push_back(x);
  Formula body = random_formula(rng, depth - 1, vars);
  vars.pop_back();
  // Bias towards the shapes that the fast paths recognise.
  if (r < 84) return forall(x, implies(in(x, var()), body));
  if (r < 88) return exists(x, land({in(x, var()), body}));
  if (r < 94) return forall(x, body);
  return exists(x, body);
}

}  // namespace

TEST_CASE("s-expression syntax round-trips exactly") {
  const char* samples[] = {
      "(forall x (not (in x a)))",
      "(dia (exists x (in x a)))",
      "(past (future (E! x)))",
      "(forallP P (implies (P x) (P y)))",
      "(forallP (F x (in x a)) (exists b (forall x (iff (in x b) (F x)))))",
      "(forallF (G x (in x a)) (exists s (and (Lev s) (forall x (implies (in x a) (in (G x) s))))))",
      "(forall-stage s (exists-stage t (before s t)))",
      "(and (low x) (high y) (at x s) (notin x y) true false)",
      "(always-past (always-future (box (eq x y))))",
      "(Sub a b)",
  };
  for (const char* s : samples) CHECK(to_sexpr(parse_formula(s)) == s);

  std::mt19937_64 rng(testsupport::kSeed);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> vars = {"a", "b"};
    const Formula f = random_formula(rng, 4, vars);
    const std::string text = to_sexpr(f);
    CHECK(parse_formula(text) == f);
    CHECK(to_sexpr(parse_formula(text)) == text);
  }
}

TEST_CASE("parser reports malformed input with a position") {
  CHECK_THROWS_AS(parse_formula("(in x"), ParseError);
  CHECK_THROWS_AS(parse_formula("(frobnicate x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(in x y z)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(in x y))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(Sub x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(in (f x) y)"), ParseError);  // f not bound
  try {
    parse_formula("(and (in x y) (bogus))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 15);
  }
}

TEST_CASE("substitution avoids capture and respects shadowing") {
  const Formula f = P("(exists y (in x y))");
  const Formula g = substitute(f, {{"x", Term("y")}});
  CHECK(to_sexpr(g) == "(exists y1 (in y y1))");
  const Formula h = P("(and (in x a) (forall x (in x a)))");
  CHECK(to_sexpr(substitute(h, {{"x", Term("b")}})) == "(and (in b a) (forall x (in x a)))");
  CHECK(free_vars(P("(forall x (in x a))")) == std::set<std::string>{"a"});
  CHECK(free_vars(P("(forallP (F x (in x a)) (F y))")) == std::set<std::string>{"a", "y"});
  CHECK(fresh_name("x", {"x", "x1", "x2"}) == "x3");
}

TEST_CASE("definition expansion yields primitive formulas") {
  const Formula f = expand_definitions(P("(Lev s)"));
  CHECK(to_sexpr(f).find("Lev") == std::string::npos);
  CHECK(to_sexpr(f).find("Hist") == std::string::npos);
  const std::set<std::string> keep = {"Sub"};
  CHECK(to_sexpr(expand_definitions(P("(Trans a)"), &keep)) == "(forall x (implies (in x a) (Sub x a)))");
}

TEST_CASE("evaluation examples") {
  const auto e = hf_structure({HFSet()});
  CHECK(eval(e, P("(forall x (forall y (notin x y)))")));
  const auto v3 = hf_structure(testsupport::naive_vn(3));
  CHECK(eval(v3, P("(exists x (Empty x))")));
  CHECK_FALSE(eval(v3, P("(forall x (Empty x))")));
  CHECK(eval(v3, P("(forall a (forall b (implies (forall x (iff (in x a) (in x b))) (eq a b))))")));
  // Separation with full second-order semantics.
  CHECK(eval(v3, P("(forallP F (forall a (exists b (forall x (iff (in x b) (and (F x) (in x a)))))))")));
  CHECK(eval(v3, P("(forall a (exists s (and (Lev s) (Sub a s))))")));
  CHECK_THROWS_AS(eval(v3, P("(in x y)")), DomainError);
  CHECK(eval(v3, P("(in x y)"), {{"x", std::size_t{0}}, {"y", std::size_t{1}}}));
  CHECK_THROWS_AS(eval(v3, P("(dia (E! x))"), {{"x", std::size_t{0}}}), DomainError);
}

TEST_CASE("kernels agree with expanded definitions on every three-element structure") {
  for (std::uint64_t code = 0; code < 512; ++code) {
    const Structure s = coded_structure(3, code);
    Evaluator fast(s);
    Evaluator slow(s, kNaive);
    for (const std::string& name : kernel_names()) {
      const Definition* d = find_definition(name);
      REQUIRE(d != nullptr);
      std::vector<Term> args;
      for (std::size_t i = 0; i < d->params.size(); ++i) args.emplace_back(i == 0 ? "p" : "q");
      const Formula f = def(name, args);
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q) {
          const Assignment asg = {{"p", p}, {"q", q}};
          const bool a = fast.eval(f, asg);
          const bool b = slow.eval(f, asg);
          if (a != b) FAIL_CHECK(name << " disagrees at code " << code << " p=" << p << " q=" << q);
        }
    }
  }
}

TEST_CASE("kernels agree with hfset predicates on V_4") {
  const auto v4 = testsupport::naive_vn(4);
  const Structure s = hf_structure(v4);
  Evaluator ev(s);
  for (std::size_t i = 0; i < v4.size(); ++i) {
    const Assignment a = {{"p", i}};
    CHECK(ev.eval(P("(Trans p)"), a) == is_transitive(v4[i]));
    CHECK(ev.eval(P("(Potent p)"), a) == is_potent(v4[i]));
    CHECK(ev.eval(P("(Hist p)"), a) == is_history(v4[i]));
    CHECK(ev.eval(P("(Lev p)"), a) == is_level(v4[i]));
  }
}

TEST_CASE("fast paths and kernels agree with naive evaluation on random formulas") {
  std::mt19937_64 rng(testsupport::kSeed + 1);
  std::uniform_int_distribution<std::uint64_t> codes;
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const std::size_t k = 3 + static_cast<std::size_t>(round % 3);
    const Structure s = coded_structure(k, codes(rng) & ((std::uint64_t{1} << (k * k)) - 1));
    Evaluator fast(s);
    Evaluator slow(s, kNaive);
    for (int i = 0; i < 25; ++i) {
      std::vector<std::string> vars = {"a", "b"};
      const Formula f = random_formula(rng, 4, vars);
      const Assignment asg = {{"a", std::size_t{0}}, {"b", k - 1}};
      const bool x = fast.eval(f, asg);
      const bool y = slow.eval(f, asg);
      if (x != y) FAIL_CHECK(to_sexpr(f));
      ++checked;
    }
  }
  CHECK(checked == 1500);
}

TEST_CASE("comprehension lookup agrees with search") {
  const auto v3 = hf_structure(testsupport::naive_vn(3));
  const char* fs[] = {
      "(forall a (exists b (forall x (iff (in x b) (in x a)))))",
      "(forall a (exists b (forall x (iff (notin x b) (in x a)))))",
      "(forall a (exists b (and (notin b b) (forall x (iff (in x b) (and (in x a) (not (Empty x))))))))",
      "(exists b (forall x (iff (in x b) (eq x x))))",
      "(forallP F (forall a (exists b (forall x (iff (and (F x) (in x a)) (in x b))))))",
  };
  for (const char* t : fs) CHECK(eval(v3, P(t)) == eval(v3, P(t), {}, {}, kNaive));
}

TEST_CASE("counterexamples bind the universal prefix and re-verify") {
  const auto v3 = hf_structure(testsupport::naive_vn(3));
  const Formula f = P("(forall a (forall b (implies (in a b) (Empty b))))");
  Evaluator ev(v3);
  const auto cex = ev.counterexample(f);
  REQUIRE(cex.has_value());
  CHECK(cex->count("a") == 1);
  CHECK(cex->count("b") == 1);
  const auto [names, matrix] = universal_prefix(f);
  CHECK(names == std::vector<std::string>{"a", "b"});
  CHECK_FALSE(ev.eval(matrix, *cex));
  CHECK_FALSE(ev.counterexample(P("(forall a (exists s (and (Lev s) (Sub a s))))")).has_value());

  // Second-order counterexample: not every property is empty.
  const Formula g = P("(forallP F (forall x (not (F x))))");
  const auto c2 = ev.counterexample(g);
  REQUIRE(c2.has_value());
  CHECK(std::get<Bits>(c2->at("F")).any());
  CHECK_FALSE(ev.eval(universal_prefix(g).second, *c2));
}

TEST_CASE("second-order quantifiers respect bounds and caps") {
  const auto v4 = hf_structure(testsupport::naive_vn(4));
  // Bounded function quantifier over the members of a. A finite hierarchy
  // has no level containing its top-rank sets, so replacement fails.
  CHECK_FALSE(eval(v4, P("(forall a (forallF (G x (in x a)) (exists s (and (Lev s) (forall x (implies (in x a) "
                   "(in (G x) s)))))))")));
  const auto saved = limits().max_so_instances;
  limits().max_so_instances = 1000;
  CHECK_THROWS_AS(eval(v4, P("(forallP F (F x))"), {{"x", std::size_t{0}}}), CapExceeded);
  limits().max_so_instances = saved;
  // {{∅}} is a property of V_2 that no member of V_2 extends.
  const auto v2 = hf_structure(testsupport::naive_vn(2));
  CHECK_FALSE(eval(v2, P("(forallP F (exists a (forall x (iff (F x) (in x a)))))")));
  CHECK(eval(v2, P("(forallP (F x (eq x x)) (implies (not (F x)) (exists a (forall y (iff (F y) (in y a))))))"),
             {{"x", std::size_t{1}}}));
  CHECK_FALSE(eval(v2, P("(existsP F (and (F x) (not (F x))))"), {{"x", std::size_t{1}}}));
}

TEST_CASE("two-sorted evaluation") {
  StageStructure s;
  s.set_labels = {"0", "1"};
  s.stage_labels = {"s0", "s1"};
  s.members = {Bits(2), Bits(2)};
  s.members[1].set(0);  // 0 ∈ 1
  s.before = {Bits(2), Bits(2)};
  s.before[1].set(0);  // s0 < s1
  s.found_at = {Bits(2), Bits(2)};
  s.found_at[0].set(0);
  s.found_at[1].set(1);
  CHECK(eval(s, P("(forall x (exists-stage r (at x r)))")));
  CHECK(eval(s, P("(forall-stage r (forall-stage t (implies (before r t) (not (before t r)))))")));
  CHECK(eval(s, P("(forall x (forall-stage t (implies (at x t) (forall y (implies (in y x) (FoundBefore y t))))))")));
  CHECK_THROWS_AS(eval(s, P("(forall x (before x x))")), DomainError);
  CHECK_THROWS_AS(eval(s, P("(forall x (low x))")), DomainError);
}

TEST_CASE("Kripke semantics with variable domains") {
  // Two worlds w0 < w1; 0 exists throughout, 1 only at w1 with 0 ∈ 1.
  KripkeStructure k;
  k.world_labels = {"w0", "w1"};
  k.before = {Bits(2), Bits(2)};
  k.before[1].set(0);
  k.labels = {"e", "s"};
  k.domain = {Bits(2), Bits(2)};
  k.domain[0].set(0);
  k.domain[1].set(0);
  k.domain[1].set(1);
  k.members = {std::vector<Bits>(2, Bits(2)), std::vector<Bits>(2, Bits(2))};
  k.members[1][1].set(0);
  const Assignment s1 = {{"x", std::size_t{1}}};
  CHECK_FALSE(eval(k, P("(E! x)"), s1, 0));
  CHECK(eval(k, P("(E! x)"), s1, 1));
  CHECK_FALSE(eval(k, P("(eq x x)"), s1, 0));
  CHECK(eval(k, P("(future (E! x))"), s1, 0));
  CHECK(eval(k, P("(past (not (E! x)))"), s1, 1));
  CHECK(eval(k, P("(dia (exists y (exists z (in y z))))"), {}, 0));
  CHECK_FALSE(eval(k, P("(exists y (exists z (in y z)))"), {}, 0));
  CHECK(eval(k, P("(forall x (always-future (E! x)))"), {}, 0));
  CHECK(eval(k, P("(box (forall x (always-future (E! x))))"), {}, 1));
  // Predicate atoms need existence too.
  CHECK_FALSE(eval(k, P("(existsP F (F x))"), s1, 0));
  CHECK(eval_everywhere(k, P("(forall a (forall x (implies (in x a) (past (E! x)))))")));
  CHECK_THROWS_AS(eval(k, P("(E! x)"), s1), DomainError);

  auto bad = k;
  bad.before[0].set(1);  // cycle
  CHECK_THROWS_AS(validate(bad), DomainError);
  const FrameReport r = frame_report(k);
  CHECK(r.transitive);
  CHECK(r.past_directed);
  CHECK(r.linear);
}

TEST_CASE("frame report detects failures of directedness and linearity") {
  // Two minimal worlds below a common top: connected, not past-directed.
  KripkeStructure k;
  k.world_labels = {"u", "v", "t"};
  k.before = {Bits(3), Bits(3), Bits(3)};
  k.before[2].set(0);
  k.before[2].set(1);
  k.labels = {"e"};
  k.domain = {Bits(1), Bits(1), Bits(1)};
  k.members = {std::vector<Bits>(1, Bits(1)), std::vector<Bits>(1, Bits(1)), std::vector<Bits>(1, Bits(1))};
  const FrameReport r = frame_report(k);
  CHECK(r.connected);
  CHECK_FALSE(r.past_directed);
  CHECK_FALSE(r.linear);
  CHECK_FALSE(r.first_failure.empty());
}
