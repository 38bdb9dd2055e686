#include "doctest.h"

#include <random>
#include <set>

#include "levels/config.hpp"
#include "levels/models.hpp"
#include "support.hpp"

using namespace levels;
using namespace levels::models;
using logic::Bits;

namespace {

void check_witnesses(const Structure& s, const AxiomSuite& suite, const CheckReport& r) {
  for (const Verdict& v : r.verdicts) {
    if (v.holds) continue;
    REQUIRE(v.witness.has_value());
    CHECK_MESSAGE(witness_refutes(s, suite, v), suite.name << " " << v.axiom << " " << v.detail);
  }
}

CheckReport check(const Structure& s, const char* name) {
  const CheckReport r = check_axioms(s, suite(name));
  check_witnesses(s, suite(name), r);
  return r;
}

// Number of isomorphism classes of binary relations on k points, counted by
// orbit enumeration with an explicit visited set.
std::size_t orbit_count(std::size_t k) {
  const std::uint64_t total = std::uint64_t{1} << (k * k);
  std::vector<std::size_t> perm(k);
  std::vector<char> seen(total, 0);
  std::size_t classes = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    if (seen[code]) continue;
    ++classes;
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    do {
      std::uint64_t img = 0;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t x = 0; x < k; ++x)
          if (code >> (a * k + x) & 1u) img |= std::uint64_t{1} << (perm[a] * k + perm[x]);
      seen[img] = 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return classes;
}

// The four-world non-linear frame w < v < u, w < t, w < u, with domains
// {∅}, P{∅}, P{∅}, PP{∅} and real membership.
KripkeStructure branching_frame() {
  KripkeStructure k;
  const std::vector<HFSet> sets = lt_sets(3);
  for (const HFSet& x : sets) k.labels.push_back(to_string(x));
  k.world_labels = {"w", "v", "t", "u"};
  k.before.assign(4, Bits(4));
  k.before[1].set(0);
  k.before[2].set(0);
  k.before[3].set(0);
  k.before[3].set(1);
  auto upto = [&](std::size_t depth) {
    Bits b(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i].depth() < depth) b.set(i);
    return b;
  };
  k.domain = {upto(1), upto(2), upto(2), upto(3)};
  for (std::size_t w = 0; w < 4; ++w) {
    std::vector<Bits> mem(sets.size(), Bits(sets.size()));
    for (std::size_t a = 0; a < sets.size(); ++a)
      for (std::size_t x = 0; x < sets.size(); ++x)
        if (k.domain[w][a] && k.domain[w][x] && member(sets[x], sets[a])) mem[a].set(x);
    k.members.push_back(std::move(mem));
  }
  return k;
}

}  // namespace

TEST_CASE("universe sizes agree with the closed forms") {
  CHECK(lt_universe(3).size() == 4);
  CHECK(blt_universe(2).size() == 8);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(closed_form_count(n, Kind::LT) == materialized_count(n, Kind::LT));
  for (std::size_t n = 1; n <= 3; ++n) CHECK(closed_form_count(n, Kind::BLT) == materialized_count(n, Kind::BLT));
  CHECK(closed_form_count(4, Kind::LT) == 16);
  CHECK(closed_form_count(5, Kind::LT) == 65536);
  CHECK(closed_form_count(3, Kind::BLT) == 512);
  CHECK(boost::multiprecision::msb(closed_form_count(6, Kind::LT)) == 65536);
  CHECK(boost::multiprecision::msb(closed_form_count(4, Kind::BLT)) == 513);
  CHECK_THROWS_AS(closed_form_count(7, Kind::LT), CapExceeded);
  CHECK_THROWS_AS(lt_universe(5), CapExceeded);
  CHECK_THROWS_AS(blt_universe(4), CapExceeded);
}

TEST_CASE("levels are well-ordered and counted by height") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const EpsilonStructure v = lt_universe(n);
    const auto lev = levels_of(v);
    CHECK(lev.size() == n);
    CHECK(well_ordered_by_membership(v, lev));
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    const EpsilonStructure u = blt_universe(n);
    const auto lev = blevels_of(u);
    CHECK(lev.size() == n);
    CHECK(well_ordered_by_membership(u, lev));
  }
}

TEST_CASE("LT holds on V_n and height axioms fail on finite models") {
  for (std::size_t n = 1; n <= 4; ++n) CHECK(check(lt_universe(n), "LT").all_hold());
  const CheckReport endless = check(lt_universe(3), "LT+Endless");
  REQUIRE(endless.find("Endless") != nullptr);
  CHECK_FALSE(endless.find("Endless")->holds);
  CHECK(endless.find("Endless")->detail == "s={{},{{}}}");
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK_FALSE(check(lt_universe(n), "LT+Infinity").find("Infinity")->holds);
    CHECK_FALSE(check(lt_universe(n), "LT+Endless").find("Endless")->holds);
  }
  // A map sending every member of a top-rank set to a top-rank set escapes
  // every level.
  for (std::size_t n = 2; n <= 4; ++n) CHECK_FALSE(check(lt_universe(n), "LT+Unbounded").find("Unbounded")->holds);
}

TEST_CASE("stage structures satisfy the stage theories") {
  CHECK(st_structure_from_lt(lt_universe(2)).stage_labels.size() == 2);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(check(st_structure_from_lt(lt_universe(n)), "ST").all_hold());
  for (std::size_t n = 1; n <= 3; ++n) CHECK(check(bst_structure_from_blt(blt_universe(n)), "BST").all_hold());
  CHECK_THROWS_AS(st_structure_from_lt(blt_universe(2)), DomainError);
  CHECK_THROWS_AS(bst_structure_from_blt(lt_universe(3)), DomainError);
}

TEST_CASE("BLT holds on the boolean universes") {
  for (std::size_t n = 1; n <= 3; ++n) CHECK(check(blt_universe(n), "BLT").all_hold());
  const CheckReport r = check(blt_universe(2), "BLT+Endless∉");
  CHECK_FALSE(r.find("EndlessLow")->holds);
  CHECK_FALSE(check(lt_universe(3), "BLT").all_hold());
}

TEST_CASE("sort mismatches are rejected") {
  CHECK_THROWS_AS(check_axioms(lt_universe(2), suite("ST")), DomainError);
  CHECK_THROWS_AS(check_axioms(lt_universe(2), suite("Scott1957")), DomainError);
  CHECK_THROWS_AS(check_axioms(lt_universe(2), suite("PST")), DomainError);
  CHECK_THROWS_AS(suite("ZF"), DomainError);
  CHECK(suite("BLT+Endless").name == "BLT+Endless∉");
}

TEST_CASE("historical theories") {
  const auto [quine, permuted] = scott1957_models();
  CHECK(quine.size() == 2);
  CHECK(quine.in(1, 1));
  CHECK(permuted.size() == 4);
  CHECK(check(quine, "Scott1957").all_hold());
  CHECK(check(permuted, "Scott1957").all_hold());
  CHECK_FALSE(check(quine, "LT").all_hold());
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(check(lt_universe_ranked(n), "Scott1957").all_hold());
    CHECK(check(lt_universe(n), "Scott1967").all_hold());
    CHECK(check(lt_universe(n), "MSRankFree").all_hold());
  }
  const CheckReport b = check(blt_universe(2), "Scott1967");
  // Read with the one-sorted level predicate, V itself counts as a level of
  // this universe, so Accumulation and Restriction survive; Separation fails.
  CHECK(b.informative);
  CHECK(b.find("Accumulation")->holds);
  CHECK(b.find("Restriction")->holds);
  CHECK_FALSE(b.find("Separation")->holds);
}

TEST_CASE("BLT facts about the ZF axioms") {
  // {V} first appears at height 2.
  CHECK_FALSE(check(blt_universe(1), "BLT-ZF-facts").find("FoundationFailsAtSingletonV")->holds);
  CHECK(check(blt_universe(2), "BLT-ZF-facts").all_hold());
  CHECK(check(blt_universe(3), "BLT-ZF-facts").all_hold());
  const AxiomSuite powersets{"Powersets", Target::Epsilon,
                             {{"Powersets", logic::parse_formula(
                                                "(forall a (exists b (forall x (iff (in x b) (Sub x a)))))")}},
                             {}};
  const EpsilonStructure u2 = blt_universe(2);
  const CheckReport r = check_axioms(u2, powersets);
  REQUIRE_FALSE(r.all_hold());
  CHECK(witness_refutes(u2, powersets, r.verdicts[0]));
}

TEST_CASE("canonical labelling counts isomorphism classes") {
  for (std::size_t k = 1; k <= 4; ++k) {
    std::size_t reps = 0;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << (k * k)); ++c) reps += canonical_code(k, c) == c;
    CHECK(reps == orbit_count(k));
  }
  CHECK(orbit_count(3) == 104);
  CHECK(orbit_count(4) == 3044);
}

TEST_CASE("small models up to isomorphism") {
  // LT models are the V_n, of sizes 1, 2, 4.
  const std::vector<std::size_t> lt_expected = {1, 1, 0, 1};
  const std::vector<std::size_t> blt_expected = {0, 1, 0, 0};
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(enumerate_structures(k, suite("LT")).size() == lt_expected[k - 1]);
    CHECK(enumerate_structures(k, suite("BLT")).size() == blt_expected[k - 1]);
  }
  const auto two = enumerate_structures(2, suite("BLT"));
  REQUIRE(two.size() == 1);
  // {∅, V}: one element has no members, the other has both.
  std::multiset<std::size_t> counts;
  for (const Bits& m : two[0].members) counts.insert(m.count());
  CHECK(counts == std::multiset<std::size_t>{0, 2});
  CHECK_THROWS_AS(enumerate_structures(5, suite("LT")), CapExceeded);
}

TEST_CASE("initial-segment embeddings") {
  const auto e = embed_initial_segment(lt_universe(2), lt_universe(4), Kind::LT);
  REQUIRE(e.embedding);
  CHECK(e.embedding->forward);
  const EpsilonStructure v4 = lt_universe(4);
  std::set<std::string> image;
  for (std::size_t j : e.embedding->map) image.insert(v4.labels[j]);
  CHECK(image == std::set<std::string>{"{}", "{{}}"});

  const auto same = embed_initial_segment(lt_universe(3), lt_universe(3), Kind::LT);
  REQUIRE(same.embedding);
  CHECK(same.embedding->map == std::vector<std::size_t>{0, 1, 2, 3});

  const auto back = embed_initial_segment(lt_universe(4), lt_universe(1), Kind::LT);
  REQUIRE(back.embedding);
  CHECK_FALSE(back.embedding->forward);

  const auto b = embed_initial_segment(blt_universe(1), blt_universe(3), Kind::BLT);
  REQUIRE(b.embedding);
  const EpsilonStructure u3 = blt_universe(3);
  std::set<std::string> bimage;
  for (std::size_t j : b.embedding->map) bimage.insert(u3.labels[j]);
  CHECK(bimage == std::set<std::string>{"{}", "co{}"});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < 2; ++a)
      CHECK(blt_universe(1).in(x, a) == u3.in(b.embedding->map[x], b.embedding->map[a]));

  const auto bad = embed_initial_segment(blt_universe(2), lt_universe(3), Kind::LT);
  CHECK_FALSE(bad.embedding);
  CHECK(bad.error.find("first") != std::string::npos);
}

TEST_CASE("potentialization and flattening") {
  CHECK(potentialize(lt_universe(3)).worlds() == 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const EpsilonStructure a = lt_universe(n);
    const KripkeStructure p = potentialize(a);
    CHECK(flatten(p) == a);
    CHECK(check(p, "PST").all_hold());
    CHECK(check(p, "LPST").all_hold());
    CHECK(check(p, "PST-consequences").all_hold());
    const auto f = recover_world_map(p);
    REQUIRE(f);
    CHECK(world_rename(potentialize(flatten(p)), *f) == p);
  }
  CHECK_THROWS_AS(potentialize(blt_universe(2)), DomainError);
}

TEST_CASE("renaming worlds preserves the flattening") {
  const KripkeStructure p = potentialize(lt_universe(3));
  const std::vector<std::size_t> dup = {0, 1, 1, 2, 2};
  const KripkeStructure q = world_rename(p, dup);
  CHECK(q.worlds() == 5);
  CHECK(flatten(q) == flatten(p));
  CHECK(check(q, "PST").all_hold());
  CHECK_FALSE(check(q, "LPST").find("Frame:linear")->holds);
  const auto f = recover_world_map(q);
  REQUIRE(f);
  CHECK(*f == dup);
  CHECK_THROWS_AS(world_rename(p, {0, 1}), DomainError);
}

TEST_CASE("branching frame satisfies PST but not LPST") {
  const KripkeStructure k = branching_frame();
  logic::validate(k);
  CHECK(check(k, "PST").all_hold());
  const CheckReport r = check(k, "LPST");
  CHECK_FALSE(r.find("Frame:linear")->holds);
  CHECK_FALSE(r.find("Frame:linear")->detail.empty());
}

TEST_CASE("failure witnesses re-verify on random structures") {
  std::mt19937_64 rng(testsupport::kSeed);
  std::uniform_int_distribution<std::uint64_t> code(0, (std::uint64_t{1} << 9) - 1);
  for (int i = 0; i < 60; ++i) {
    const EpsilonStructure e = coded_structure(3, code(rng));
    for (const char* name : {"LT", "BLT", "LT+Unbounded", "MSRankFree", "Scott1967", "BLT-ZF-facts"}) check(e, name);
  }
}
