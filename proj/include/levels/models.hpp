#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levels/chfset.hpp"
#include "levels/hfset.hpp"
#include "levels/logic/eval.hpp"
#include "levels/logic/formula.hpp"
#include "levels/logic/structure.hpp"

namespace levels::models {

using logic::Assignment;
using logic::Bits;
using logic::EpsilonStructure;
using logic::Formula;
using logic::KripkeStructure;
using logic::StageStructure;
using logic::Structure;

// ---- universes --------------------------------------------------------------

// HF sets of depth < n in canonical order; n <= 5.
std::vector<HFSet> lt_sets(std::size_t n);
// CHF sets of depth < n in canonical order; n <= 3.
std::vector<CHFSet> blt_sets(std::size_t n);

EpsilonStructure epsilon_of(const std::vector<HFSet>& sets);
EpsilonStructure epsilon_of(const std::vector<CHFSet>& sets);

// V_n with real membership. The domain must fit limits().max_structure.
EpsilonStructure lt_universe(std::size_t n);
// As lt_universe, with Before read as "has lower rank than".
EpsilonStructure lt_universe_ranked(std::size_t n);
EpsilonStructure blt_universe(std::size_t n);

// lt(1) = 1, lt(n+1) = 2^lt(n); blt(1) = 2, blt(n+1) = 2^(blt(n)+1).
enum class Kind { LT, BLT };
boost::multiprecision::cpp_int closed_form_count(std::size_t n, Kind kind);
// Size of the materialized universe (lt up to n = 5, blt up to n = 3).
std::size_t materialized_count(std::size_t n, Kind kind);

// Indices of the (boolean-)levels of an ∈-structure, ordered by size.
std::vector<std::size_t> levels_of(const EpsilonStructure& e);
std::vector<std::size_t> blevels_of(const EpsilonStructure& e);

// True iff ∈ restricted to the given elements is a strict linear order in
// which every nonempty subset has a least element.
bool well_ordered_by_membership(const EpsilonStructure& e, const std::vector<std::size_t>& elems);

// Stages are the (boolean-)levels; before is ∈; found-at is ⊆ (or ⊆ of the
// set or its complement); Low/High are non-self-membered/self-membered.
// Throws DomainError if the input fails its theory.
StageStructure st_structure_from_lt(const EpsilonStructure& a);
StageStructure bst_structure_from_blt(const EpsilonStructure& b);

// ---- suites and checking ----------------------------------------------------

enum class Target { Epsilon, Ranked, Stage, Kripke };
enum class FrameCondition { Transitive, PastDirected, Connected, Linear };

struct Axiom {
  std::string name;
  Formula formula;
  bool second_order = false;
};

struct AxiomSuite {
  std::string name;
  Target target = Target::Epsilon;
  std::vector<Axiom> axioms;
  std::vector<FrameCondition> frame;
};

const std::vector<std::string>& suite_names();
// Throws DomainError for an unknown name. Besides the theory names, the
// suites "PST-consequences" and "BLT-ZF-facts" collect derived facts.
const AxiomSuite& suite(std::string_view name);

struct Verdict {
  std::string axiom;
  bool holds = true;
  std::optional<Assignment> witness;    // counterexample bindings
  std::optional<std::size_t> world;     // failing world, for Kripke checks
  std::string detail;                   // human-readable witness
  double seconds = 0;
};

struct CheckReport {
  std::string suite;
  std::vector<Verdict> verdicts;
  bool informative = false;  // suite not claimed for this kind of structure
  bool all_hold() const;
  const Verdict* find(std::string_view axiom) const;
};

struct CheckOptions {
  bool stop_at_first_failure = false;
  logic::EvalOptions eval;
};

// Exhaustive evaluation. On a Kripke structure every formula is checked at
// every world. Raises DomainError on sort mismatch.
CheckReport check_axioms(const Structure& s, const AxiomSuite& suite, CheckOptions opt = {});

// Re-evaluates a failing verdict's witness; true iff it is a genuine
// counterexample.
bool witness_refutes(const Structure& s, const AxiomSuite& suite, const Verdict& v);

std::string to_text(const CheckReport& r);

// ---- small models -----------------------------------------------------------

// The ∈-structure on {0..k-1} with bit (a*k + x) of code set iff x ∈ a.
EpsilonStructure coded_structure(std::size_t k, std::uint64_t code);
// Smallest code over all relabellings.
std::uint64_t canonical_code(std::size_t k, std::uint64_t code);
// All ∈-structures on k <= 4 elements satisfying the suite, one per
// isomorphism class, in increasing canonical code.
std::vector<EpsilonStructure> enumerate_structures(std::size_t k, const AxiomSuite& suite);

// A Quine atom below the empty set, and V_3 with a permuted rank order.
std::pair<EpsilonStructure, EpsilonStructure> scott1957_models();

// ---- embeddings -------------------------------------------------------------

struct Embedding {
  bool forward = true;            // true: first into second; false: second into first
  std::vector<std::size_t> map;   // indices in the taller structure
  std::size_t source_height = 0;  // height of the shorter structure
  std::size_t target_height = 0;
};

// Decodes an LT (BLT) model as HF (CHF) sets by recursion on rank. Returns
// nullopt if the structure is not well-founded in the required sense or two
// elements decode identically.
std::optional<std::vector<HFSet>> decode_lt(const EpsilonStructure& e);
std::optional<std::vector<CHFSet>> decode_blt(const EpsilonStructure& e);

// Maps the shorter model onto the initial segment of the taller one. The
// error string names the violated precondition on failure.
struct EmbedResult {
  std::optional<Embedding> embedding;
  std::string error;
};
EmbedResult embed_initial_segment(const EpsilonStructure& m, const EpsilonStructure& n, Kind kind);

// ---- Kripke constructions ----------------------------------------------------

// Worlds are the levels; r < s iff r ∈ s; a ∈ b at s iff a ∈ b ⊆ s; the
// domain at s is {x : x ⊆ s}.
KripkeStructure potentialize(const EpsilonStructure& a);
// a ∈ b iff ◇(a ∈ b).
EpsilonStructure flatten(const KripkeStructure& p);
// f maps each new world to an old one and must be onto.
KripkeStructure world_rename(const KripkeStructure& p, const std::vector<std::size_t>& f);
// A surjection f with p = world_rename(potentialize(flatten(p)), f), if any.
std::optional<std::vector<std::size_t>> recover_world_map(const KripkeStructure& p);

}  // namespace levels::models
