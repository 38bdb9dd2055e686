#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levels::logic {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// One-sorted ∈-structure. members[a][x] iff x ∈ a. The optional `below`
// relation (below[b][x] iff x < b) interprets Before for theories with a
// primitive rank relation.
struct EpsilonStructure {
  std::vector<std::string> labels;
  std::vector<Bits> members;
  std::optional<std::vector<Bits>> below;

  std::size_t size() const { return labels.size(); }
  bool in(std::size_t x, std::size_t a) const { return members[a][x]; }
  friend bool operator==(const EpsilonStructure&, const EpsilonStructure&) = default;
};

// Two-sorted stage structure.
struct StageStructure {
  std::vector<std::string> set_labels;
  std::vector<std::string> stage_labels;
  std::vector<Bits> members;   // members[a][x] iff x ∈ a
  std::vector<Bits> before;    // before[t][s] iff s < t
  std::vector<Bits> found_at;  // found_at[s][x] iff x @ s
  std::optional<Bits> low;     // interpretation of Low, if present
  std::optional<Bits> high;    // interpretation of High, if present

  friend bool operator==(const StageStructure&, const StageStructure&) = default;
};

// Kripke structure with variable domains. Identity at a world is identity
// restricted to that world's domain. Atomic truth requires existence, so
// members[w] relates only elements of domain[w].
struct KripkeStructure {
  std::vector<std::string> world_labels;
  std::vector<Bits> before;  // before[w][v] iff v < w
  std::vector<std::string> labels;  // global domain
  std::vector<Bits> domain;  // domain[w]
  std::vector<std::vector<Bits>> members;  // members[w][a][x] iff x ∈ a at w

  std::size_t worlds() const { return world_labels.size(); }
  std::size_t size() const { return labels.size(); }
  friend bool operator==(const KripkeStructure&, const KripkeStructure&) = default;
};

using Structure = std::variant<EpsilonStructure, StageStructure, KripkeStructure>;

std::string kind_name(const Structure& s);

Bits full_bits(std::size_t n);
std::vector<std::size_t> indices(const Bits& b);

// Builds an ∈-structure from an explicit membership list (x, a) meaning x ∈ a.
EpsilonStructure make_epsilon(std::vector<std::string> labels,
                              const std::vector<std::pair<std::size_t, std::size_t>>& in_pairs);

// Frame properties of the accessibility relation.
struct FrameReport {
  bool transitive = true;
  bool irreflexive = true;
  bool connected = true;     // path-connected
  bool past_directed = true; // (∀v ≤ w)(∀u ≤ w)(∃t)(t ≤ v ∧ t ≤ u)
  bool linear = true;        // any two worlds are ≤-comparable
  std::string first_failure;
};
FrameReport frame_report(const KripkeStructure& k);

// Throws DomainError unless sizes agree, domains are within the global
// domain, accessibility is a strict partial order, the frame is connected,
// and membership relates only existing elements.
void validate(const KripkeStructure& k);
void validate(const EpsilonStructure& e);
void validate(const StageStructure& s);

// Worlds reachable by the past-directed disjunction: w, earlier, later,
// and later-than-earlier.
std::vector<Bits> reachability(const KripkeStructure& k);
// after[w][v] iff w < v.
std::vector<Bits> successors(const KripkeStructure& k);

}  // namespace levels::logic
