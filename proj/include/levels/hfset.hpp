#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "levels/config.hpp"
#include "levels/detail/id_range.hpp"

namespace levels {

// A hereditarily finite pure set. Values are interned: two handles are equal
// iff they denote the same set, and comparison is by id.
//
// The canonical order used for printing and for operator<=> compares depth
// first, then the canonically ordered member sequences lexicographically
// (recursively), a shorter prefix sorting first. It does not depend on
// interning order, so output is stable across runs.
class HFSet {
 public:
  HFSet();  // the empty set

  static HFSet empty() { return HFSet(); }
  // Canonicalizes: any order, duplicates allowed.
  static HFSet of(std::vector<HFSet> members);
  static HFSet singleton(HFSet x) { return of({x}); }
  // members must be duplicate-free and in canonical order.
  static HFSet from_canonical(const std::vector<HFSet>& members);
  static HFSet from_id(std::uint32_t id) { return HFSet(id); }

  detail::IdRange<HFSet> members() const;
  std::size_t size() const;
  bool is_empty() const { return size() == 0; }
  std::uint32_t depth() const;
  bool contains(HFSet x) const;
  std::uint32_t id() const { return id_; }
  std::string str() const;

  friend bool operator==(HFSet a, HFSet b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(HFSet a, HFSet b);

 private:
  explicit HFSet(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

struct HFSetHash {
  std::size_t operator()(HFSet a) const noexcept { return std::hash<std::uint32_t>{}(a.id()); }
};

bool member(HFSet x, HFSet a);
bool is_subset(HFSet a, HFSet b);

HFSet set_union(HFSet a, HFSet b);
HFSet intersect(HFSet a, HFSet b);
HFSet diff(HFSet a, HFSet b);
HFSet big_union(HFSet a);
HFSet powerset(HFSet a);
HFSet transitive_closure(HFSet a);
// Members of a satisfying pred, in canonical order.
HFSet filter(HFSet a, const std::function<bool(HFSet)>& pred);

// {x : x ⊆ c for some c ∈ a}
HFSet pot(HFSet a);
// {x : x ∈ c or x ⊆ c for some c ∈ a}
HFSet acc(HFSet a);

bool is_transitive(HFSet a);
// Every subset of a member is a member. Uses closure under removing one
// element, which is equivalent by induction on size.
bool is_potent(HFSet a);
// Every x ∈ h satisfies x = pot(x ∩ h).
bool is_history(HFSet h);

enum class LevelTest {
  Recursive,  // s = pot({r ∈ s : r is a level}), memoized
  Search,     // some history h ⊆ s has pot(h) = s
};
bool is_level(HFSet s, LevelTest how = LevelTest::Recursive);

// V_0 = ∅, V_{n+1} = powerset(V_n).
HFSet v_level(std::size_t n);
// Least V_n with a ⊆ V_n, computed as pot({levof(x) : x ∈ a}).
HFSet levof(HFSet a);

HFSet parse_hf(std::string_view text);
std::string to_string(HFSet a);

}  // namespace levels
