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
#include "levels/hfset.hpp"

namespace levels {

enum class Polarity : std::uint8_t { Low = 0, High = 1 };

// A complemented hereditarily finite set: a polarity plus a finite set of
// children. x ∈ LOW(S) iff x ∈ S; x ∈ HIGH(S) iff x ∉ S. Membership is fixed
// by the value alone, so it is the same in every universe containing x.
//
// Canonical order: polarity (LOW first), then depth, then the canonically
// ordered child sequences lexicographically.
class CHFSet {
 public:
  CHFSet();  // LOW(∅), the empty set

  static CHFSet empty() { return CHFSet(); }
  static CHFSet universe();  // HIGH(∅), written V
  static CHFSet make(Polarity p, std::vector<CHFSet> children);
  static CHFSet low(std::vector<CHFSet> children) { return make(Polarity::Low, std::move(children)); }
  static CHFSet high(std::vector<CHFSet> children) { return make(Polarity::High, std::move(children)); }
  // children must be duplicate-free and in canonical order.
  static CHFSet from_canonical(Polarity p, const std::vector<CHFSet>& children);
  static CHFSet from_id(std::uint32_t id) { return CHFSet(id); }

  Polarity polarity() const;
  bool is_low() const { return polarity() == Polarity::Low; }
  bool is_high() const { return polarity() == Polarity::High; }
  detail::IdRange<CHFSet> children() const;
  std::size_t size() const;
  std::uint32_t depth() const;
  bool has_child(CHFSet x) const;
  std::uint32_t id() const { return id_; }
  std::string str() const;

  friend bool operator==(CHFSet a, CHFSet b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(CHFSet a, CHFSet b);

 private:
  explicit CHFSet(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

struct CHFSetHash {
  std::size_t operator()(CHFSet a) const noexcept { return std::hash<std::uint32_t>{}(a.id()); }
};

bool member_chf(CHFSet x, CHFSet a);
CHFSet complement(CHFSet a);
CHFSet intersect_chf(CHFSet a, CHFSet b);
CHFSet union_chf(CHFSet a, CHFSet b);
// Extensional inclusion over the unbounded universe. A high set is never
// included in a low one.
bool is_subset_chf(CHFSet a, CHFSet b);

// For low a: the low set of every subset of a low member of a, together with
// the complement of each such subset. For high a the low members cover every
// set, so the result is V.
CHFSet bpot(CHFSet a);
// h ∉ h and every x ∈ h satisfies x = bpot(x ∩ h).
bool is_bhistory(CHFSet h);
bool is_blevel(CHFSet s, LevelTest how = LevelTest::Recursive);

// blevel(0) = ∅, blevel(n+1) = bpot(LOW({blevel(0), ..., blevel(n)})).
CHFSet blevel(std::size_t n);
// Every CHF set of depth < n, in canonical order. Generated by depth; agrees
// with the extension of blevel(n).
std::vector<CHFSet> universe_chf(std::size_t n);
// Least boolean-level whose extension includes every member of the low form
// of a. Materializes levels up to the answer.
CHFSet bevof(CHFSet a);
// The index n with bevof(a) = blevel(n), without materializing it.
std::size_t brank(CHFSet a);

// The contra-automorphism: a ∈ b iff ¬a ∉ ¬b.
CHFSet negative(CHFSet a);

// Low, with every child helow.
bool is_helow(CHFSet a);
// Keeps the helow children of a low set.
CHFSet helow_restrict(CHFSet a);
HFSet hf_of_helow(CHFSet a);
CHFSet helow_of_hf(HFSet a);

CHFSet parse_chf(std::string_view text);
std::string to_string(CHFSet a);

}  // namespace levels
