#pragma once

// Seeded generators and independent reference implementations shared by the
// unit tests. Nothing here calls the library's own algorithms for the
// quantity under test.

#include <cstdint>
#include <random>
#include <vector>

#include "levels/chfset.hpp"
#include "levels/hfset.hpp"

namespace testsupport {

inline constexpr std::uint64_t kSeed = 0x5eed5eedULL;

// Random HF set of depth <= max_depth with at most `width` members per node.
inline levels::HFSet random_hf(std::mt19937_64& rng, int max_depth, int width) {
  if (max_depth == 0) return levels::HFSet();
  std::uniform_int_distribution<int> n(0, width);
  std::vector<levels::HFSet> kids;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) kids.push_back(random_hf(rng, max_depth - 1, width));
  return levels::HFSet::of(std::move(kids));
}

// Random CHF set of depth <= max_depth.
inline levels::CHFSet random_chf(std::mt19937_64& rng, int max_depth, int width) {
  std::bernoulli_distribution coin(0.5);
  const auto pol = coin(rng) ? levels::Polarity::High : levels::Polarity::Low;
  if (max_depth == 0) return levels::CHFSet::make(pol, {});
  std::uniform_int_distribution<int> n(0, width);
  std::vector<levels::CHFSet> kids;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) kids.push_back(random_chf(rng, max_depth - 1, width));
  return levels::CHFSet::make(pol, std::move(kids));
}

// Subset test by linear scan of members.
inline bool naive_subset(levels::HFSet a, levels::HFSet b) {
  for (auto x : a.members()) {
    bool found = false;
    for (auto y : b.members()) found = found || (x == y);
    if (!found) return false;
  }
  return true;
}

// All HF sets of depth < n, built bottom-up from explicit bitmask subsets.
inline std::vector<levels::HFSet> naive_vn(int n) {
  std::vector<levels::HFSet> v;
  for (int k = 0; k < n; ++k) {
    std::vector<levels::HFSet> next;
    for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
      std::vector<levels::HFSet> pick;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (mask >> i & 1u) pick.push_back(v[i]);
      next.push_back(levels::HFSet::of(pick));
    }
    v = next;
  }
  return v;
}

}  // namespace testsupport
