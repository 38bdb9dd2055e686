#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levels/chfset.hpp"

// Conway games carried by complemented sets. The children of a set's low
// form are its options: the low ones are Low's moves, the self-membered
// (high) ones are High's moves. A set and its complement are the same game.
namespace levels::games {

struct GameView {
  CHFSet carrier;
  std::vector<CHFSet> low_options;   // canonical order
  std::vector<CHFSet> high_options;  // canonical order
};

GameView options(CHFSet a);

// Swaps the players' roles; equal to levels::negative.
CHFSet game_neg(CHFSet a);
// Always a low set; high-option contributions enter as complements.
CHFSet game_sum(CHFSet a, CHFSet c);
CHFSet game_sub(CHFSet a, CHFSet c);

bool game_leq(CHFSet a, CHFSet c);
bool game_eq(CHFSet a, CHFSet c);
// a ⊴ c fails and c ⊴ a fails.
bool game_fuzzy(CHFSet a, CHFSet c);

// Every option is surreal, and no low option is ⊵ any high option.
bool is_surreal(CHFSet a);
// Throws DomainError unless both factors are surreal.
CHFSet surreal_mul(CHFSet a, CHFSet c);
// Helow and surreal.
bool is_surreal_ordinal(CHFSet a);

// An equivalent of least boolean-rank among the sets of depth < height_bound,
// ties broken by canonical order. Throws DomainError if the bound holds none.
CHFSet canonical_rep(CHFSet a, std::size_t height_bound);

using Dyadic = boost::rational<std::int64_t>;

// The carrier of q, built as {q' | q''} from its day-earlier neighbours.
// Throws DomainError unless q has a binary denominator and birthday within
// limits().dyadic_days.
CHFSet dyadic_carrier(Dyadic q);
// Every dyadic of birthday <= days, in increasing order.
std::vector<Dyadic> dyadic_ladder(std::size_t days);
// The dyadic q with a ≍ dyadic_carrier(q), or nullopt. Throws CapExceeded if
// depth(a) > limits().dyadic_days.
std::optional<Dyadic> dyadic_value(CHFSet a);
std::string to_string(Dyadic q);

// Drops every memo table held by the calling thread.
void clear_memos();

}  // namespace levels::games
