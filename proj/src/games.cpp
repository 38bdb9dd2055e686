#include "levels/games.hpp"

#include <map>
#include <unordered_map>

#include "levels/config.hpp"

namespace levels::games {

namespace {

std::uint64_t key(CHFSet a, CHFSet c) { return std::uint64_t{a.id()} << 32 | c.id(); }

// All tables are per thread; the node table is shared and append-only.
thread_local std::unordered_map<std::uint64_t, bool> leq_memo;
thread_local std::unordered_map<std::uint64_t, std::uint32_t> sum_memo;
thread_local std::unordered_map<std::uint64_t, std::uint32_t> mul_memo;
thread_local std::unordered_map<std::uint32_t, bool> surreal_memo;

struct Ladder {
  std::size_t days = 0;
  std::map<Dyadic, CHFSet> carriers;
};
thread_local std::optional<Ladder> ladder_cache;

CHFSet sum_rec(CHFSet a, CHFSet c) {
  if (auto it = sum_memo.find(key(a, c)); it != sum_memo.end()) return CHFSet::from_id(it->second);
  std::vector<CHFSet> kids;
  kids.reserve(a.size() + c.size());
  for (CHFSet x : a.children()) kids.push_back(x.is_low() ? sum_rec(x, c) : complement(sum_rec(x, c)));
  for (CHFSet x : c.children()) kids.push_back(x.is_low() ? sum_rec(a, x) : complement(sum_rec(a, x)));
  const CHFSet r = CHFSet::low(std::move(kids));
  sum_memo.emplace(key(a, c), r.id());
  return r;
}

CHFSet mul_rec(CHFSet a, CHFSet c) {
  if (auto it = mul_memo.find(key(a, c)); it != mul_memo.end()) return CHFSet::from_id(it->second);
  std::vector<CHFSet> kids;
  for (CHFSet x : a.children())
    for (CHFSet y : c.children()) {
      const CHFSet t = sum_rec(sum_rec(mul_rec(x, c), mul_rec(a, y)), negative(mul_rec(x, y)));
      // Same-side pairs give low options, mixed pairs high ones.
      kids.push_back(x.is_low() == y.is_low() ? t : complement(t));
    }
  const CHFSet r = CHFSet::low(std::move(kids));
  mul_memo.emplace(key(a, c), r.id());
  return r;
}

const Ladder& ladder(std::size_t days) {
  if (ladder_cache && ladder_cache->days == days) return *ladder_cache;
  Ladder l;
  l.days = days;
  l.carriers.emplace(Dyadic(0), CHFSet());
  for (std::size_t d = 1; d <= days; ++d) {
    std::vector<std::pair<Dyadic, CHFSet>> born;
    const auto lo = l.carriers.begin();
    const auto hi = std::prev(l.carriers.end());
    born.emplace_back(lo->first - 1, CHFSet::low({complement(lo->second)}));
    born.emplace_back(hi->first + 1, CHFSet::low({hi->second}));
    for (auto it = l.carriers.begin(); std::next(it) != l.carriers.end(); ++it) {
      const auto nx = std::next(it);
      born.emplace_back((it->first + nx->first) / 2, CHFSet::low({it->second, complement(nx->second)}));
    }
    for (auto& [q, c] : born) l.carriers.emplace(q, c);
  }
  ladder_cache = std::move(l);
  return *ladder_cache;
}

}  // namespace

GameView options(CHFSet a) {
  GameView v{a, {}, {}};
  for (CHFSet x : a.children()) (x.is_low() ? v.low_options : v.high_options).push_back(x);
  return v;
}

CHFSet game_neg(CHFSet a) { return negative(a); }

CHFSet game_sum(CHFSet a, CHFSet c) { return sum_rec(a, c); }

CHFSet game_sub(CHFSet a, CHFSet c) { return sum_rec(a, negative(c)); }

bool game_leq(CHFSet a, CHFSet c) {
  if (auto it = leq_memo.find(key(a, c)); it != leq_memo.end()) return it->second;
  bool r = true;
  for (CHFSet y : c.children())
    if (y.is_high() && game_leq(y, a)) {
      r = false;
      break;
    }
  if (r)
    for (CHFSet x : a.children())
      if (x.is_low() && game_leq(c, x)) {
        r = false;
        break;
      }
  leq_memo.emplace(key(a, c), r);
  return r;
}

bool game_eq(CHFSet a, CHFSet c) { return game_leq(a, c) && game_leq(c, a); }

bool game_fuzzy(CHFSet a, CHFSet c) { return !game_leq(a, c) && !game_leq(c, a); }

bool is_surreal(CHFSet a) {
  if (auto it = surreal_memo.find(a.id()); it != surreal_memo.end()) return it->second;
  const GameView v = options(a);
  bool r = true;
  for (CHFSet x : a.children()) r = r && is_surreal(x);
  for (CHFSet x : v.low_options)
    for (CHFSet y : v.high_options) r = r && !game_leq(y, x);
  surreal_memo.emplace(a.id(), r);
  return r;
}

CHFSet surreal_mul(CHFSet a, CHFSet c) {
  if (!is_surreal(a) || !is_surreal(c)) throw DomainError("surreal_mul: factors must be surreal");
  return mul_rec(a, c);
}

bool is_surreal_ordinal(CHFSet a) { return is_helow(a) && is_surreal(a); }

CHFSet canonical_rep(CHFSet a, std::size_t height_bound) {
  std::optional<CHFSet> best;
  std::size_t best_rank = 0;
  // universe_chf is in canonical order, so the first hit at a rank wins ties.
  for (CHFSet b : universe_chf(height_bound)) {
    if (!game_eq(a, b)) continue;
    const std::size_t r = brank(b);
    if (!best || r < best_rank) best = b, best_rank = r;
  }
  if (!best) throw DomainError("canonical_rep: no equivalent of depth < " + std::to_string(height_bound));
  return *best;
}

std::vector<Dyadic> dyadic_ladder(std::size_t days) {
  std::vector<Dyadic> out;
  for (const auto& [q, c] : ladder(days).carriers) out.push_back(q);
  return out;
}

CHFSet dyadic_carrier(Dyadic q) {
  const Ladder& l = ladder(limits().dyadic_days);
  auto it = l.carriers.find(q);
  if (it == l.carriers.end())
    throw DomainError("dyadic_carrier: " + to_string(q) + " is not born by day " + std::to_string(l.days));
  return it->second;
}

std::optional<Dyadic> dyadic_value(CHFSet a) {
  const std::size_t days = limits().dyadic_days;
  if (a.depth() > days) throw CapExceeded("dyadic_value depth", a.depth(), days);
  for (const auto& [q, c] : ladder(days).carriers)
    if (game_eq(a, c)) return q;
  return std::nullopt;
}

std::string to_string(Dyadic q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

void clear_memos() {
  leq_memo.clear();
  sum_memo.clear();
  mul_memo.clear();
  surreal_memo.clear();
  ladder_cache.reset();
}

}  // namespace levels::games
