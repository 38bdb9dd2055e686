#include "levels/hfset.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "levels/detail/node_table.hpp"

namespace levels {

namespace {

detail::NodeTable& table() {
  static detail::NodeTable* t = [] {
    auto* nt = new detail::NodeTable();
    nt->intern(0, {});  // ∅ must be id 0
    return nt;
  }();
  return *t;
}

const detail::SetNode& node(std::uint32_t id) { return table().node(id); }

int compare_ids(std::uint32_t a, std::uint32_t b) {
  if (a == b) return 0;
  const auto& na = node(a);
  const auto& nb = node(b);
  if (na.depth != nb.depth) return na.depth < nb.depth ? -1 : 1;
  const std::size_t n = std::min(na.canon.size(), nb.canon.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (na.canon[i] != nb.canon[i]) return compare_ids(na.canon[i], nb.canon[i]);
  }
  if (na.canon.size() == nb.canon.size()) return 0;
  return na.canon.size() < nb.canon.size() ? -1 : 1;
}

std::vector<std::uint32_t> ids_of(const std::vector<HFSet>& xs) {
  std::vector<std::uint32_t> out;
  out.reserve(xs.size());
  for (HFSet x : xs) out.push_back(x.id());
  return out;
}

// Every subset of the canonically ordered members of c, each in canonical
// order (selection preserves order).
template <class F>
void for_each_subset(HFSet c, F&& f) {
  const auto& kids = node(c.id()).canon;
  const std::size_t k = kids.size();
  require_within_cap("subsets", pow2_saturating(k));
  std::vector<std::uint32_t> pick;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    pick.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) pick.push_back(kids[i]);
    f(HFSet::from_id(table().intern(0, pick)));
  }
}

HFSet of_id_set(const std::unordered_set<std::uint32_t>& ids) {
  std::vector<HFSet> v;
  v.reserve(ids.size());
  for (auto id : ids) v.push_back(HFSet::from_id(id));
  return HFSet::of(std::move(v));
}

thread_local std::unordered_map<std::uint32_t, bool> level_memo;
thread_local std::unordered_map<std::uint32_t, std::uint32_t> levof_memo;

}  // namespace

HFSet::HFSet() : id_(0) { (void)table(); }

HFSet HFSet::of(std::vector<HFSet> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return from_canonical(members);
}

HFSet HFSet::from_canonical(const std::vector<HFSet>& members) {
  require_within_cap("set", members.size());
  return HFSet(table().intern(0, ids_of(members)));
}

detail::IdRange<HFSet> HFSet::members() const { return detail::IdRange<HFSet>(node(id_).canon); }
std::size_t HFSet::size() const { return node(id_).canon.size(); }
std::uint32_t HFSet::depth() const { return node(id_).depth; }

bool HFSet::contains(HFSet x) const {
  const auto& v = node(id_).by_id;
  return std::binary_search(v.begin(), v.end(), x.id());
}

std::string HFSet::str() const { return to_string(*this); }

std::strong_ordering operator<=>(HFSet a, HFSet b) {
  const int c = compare_ids(a.id(), b.id());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool member(HFSet x, HFSet a) { return a.contains(x); }

bool is_subset(HFSet a, HFSet b) {
  if (a.size() > b.size()) return false;
  const auto& va = node(a.id()).by_id;
  const auto& vb = node(b.id()).by_id;
  return std::includes(vb.begin(), vb.end(), va.begin(), va.end());
}

HFSet set_union(HFSet a, HFSet b) {
  std::vector<HFSet> out;
  std::merge(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return HFSet::from_canonical(out);
}

HFSet intersect(HFSet a, HFSet b) {
  return filter(a, [b](HFSet x) { return b.contains(x); });
}

HFSet diff(HFSet a, HFSet b) {
  return filter(a, [b](HFSet x) { return !b.contains(x); });
}

HFSet filter(HFSet a, const std::function<bool(HFSet)>& pred) {
  std::vector<HFSet> out;
  for (HFSet x : a.members())
    if (pred(x)) out.push_back(x);
  return HFSet::from_canonical(out);
}

HFSet big_union(HFSet a) {
  std::unordered_set<std::uint32_t> ids;
  for (HFSet c : a.members())
    for (HFSet x : c.members()) ids.insert(x.id());
  return of_id_set(ids);
}

HFSet powerset(HFSet a) {
  require_within_cap("powerset", pow2_saturating(a.size()));
  std::vector<HFSet> out;
  for_each_subset(a, [&](HFSet x) { out.push_back(x); });
  return HFSet::of(std::move(out));
}

HFSet transitive_closure(HFSet a) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<HFSet> stack(a.members().begin(), a.members().end());
  while (!stack.empty()) {
    HFSet x = stack.back();
    stack.pop_back();
    if (!seen.insert(x.id()).second) continue;
    for (HFSet y : x.members()) stack.push_back(y);
  }
  return of_id_set(seen);
}

HFSet pot(HFSet a) {
  std::size_t total = 0;
  for (HFSet c : a.members()) total += pow2_saturating(c.size());
  require_within_cap("pot", total);
  std::unordered_set<std::uint32_t> ids;
  for (HFSet c : a.members()) for_each_subset(c, [&](HFSet x) { ids.insert(x.id()); });
  return of_id_set(ids);
}

HFSet acc(HFSet a) { return set_union(pot(a), big_union(a)); }

bool is_transitive(HFSet a) {
  for (HFSet x : a.members())
    for (HFSet y : x.members())
      if (!a.contains(y)) return false;
  return true;
}

bool is_potent(HFSet a) {
  for (HFSet c : a.members()) {
    const auto kids = c.members().to_vector();
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::vector<HFSet> rest;
      rest.reserve(kids.size() - 1);
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (j != i) rest.push_back(kids[j]);
      if (!a.contains(HFSet::from_canonical(rest))) return false;
    }
  }
  return true;
}

bool is_history(HFSet h) {
  for (HFSet x : h.members())
    if (pot(intersect(x, h)) != x) return false;
  return true;
}

bool is_level(HFSet s, LevelTest how) {
  if (how == LevelTest::Search) {
    // A witness history is a subset of s: each c ∈ h satisfies c ⊆ c, so c ∈ pot(h).
    bool found = false;
    for_each_subset(s, [&](HFSet h) {
      if (!found && pot(h) == s && is_history(h)) found = true;
    });
    return found;
  }
  if (auto it = level_memo.find(s.id()); it != level_memo.end()) return it->second;
  const bool r = pot(filter(s, [](HFSet x) { return is_level(x); })) == s;
  level_memo.emplace(s.id(), r);
  return r;
}

HFSet v_level(std::size_t n) {
  HFSet v;
  for (std::size_t i = 0; i < n; ++i) v = powerset(v);
  return v;
}

HFSet levof(HFSet a) {
  if (auto it = levof_memo.find(a.id()); it != levof_memo.end()) return HFSet::from_id(it->second);
  std::vector<HFSet> ls;
  for (HFSet x : a.members()) ls.push_back(levof(x));
  const HFSet r = pot(HFSet::of(std::move(ls)));
  levof_memo.emplace(a.id(), r.id());
  return r;
}

namespace {

struct HFParser {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
  }
  void expect(char c) {
    skip();
    if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
  }
  HFSet set() {
    expect('{');
    std::vector<HFSet> kids;
    skip();
    if (i < s.size() && s[i] == '}') {
      ++i;
      return HFSet::of(std::move(kids));
    }
    for (;;) {
      kids.push_back(set());
      skip();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      expect('}');
      return HFSet::of(std::move(kids));
    }
  }
};

void print(HFSet a, std::string& out) {
  out.push_back('{');
  bool first = true;
  for (HFSet x : a.members()) {
    if (!first) out.push_back(',');
    first = false;
    print(x, out);
  }
  out.push_back('}');
}

}  // namespace

HFSet parse_hf(std::string_view text) {
  HFParser p{text};
  HFSet r = p.set();
  p.skip();
  if (p.i != text.size()) throw ParseError("trailing input", p.i);
  return r;
}

std::string to_string(HFSet a) {
  std::string out;
  print(a, out);
  return out;
}

}  // namespace levels
