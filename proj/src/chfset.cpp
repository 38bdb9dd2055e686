#include "levels/chfset.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "levels/detail/node_table.hpp"

namespace levels {

namespace {

detail::NodeTable& table() {
  static detail::NodeTable* t = [] {
    auto* nt = new detail::NodeTable();
    nt->intern(0, {});  // LOW(∅) must be id 0
    return nt;
  }();
  return *t;
}

const detail::SetNode& node(std::uint32_t id) { return table().node(id); }

int compare_ids(std::uint32_t a, std::uint32_t b) {
  if (a == b) return 0;
  const auto& na = node(a);
  const auto& nb = node(b);
  if (na.tag != nb.tag) return na.tag < nb.tag ? -1 : 1;
  if (na.depth != nb.depth) return na.depth < nb.depth ? -1 : 1;
  const std::size_t n = std::min(na.canon.size(), nb.canon.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (na.canon[i] != nb.canon[i]) return compare_ids(na.canon[i], nb.canon[i]);
  }
  if (na.canon.size() == nb.canon.size()) return 0;
  return na.canon.size() < nb.canon.size() ? -1 : 1;
}

CHFSet with_polarity(CHFSet a, Polarity p) {
  if (a.polarity() == p) return a;
  return CHFSet::from_id(table().intern(static_cast<std::uint8_t>(p), node(a.id()).canon));
}

std::vector<CHFSet> kids_if(CHFSet a, const std::function<bool(CHFSet)>& pred) {
  std::vector<CHFSet> out;
  for (CHFSet x : a.children())
    if (pred(x)) out.push_back(x);
  return out;
}

std::vector<CHFSet> kids_union(CHFSet a, CHFSet b) {
  std::vector<CHFSet> out;
  std::merge(a.children().begin(), a.children().end(), b.children().begin(), b.children().end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class F>
void for_each_child_subset(CHFSet c, F&& f) {
  const auto& kids = node(c.id()).canon;
  const std::size_t k = kids.size();
  require_within_cap("subsets", pow2_saturating(k));
  std::vector<std::uint32_t> pick;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    pick.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) pick.push_back(kids[i]);
    f(pick);
  }
}

CHFSet of_id_set(Polarity p, const std::unordered_set<std::uint32_t>& ids) {
  std::vector<CHFSet> v;
  v.reserve(ids.size());
  for (auto id : ids) v.push_back(CHFSet::from_id(id));
  return CHFSet::make(p, std::move(v));
}

thread_local std::unordered_map<std::uint32_t, bool> blevel_memo;
thread_local std::unordered_map<std::uint32_t, std::uint32_t> negative_memo;
thread_local std::unordered_map<std::uint32_t, bool> helow_memo;

}  // namespace

CHFSet::CHFSet() : id_(0) { (void)table(); }

CHFSet CHFSet::universe() { return CHFSet::from_canonical(Polarity::High, {}); }

CHFSet CHFSet::make(Polarity p, std::vector<CHFSet> children) {
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  return from_canonical(p, children);
}

CHFSet CHFSet::from_canonical(Polarity p, const std::vector<CHFSet>& children) {
  require_within_cap("set", children.size());
  std::vector<std::uint32_t> ids;
  ids.reserve(children.size());
  for (CHFSet c : children) ids.push_back(c.id());
  return CHFSet(table().intern(static_cast<std::uint8_t>(p), std::move(ids)));
}

Polarity CHFSet::polarity() const { return static_cast<Polarity>(node(id_).tag); }
detail::IdRange<CHFSet> CHFSet::children() const { return detail::IdRange<CHFSet>(node(id_).canon); }
std::size_t CHFSet::size() const { return node(id_).canon.size(); }
std::uint32_t CHFSet::depth() const { return node(id_).depth; }

bool CHFSet::has_child(CHFSet x) const {
  const auto& v = node(id_).by_id;
  return std::binary_search(v.begin(), v.end(), x.id());
}

std::string CHFSet::str() const { return to_string(*this); }

std::strong_ordering operator<=>(CHFSet a, CHFSet b) {
  const int c = compare_ids(a.id(), b.id());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool member_chf(CHFSet x, CHFSet a) { return a.has_child(x) == a.is_low(); }

CHFSet complement(CHFSet a) {
  return with_polarity(a, a.is_low() ? Polarity::High : Polarity::Low);
}

CHFSet intersect_chf(CHFSet a, CHFSet b) {
  if (a.is_low() && b.is_low())
    return CHFSet::from_canonical(Polarity::Low, kids_if(a, [b](CHFSet x) { return b.has_child(x); }));
  if (a.is_low())
    return CHFSet::from_canonical(Polarity::Low, kids_if(a, [b](CHFSet x) { return !b.has_child(x); }));
  if (b.is_low())
    return CHFSet::from_canonical(Polarity::Low, kids_if(b, [a](CHFSet x) { return !a.has_child(x); }));
  return CHFSet::from_canonical(Polarity::High, kids_union(a, b));
}

CHFSet union_chf(CHFSet a, CHFSet b) {
  return complement(intersect_chf(complement(a), complement(b)));
}

bool is_subset_chf(CHFSet a, CHFSet b) {
  auto all = [](CHFSet s, auto pred) {
    for (CHFSet x : s.children())
      if (!pred(x)) return false;
    return true;
  };
  if (a.is_low() && b.is_low()) return all(a, [b](CHFSet x) { return b.has_child(x); });
  if (a.is_low()) return all(a, [b](CHFSet x) { return !b.has_child(x); });
  if (b.is_low()) return false;
  return all(b, [a](CHFSet x) { return a.has_child(x); });
}

CHFSet bpot(CHFSet a) {
  if (a.is_high()) return CHFSet::universe();
  std::size_t total = 0;
  for (CHFSet c : a.children())
    if (c.is_low()) total += 2 * pow2_saturating(c.size());
  require_within_cap("bpot", total);
  std::unordered_set<std::uint32_t> ids;
  for (CHFSet c : a.children()) {
    if (!c.is_low()) continue;
    for_each_child_subset(c, [&](const std::vector<std::uint32_t>& pick) {
      ids.insert(table().intern(0, pick));
      ids.insert(table().intern(1, pick));
    });
  }
  return of_id_set(Polarity::Low, ids);
}

bool is_bhistory(CHFSet h) {
  if (!h.is_low()) return false;
  for (CHFSet x : h.children())
    if (bpot(intersect_chf(x, h)) != x) return false;
  return true;
}

bool is_blevel(CHFSet s, LevelTest how) {
  if (!s.is_low()) return false;
  if (how == LevelTest::Search) {
    // A witness history consists of low members of s.
    const CHFSet lows = CHFSet::from_canonical(Polarity::Low, kids_if(s, [](CHFSet x) { return x.is_low(); }));
    bool found = false;
    for_each_child_subset(lows, [&](const std::vector<std::uint32_t>& pick) {
      if (found) return;
      const CHFSet h = CHFSet::from_id(table().intern(0, pick));
      if (bpot(h) == s && is_bhistory(h)) found = true;
    });
    return found;
  }
  if (auto it = blevel_memo.find(s.id()); it != blevel_memo.end()) return it->second;
  const CHFSet below = CHFSet::from_canonical(Polarity::Low, kids_if(s, [](CHFSet x) { return is_blevel(x); }));
  const bool r = bpot(below) == s;
  blevel_memo.emplace(s.id(), r);
  return r;
}

CHFSet blevel(std::size_t n) {
  if (n >= 4) throw CapExceeded("blevel", n, 3);
  std::vector<CHFSet> hist;
  CHFSet s;
  for (std::size_t i = 0; i < n; ++i) {
    hist.push_back(s);
    s = bpot(CHFSet::make(Polarity::Low, hist));
  }
  return s;
}

std::vector<CHFSet> universe_chf(std::size_t n) {
  std::vector<CHFSet> u;
  for (std::size_t k = 0; k < n; ++k) {
    require_within_cap("universe_chf", 2 * pow2_saturating(u.size()));
    const CHFSet prev = CHFSet::from_canonical(Polarity::Low, u);
    std::vector<CHFSet> next;
    for_each_child_subset(prev, [&](const std::vector<std::uint32_t>& pick) {
      next.push_back(CHFSet::from_id(table().intern(0, pick)));
      next.push_back(CHFSet::from_id(table().intern(1, pick)));
    });
    std::sort(next.begin(), next.end());
    u = std::move(next);
  }
  return u;
}

CHFSet bevof(CHFSet a) {
  for (std::size_t n = 0;; ++n) {
    const CHFSet s = blevel(n);
    bool inside = true;
    for (CHFSet x : a.children())
      if (!s.has_child(x)) {
        inside = false;
        break;
      }
    if (inside) return s;
  }
}

std::size_t brank(CHFSet a) { return a.depth(); }

CHFSet negative(CHFSet a) {
  if (auto it = negative_memo.find(a.id()); it != negative_memo.end()) return CHFSet::from_id(it->second);
  std::vector<CHFSet> kids;
  kids.reserve(a.size());
  for (CHFSet x : a.children()) kids.push_back(negative(x));
  const CHFSet r = CHFSet::make(a.is_low() ? Polarity::High : Polarity::Low, std::move(kids));
  negative_memo.emplace(a.id(), r.id());
  return r;
}

bool is_helow(CHFSet a) {
  if (!a.is_low()) return false;
  if (auto it = helow_memo.find(a.id()); it != helow_memo.end()) return it->second;
  bool r = true;
  for (CHFSet x : a.children())
    if (!is_helow(x)) {
      r = false;
      break;
    }
  helow_memo.emplace(a.id(), r);
  return r;
}

CHFSet helow_restrict(CHFSet a) {
  if (!a.is_low()) throw DomainError("helow_restrict: input is high: " + to_string(a));
  return CHFSet::from_canonical(Polarity::Low, kids_if(a, [](CHFSet x) { return is_helow(x); }));
}

HFSet hf_of_helow(CHFSet a) {
  if (!is_helow(a)) throw DomainError("hf_of_helow: input is not helow: " + to_string(a));
  std::vector<HFSet> kids;
  kids.reserve(a.size());
  for (CHFSet x : a.children()) kids.push_back(hf_of_helow(x));
  return HFSet::of(std::move(kids));
}

CHFSet helow_of_hf(HFSet a) {
  std::vector<CHFSet> kids;
  kids.reserve(a.size());
  for (HFSet x : a.members()) kids.push_back(helow_of_hf(x));
  return CHFSet::low(std::move(kids));
}

namespace {

struct CHFParser {
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
  CHFSet set() {
    skip();
    if (s.substr(i, 2) == "co") {
      i += 2;
      const CHFSet inner = set();
      return CHFSet::from_canonical(Polarity::High, inner.children().to_vector());
    }
    expect('{');
    std::vector<CHFSet> kids;
    skip();
    if (i < s.size() && s[i] == '}') {
      ++i;
      return CHFSet::low(std::move(kids));
    }
    for (;;) {
      kids.push_back(set());
      skip();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      expect('}');
      return CHFSet::low(std::move(kids));
    }
  }
};

void print(CHFSet a, std::string& out) {
  if (a.is_high()) out += "co";
  out.push_back('{');
  bool first = true;
  for (CHFSet x : a.children()) {
    if (!first) out.push_back(',');
    first = false;
    print(x, out);
  }
  out.push_back('}');
}

}  // namespace

CHFSet parse_chf(std::string_view text) {
  CHFParser p{text};
  CHFSet r = p.set();
  p.skip();
  if (p.i != text.size()) throw ParseError("trailing input", p.i);
  return r;
}

std::string to_string(CHFSet a) {
  std::string out;
  print(a, out);
  return out;
}

}  // namespace levels
