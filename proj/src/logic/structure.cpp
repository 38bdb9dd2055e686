#include "levels/logic/structure.hpp"

#include <set>

#include "levels/config.hpp"

namespace levels::logic {

std::string kind_name(const Structure& s) {
  switch (s.index()) {
    case 0: return "epsilon";
    case 1: return "stage";
    default: return "kripke";
  }
}

Bits full_bits(std::size_t n) {
  Bits b(n);
  b.set();
  return b;
}

std::vector<std::size_t> indices(const Bits& b) {
  std::vector<std::size_t> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(i);
  return out;
}

EpsilonStructure make_epsilon(std::vector<std::string> labels,
                              const std::vector<std::pair<std::size_t, std::size_t>>& in_pairs) {
  EpsilonStructure e;
  const std::size_t n = labels.size();
  e.labels = std::move(labels);
  e.members.assign(n, Bits(n));
  for (auto [x, a] : in_pairs) {
    if (x >= n || a >= n) throw DomainError("membership pair out of range");
    e.members[a].set(x);
  }
  return e;
}

std::vector<Bits> successors(const KripkeStructure& k) {
  const std::size_t n = k.worlds();
  std::vector<Bits> after(n, Bits(n));
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v : indices(k.before[w])) after[v].set(w);
  return after;
}

std::vector<Bits> reachability(const KripkeStructure& k) {
  const std::size_t n = k.worlds();
  const auto after = successors(k);
  std::vector<Bits> reach(n, Bits(n));
  for (std::size_t w = 0; w < n; ++w) {
    reach[w].set(w);
    reach[w] |= k.before[w];
    reach[w] |= after[w];
    for (std::size_t u : indices(k.before[w])) reach[w] |= after[u];
  }
  return reach;
}

FrameReport frame_report(const KripkeStructure& k) {
  FrameReport r;
  const std::size_t n = k.worlds();
  auto le = [&](std::size_t a, std::size_t b) { return a == b || k.before[b][a]; };
  auto fail = [&](bool& flag, const std::string& why) {
    if (flag && r.first_failure.empty()) r.first_failure = why;
    flag = false;
  };
  for (std::size_t w = 0; w < n; ++w) {
    if (k.before[w][w]) fail(r.irreflexive, "world " + k.world_labels[w] + " precedes itself");
    for (std::size_t v : indices(k.before[w]))
      for (std::size_t u : indices(k.before[v]))
        if (!k.before[w][u])
          fail(r.transitive, "not transitive at " + k.world_labels[u] + " < " + k.world_labels[v] + " < " +
                                 k.world_labels[w]);
  }
  // Path-connectedness via union-find over the symmetric closure.
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v : indices(k.before[w])) parent[find(v)] = find(w);
  for (std::size_t w = 1; w < n; ++w)
    if (find(w) != find(0)) fail(r.connected, "world " + k.world_labels[w] + " is not connected to " + k.world_labels[0]);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = 0; u < n; ++u) {
        if (!le(v, w) || !le(u, w)) continue;
        bool ok = false;
        for (std::size_t t = 0; t < n && !ok; ++t) ok = le(t, v) && le(t, u);
        if (!ok) fail(r.past_directed, "worlds " + k.world_labels[v] + " and " + k.world_labels[u] + " below " +
                                           k.world_labels[w] + " have no common lower bound");
      }
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (!le(v, u) && !le(u, v))
        fail(r.linear, "worlds " + k.world_labels[v] + " and " + k.world_labels[u] + " are incomparable");
  return r;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

void require_square(const std::vector<Bits>& rows, std::size_t n, std::size_t width, const char* what) {
  require(rows.size() == n, std::string(what) + ": wrong number of rows");
  for (const Bits& b : rows) require(b.size() == width, std::string(what) + ": wrong row width");
}

void require_unique(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen(labels.begin(), labels.end());
  require(seen.size() == labels.size(), std::string(what) + ": duplicate labels");
}

}  // namespace

void validate(const EpsilonStructure& e) {
  require_unique(e.labels, "epsilon");
  require_square(e.members, e.size(), e.size(), "epsilon members");
  if (e.below) require_square(*e.below, e.size(), e.size(), "epsilon below");
}

void validate(const StageStructure& s) {
  require_unique(s.set_labels, "stage sets");
  require_unique(s.stage_labels, "stages");
  const std::size_t n = s.set_labels.size(), m = s.stage_labels.size();
  require_square(s.members, n, n, "stage members");
  require_square(s.before, m, m, "stage before");
  require_square(s.found_at, m, n, "stage found_at");
  if (s.low) require(s.low->size() == n, "stage low: wrong width");
  if (s.high) require(s.high->size() == n, "stage high: wrong width");
}

void validate(const KripkeStructure& k) {
  require_unique(k.world_labels, "kripke worlds");
  require_unique(k.labels, "kripke domain");
  const std::size_t m = k.worlds(), n = k.size();
  require(m > 0, "kripke: no worlds");
  require_square(k.before, m, m, "kripke accessibility");
  require(k.domain.size() == m, "kripke: one domain per world");
  require(k.members.size() == m, "kripke: one membership relation per world");
  for (std::size_t w = 0; w < m; ++w) {
    require(k.domain[w].size() == n, "kripke: domain width");
    require_square(k.members[w], n, n, "kripke members");
    for (std::size_t a = 0; a < n; ++a) {
      if (k.members[w][a].none()) continue;
      require(k.domain[w][a], "kripke: membership at world " + k.world_labels[w] + " involves non-existent " + k.labels[a]);
      require(k.members[w][a].is_subset_of(k.domain[w]),
              "kripke: membership at world " + k.world_labels[w] + " involves a non-existent member of " + k.labels[a]);
    }
  }
  const FrameReport f = frame_report(k);
  require(f.irreflexive && f.transitive, "kripke: accessibility is not a strict partial order: " + f.first_failure);
  require(f.connected, "kripke: frame is not connected: " + f.first_failure);
}

}  // namespace levels::logic
