#include "levels/interp.hpp"

#include <chrono>
#include <unordered_map>
#include <unordered_set>

#include "levels/config.hpp"

namespace levels::interp {

namespace {

const HFSet kEmpty = HFSet();
const CHFSet kEmptyChf = CHFSet();

HFSet only_member(HFSet a) { return *a.members().begin(); }
CHFSet only_child(CHFSet a) { return *a.children().begin(); }

// f_j as computed among helow CHF sets: Zermelo numbers are LOW ladders.
CHFSet f_j_helow(CHFSet y) { return is_zermelo_chf(y) ? CHFSet::low({y}) : y; }

CHFSet f_j_helow_inv(CHFSet y) {
  if (y.is_low() && y.size() == 1 && is_zermelo_chf(only_child(y))) return only_child(y);
  return y;
}

// Per-thread memo tables; values are immutable interned handles.
template <class K, class V, class H>
std::unordered_map<K, V, H>& memo() {
  thread_local std::unordered_map<K, V, H> table;
  return table;
}

CHFSet h_inv_helow(CHFSet a) {
  auto& m = memo<std::uint32_t, CHFSet, std::hash<std::uint32_t>>();
  if (auto it = m.find(a.id()); it != m.end()) return it->second;
  if (!a.is_low()) throw DomainError("h is only invertible on helow sets");
  bool flagged = false;
  std::vector<CHFSet> kids;
  for (CHFSet x : a.children()) {
    if (x == kEmptyChf) flagged = true;
    else kids.push_back(h_inv_helow(f_j_helow_inv(x)));
  }
  const CHFSet c = CHFSet::make(flagged ? Polarity::High : Polarity::Low, std::move(kids));
  m.emplace(a.id(), c);
  return c;
}

bool is_zermelo_star(HFSet m) {
  // z•_0 = ∅, z•_{n+1} = {z•_n}• = {f_j(z•_n)}.
  while (m != kEmpty) {
    if (m.size() != 1 || only_member(m) == kEmpty) return false;
    m = f_j_inv(only_member(m));
  }
  return true;
}

CHFSet ocinj(CHFSet c) {
  // z_{n+1} ↦ v_n ↦ z_n, identity elsewhere.
  if (c.is_low() && c.size() == 1) {
    const CHFSet k = only_child(c);
    if (is_zermelo_chf(k)) {
      std::size_t n = 0;
      for (CHFSet z = k; z != kEmptyChf; z = only_child(z)) ++n;
      return v_chf(n);
    }
  }
  std::size_t n = 0;
  CHFSet v = c;
  for (; v.is_low() && v.size() == 1; v = only_child(v)) ++n;
  return v == CHFSet::universe() ? zermelo_chf(n) : c;
}

}  // namespace

HFSet zermelo(std::size_t n) {
  HFSet z;
  for (std::size_t i = 0; i < n; ++i) z = HFSet::singleton(z);
  return z;
}

bool is_zermelo(HFSet a) {
  while (a != kEmpty) {
    if (a.size() != 1) return false;
    a = only_member(a);
  }
  return true;
}

CHFSet zermelo_chf(std::size_t n) {
  CHFSet z;
  for (std::size_t i = 0; i < n; ++i) z = CHFSet::low({z});
  return z;
}

CHFSet v_chf(std::size_t n) {
  CHFSet v = CHFSet::universe();
  for (std::size_t i = 0; i < n; ++i) v = CHFSet::low({v});
  return v;
}

bool is_zermelo_chf(CHFSet a) {
  while (a != kEmptyChf) {
    if (!a.is_low() || a.size() != 1) return false;
    a = only_child(a);
  }
  return true;
}

HFSet f_j(HFSet a) { return is_zermelo(a) ? HFSet::singleton(a) : a; }

HFSet f_j_inv(HFSet a) {
  if (a == kEmpty) throw DomainError("∅ is not in the range of f_j");
  if (a.size() == 1 && is_zermelo(only_member(a))) return only_member(a);
  return a;
}

bool mem_star(HFSet x, HFSet a) { return a.contains(f_j(x)) == !a.contains(kEmpty); }

HFSet star_complement(HFSet a) {
  return a.contains(kEmpty) ? diff(a, HFSet::singleton(kEmpty)) : set_union(a, HFSet::singleton(kEmpty));
}

HFSet w_level(std::size_t gamma) {
  if (gamma > 3) throw CapExceeded("w_level index", gamma, 3);
  std::vector<HFSet> w = {kEmpty};
  for (std::size_t g = 1; g <= gamma; ++g) {
    std::vector<HFSet> next;
    for (std::size_t b = 0; b < g; ++b)
      for (HFSet x : powerset(set_union(w[b], HFSet::singleton(kEmpty))).members()) next.push_back(f_j(x));
    w.push_back(HFSet::of(std::move(next)));
  }
  return w[gamma];
}

HFSet encode_star(CHFSet c) {
  std::vector<HFSet> kids;
  for (CHFSet x : c.children()) kids.push_back(f_j(encode_star(x)));
  if (c.is_high()) kids.push_back(kEmpty);
  return HFSet::of(std::move(kids));
}

CHFSet decode_star(HFSet a) {
  std::vector<CHFSet> kids;
  bool flagged = false;
  for (HFSet y : a.members()) {
    if (y == kEmpty) flagged = true;
    else kids.push_back(decode_star(f_j_inv(y)));
  }
  return CHFSet::make(flagged ? Polarity::High : Polarity::Low, std::move(kids));
}

CHFSet h_bij_chf(CHFSet c) {
  auto& m = memo<CHFSet, CHFSet, CHFSetHash>();
  if (auto it = m.find(c); it != m.end()) return it->second;
  // For low c the members are its children; for high c the non-members are.
  std::vector<CHFSet> kids;
  for (CHFSet x : c.children()) kids.push_back(f_j_helow(h_bij_chf(x)));
  if (c.is_high()) kids.push_back(kEmptyChf);
  const CHFSet h = CHFSet::low(std::move(kids));
  m.emplace(c, h);
  return h;
}

HFSet h_bij(CHFSet c) { return hf_of_helow(h_bij_chf(c)); }

CHFSet h_inv(HFSet a) { return h_inv_helow(helow_of_hf(a)); }

CHFSet f_j_circ(CHFSet c) {
  const CHFSet h = h_bij_chf(c);
  // Zermelo° numbers are those whose image is a Zermelo number; {c}° is the
  // preimage of {h(c)}.
  return is_zermelo_chf(h) ? h_inv_helow(CHFSet::low({h})) : c;
}

bool mem_circ(CHFSet x, CHFSet a) { return member_chf(h_bij_chf(x), h_bij_chf(a)); }

bool mem_circ(HFSet x, HFSet a) { return mem_circ(h_inv(x), h_inv(a)); }

HFSet h_star(HFSet a) {
  auto& m = memo<HFSet, HFSet, HFSetHash>();
  if (auto it = m.find(a); it != m.end()) return it->second;
  // Both for low• and high• a, the relevant sets are f_j⁻¹ of the nonempty
  // members: members of a low• set, non-members of a high• set.
  std::vector<HFSet> star_members;
  for (HFSet y : a.members()) {
    if (y == kEmpty) continue;
    const HFSet v = h_star(f_j_inv(y));
    star_members.push_back(is_zermelo_star(v) ? HFSet::singleton(f_j(v)) : v);
  }
  if (a.contains(kEmpty)) star_members.push_back(kEmpty);
  // The low• set with exactly these •-members.
  std::vector<HFSet> raw;
  for (HFSet n : star_members) raw.push_back(f_j(n));
  const HFSet out = HFSet::of(std::move(raw));
  m.emplace(a, out);
  return out;
}

models::CheckReport verify_round_trips(std::size_t d) {
  if (d > 3) throw CapExceeded("round-trip depth", d, 3);
  models::CheckReport report;
  report.suite = "interpretation round trips";
  const std::vector<CHFSet> chf = d == 0 ? std::vector<CHFSet>{} : universe_chf(d);
  std::vector<HFSet> hf;
  for (HFSet x : v_level(d + 1).members()) hf.push_back(x);

  auto run = [&](const char* name, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    models::Verdict v;
    v.axiom = name;
    const std::string fail = body();
    if (!fail.empty()) {
      v.holds = false;
      v.witness = logic::Assignment{};
      v.detail = fail;
    }
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.verdicts.push_back(std::move(v));
  };

  run("encode-decode", [&]() -> std::string {
    for (CHFSet c : chf)
      if (decode_star(encode_star(c)) != c) return to_string(c);
    for (HFSet a : hf)
      if (encode_star(decode_star(a)) != a) return to_string(a);
    return {};
  });
  run("h-agrees-with-encoding", [&]() -> std::string {
    for (CHFSet c : chf)
      if (h_bij(c) != encode_star(c)) return to_string(c);
    return {};
  });
  run("h-injective-and-inverse", [&]() -> std::string {
    std::unordered_set<HFSet, HFSetHash> seen;
    for (CHFSet c : chf) {
      if (!is_helow(h_bij_chf(c))) return "not helow: " + to_string(c);
      if (!seen.insert(h_bij(c)).second) return "collision at " + to_string(c);
      if (h_inv(h_bij(c)) != c) return "inverse fails at " + to_string(c);
    }
    for (HFSet a : hf)
      if (h_bij(h_inv(a)) != a) return "not onto " + to_string(a);
    return {};
  });
  run("membership-via-star", [&]() -> std::string {
    // x ∈ a iff (f_j°(x) ∈° a ↔ ∅° ∉° a), with every notion read through h.
    for (CHFSet a : chf) {
      const bool flag = mem_circ(kEmptyChf, a);
      for (CHFSet x : chf)
        if (member_chf(x, a) != (mem_circ(f_j_circ(x), a) == !flag)) return to_string(x) + " in " + to_string(a);
    }
    return {};
  });
  run("membership-via-star-encoding", [&]() -> std::string {
    for (CHFSet a : chf)
      for (CHFSet x : chf)
        if (member_chf(x, a) != mem_star(encode_star(x), encode_star(a)))
          return to_string(x) + " in " + to_string(a);
    return {};
  });
  run("membership-via-circ", [&]() -> std::string {
    // x ∈ a iff h•(x) ∈• h•(a), h• being h run inside (HF, ∈•).
    for (HFSet a : hf)
      for (HFSet x : hf)
        if (member(x, a) != mem_star(h_star(x), h_star(a))) return to_string(x) + " in " + to_string(a);
    return {};
  });
  run("membership-via-circ-isomorphism", [&]() -> std::string {
    for (HFSet a : hf)
      if (h_star(a) != encode_star(h_bij_chf(decode_star(a)))) return to_string(a);
    return {};
  });
  run("h-ladder", [&]() -> std::string {
    for (std::size_t n = 0; n <= 4; ++n) {
      if (h_bij(zermelo_chf(n)) != zermelo(2 * n)) return "z_" + std::to_string(n);
      if (h_bij(v_chf(n)) != zermelo(2 * n + 1)) return "v_" + std::to_string(n);
    }
    return {};
  });
  run("successor-ladder", [&]() -> std::string {
    for (std::size_t n = 0; n <= 3; ++n) {
      if (f_j_circ(zermelo_chf(n)) != v_chf(n)) return "z_" + std::to_string(n);
      if (f_j_circ(v_chf(n)) != zermelo_chf(n + 1)) return "v_" + std::to_string(n);
    }
    return {};
  });
  run("commuting-square", [&]() -> std::string {
    for (CHFSet c : chf)
      if (h_bij(f_j_circ(c)) != f_j(h_bij(c))) return to_string(c);
    return {};
  });
  run("unflag-ladder", [&]() -> std::string {
    // Read through the encoding, z_{n+1} ↦ v_n ↦ z_n undoes f_j off ∅.
    for (HFSet x : hf) {
      if (x == kEmpty) continue;
      if (f_j(encode_star(ocinj(decode_star(x)))) != x) return to_string(x);
    }
    return {};
  });
  run("w-levels", [&]() -> std::string {
    for (std::size_t g = 0; g <= d; ++g)
      if (decode_star(w_level(g)) != blevel(g)) return "W_" + std::to_string(g);
    return {};
  });
  return report;
}

}  // namespace levels::interp
