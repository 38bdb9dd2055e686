#include "levels/models.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "levels/config.hpp"

namespace levels::models {

using logic::Evaluator;
using logic::Op;
using logic::Sort;
using logic::Value;

namespace {

CheckOptions stop_early() {
  CheckOptions o;
  o.stop_at_first_failure = true;
  return o;
}

EpsilonStructure checked_size(EpsilonStructure e) {
  if (e.size() > limits().max_structure) throw CapExceeded("structure size", e.size(), limits().max_structure);
  return e;
}

bool subset_bits(const Bits& a, const Bits& b) { return a.is_subset_of(b); }

std::vector<std::size_t> satisfying(const EpsilonStructure& e, const char* name) {
  Evaluator ev(e);
  const Formula f = logic::def(name, {logic::Term("p")});
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (ev.eval(f, {{"p", i}})) out.push_back(i);
  std::stable_sort(out.begin(), out.end(),
                   [&](std::size_t a, std::size_t b) { return e.members[a].count() < e.members[b].count(); });
  return out;
}

}  // namespace

// ---- universes --------------------------------------------------------------

std::vector<HFSet> lt_sets(std::size_t n) {
  if (n < 1) throw DomainError("universe height must be at least 1");
  if (n > 5) throw CapExceeded("lt universe height", n, 5);
  std::vector<HFSet> out;
  for (HFSet x : v_level(n).members()) out.push_back(x);
  return out;
}

std::vector<CHFSet> blt_sets(std::size_t n) {
  if (n < 1) throw DomainError("universe height must be at least 1");
  if (n > 3) throw CapExceeded("blt universe height", n, 3);
  return universe_chf(n);
}

EpsilonStructure epsilon_of(const std::vector<HFSet>& sets) {
  std::unordered_map<HFSet, std::size_t, HFSetHash> index;
  for (std::size_t i = 0; i < sets.size(); ++i) index.emplace(sets[i], i);
  EpsilonStructure e;
  e.members.assign(sets.size(), Bits(sets.size()));
  for (std::size_t a = 0; a < sets.size(); ++a) {
    e.labels.push_back(to_string(sets[a]));
    for (HFSet x : sets[a].members()) {
      auto it = index.find(x);
      if (it != index.end()) e.members[a].set(it->second);
    }
  }
  return e;
}

EpsilonStructure epsilon_of(const std::vector<CHFSet>& sets) {
  EpsilonStructure e;
  e.members.assign(sets.size(), Bits(sets.size()));
  for (std::size_t a = 0; a < sets.size(); ++a) {
    e.labels.push_back(to_string(sets[a]));
    for (std::size_t x = 0; x < sets.size(); ++x)
      if (member_chf(sets[x], sets[a])) e.members[a].set(x);
  }
  return e;
}

EpsilonStructure lt_universe(std::size_t n) {
  if (n > 5) throw CapExceeded("lt universe height", n, 5);
  if (n == 5) throw CapExceeded("structure size", 65536, limits().max_structure);
  return checked_size(epsilon_of(lt_sets(n)));
}

EpsilonStructure lt_universe_ranked(std::size_t n) {
  const std::vector<HFSet> sets = lt_sets(n);
  EpsilonStructure e = checked_size(epsilon_of(sets));
  std::vector<Bits> below(sets.size(), Bits(sets.size()));
  for (std::size_t b = 0; b < sets.size(); ++b)
    for (std::size_t x = 0; x < sets.size(); ++x)
      if (sets[x].depth() < sets[b].depth()) below[b].set(x);
  e.below = std::move(below);
  return e;
}

EpsilonStructure blt_universe(std::size_t n) { return checked_size(epsilon_of(blt_sets(n))); }

boost::multiprecision::cpp_int closed_form_count(std::size_t n, Kind kind) {
  using boost::multiprecision::cpp_int;
  if (n < 1) throw DomainError("count index must be at least 1");
  constexpr std::size_t kMaxExponent = std::size_t{1} << 24;
  cpp_int v = kind == Kind::LT ? 1 : 2;
  for (std::size_t i = 1; i < n; ++i) {
    const cpp_int e = kind == Kind::LT ? v : v + 1;
    if (e > kMaxExponent) throw CapExceeded("closed-form exponent", SIZE_MAX, kMaxExponent);
    v = cpp_int(1) << e.convert_to<std::size_t>();
  }
  return v;
}

std::size_t materialized_count(std::size_t n, Kind kind) {
  return kind == Kind::LT ? lt_sets(n).size() : blt_sets(n).size();
}

std::vector<std::size_t> levels_of(const EpsilonStructure& e) { return satisfying(e, "Lev"); }
std::vector<std::size_t> blevels_of(const EpsilonStructure& e) { return satisfying(e, "BLev"); }

bool well_ordered_by_membership(const EpsilonStructure& e, const std::vector<std::size_t>& elems) {
  // Finite strict linear orders are well-orders.
  for (std::size_t a : elems) {
    if (e.in(a, a)) return false;
    for (std::size_t b : elems) {
      if (a != b && e.in(a, b) == e.in(b, a)) return false;
      for (std::size_t c : elems)
        if (e.in(a, b) && e.in(b, c) && !e.in(a, c)) return false;
    }
  }
  return true;
}

namespace {

void require_theory(const EpsilonStructure& e, const char* suite_name) {
  const CheckReport r = check_axioms(e, suite(suite_name), stop_early());
  if (!r.all_hold()) {
    for (const Verdict& v : r.verdicts)
      if (!v.holds) throw DomainError(std::string("input fails ") + suite_name + " axiom " + v.axiom);
  }
}

StageStructure stage_structure(const EpsilonStructure& e, const std::vector<std::size_t>& stages, bool boolean) {
  StageStructure s;
  const std::size_t n = e.size();
  s.set_labels = e.labels;
  s.members = e.members;
  for (std::size_t t : stages) s.stage_labels.push_back(e.labels[t]);
  s.before.assign(stages.size(), Bits(stages.size()));
  s.found_at.assign(stages.size(), Bits(n));
  for (std::size_t ti = 0; ti < stages.size(); ++ti) {
    for (std::size_t si = 0; si < stages.size(); ++si)
      if (e.in(stages[si], stages[ti])) s.before[ti].set(si);
    const Bits& lev = e.members[stages[ti]];
    for (std::size_t x = 0; x < n; ++x) {
      Bits comp = ~e.members[x];
      if (subset_bits(e.members[x], lev) || (boolean && subset_bits(comp, lev))) s.found_at[ti].set(x);
    }
  }
  if (boolean) {
    Bits low(n), high(n);
    for (std::size_t x = 0; x < n; ++x) (e.in(x, x) ? high : low).set(x);
    s.low = std::move(low);
    s.high = std::move(high);
  }
  return s;
}

}  // namespace

StageStructure st_structure_from_lt(const EpsilonStructure& a) {
  logic::validate(a);
  require_theory(a, "LT");
  const std::vector<std::size_t> lev = levels_of(a);
  if (!well_ordered_by_membership(a, lev)) throw DomainError("levels are not well-ordered by membership");
  return stage_structure(a, lev, false);
}

StageStructure bst_structure_from_blt(const EpsilonStructure& b) {
  logic::validate(b);
  require_theory(b, "BLT");
  const std::vector<std::size_t> lev = blevels_of(b);
  if (!well_ordered_by_membership(b, lev)) throw DomainError("boolean-levels are not well-ordered by membership");
  return stage_structure(b, lev, true);
}

// ---- suites -----------------------------------------------------------------

namespace {

Axiom ax(std::string name, std::string_view text) {
  Formula f = logic::parse_formula(text);
  bool so = false;
  std::vector<Formula> todo = {f};
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (g.op() == Op::ForAllP || g.op() == Op::ExistsP || g.op() == Op::ForAllF || g.op() == Op::ExistsF) so = true;
    for (const Formula& k : g.kids()) todo.push_back(k);
  }
  return {std::move(name), std::move(f), so};
}

constexpr std::string_view kExt = "(forall a (forall b (implies (forall x (iff (in x a) (in x b))) (eq a b))))";
constexpr std::string_view kOrder =
    "(forall-stage r (forall-stage s (forall-stage t (implies (and (before r s) (before s t)) (before r t)))))";
constexpr std::string_view kStaging = "(forall a (exists-stage s (at a s)))";

// Second-order schemes quantify over properties of the relevant members only;
// every instance outside that carrier has the same truth value as its
// restriction, so the bounded form is equivalent.
std::vector<AxiomSuite> build_suites() {
  std::vector<AxiomSuite> out;
  const Axiom ext = ax("Extensionality", kExt);
  const Axiom sep = ax("Separation",
                       "(forall a (forallP (F x (in x a)) (exists b (forall x (iff (in x b) (and (F x) (in x a)))))))");
  const Axiom strat = ax("Stratification", "(forall a (exists s (and (Lev s) (Sub a s))))");

  out.push_back({"ST", Target::Stage,
                 {ext, ax("Order", kOrder), ax("Staging", kStaging),
                  ax("Priority", "(forall-stage s (forall a (implies (at a s) (forall x (implies (in x a) "
                                 "(FoundBefore x s))))))"),
                  ax("Specification", "(forall-stage s (forallP (F x (FoundBefore x s)) (exists a (and (at a s) "
                                      "(forall x (iff (F x) (in x a)))))))")},
                 {}});

  out.push_back({"LT", Target::Epsilon, {ext, sep, strat}, {}});
  const Axiom endless = ax("Endless", "(forall s (implies (Lev s) (exists t (and (Lev t) (in s t)))))");
  out.push_back({"LT+Endless", Target::Epsilon, {ext, sep, strat, endless}, {}});
  out.push_back({"LT+Infinity", Target::Epsilon,
                 {ext, sep, strat,
                  ax("Infinity", "(exists s (and (Lev s) (exists q (and (Lev q) (in q s))) (forall q (implies "
                                 "(and (Lev q) (in q s)) (exists r (and (Lev r) (in q r) (in r s)))))))")},
                 {}});
  out.push_back({"LT+Unbounded", Target::Epsilon,
                 {ext, sep, strat,
                  ax("Unbounded", "(forall a (forallF (P x (in x a)) (exists s (and (Lev s) (forall x (implies "
                                  "(in x a) (in (P x) s)))))))")},
                 {}});

  out.push_back(
      {"BST", Target::Stage,
       {ext, ax("Order", kOrder), ax("Staging", kStaging), ax("Cases", "(forall a (or (low a) (high a)))"),
        ax("PriorityLow", "(forall-stage s (forall a (implies (and (low a) (at a s)) (forall x (implies (in x a) "
                          "(FoundBefore x s))))))"),
        ax("PriorityHigh", "(forall-stage s (forall a (implies (and (high a) (at a s)) (forall x (implies "
                           "(notin x a) (FoundBefore x s))))))"),
        ax("SpecificationLow", "(forall-stage s (forallP (F x (FoundBefore x s)) (exists a (and (low a) (at a s) "
                               "(forall x (iff (F x) (in x a)))))))"),
        ax("SpecificationHigh", "(forall-stage s (forallP (F x (FoundBefore x s)) (exists a (and (high a) "
                                "(at a s) (forall x (iff (F x) (notin x a)))))))")},
       {}});

  const Axiom comp = ax("Complements", "(forall a (exists c (and (Compl c a) (iff (notin a a) (in c c)))))");
  const Axiom bsep =
      ax("SeparationLow", "(forall a (implies (notin a a) (forallP (F x (in x a)) (exists b (and (notin b b) "
                          "(forall x (iff (in x b) (and (F x) (in x a)))))))))");
  const Axiom bstrat = ax("StratificationLow", "(forall a (implies (notin a a) (exists s (and (BLev s) (Sub a s)))))");
  out.push_back({"BLT", Target::Epsilon, {ext, comp, bsep, bstrat}, {}});
  out.push_back({"BLT+Endless∉", Target::Epsilon,
                 {ext, comp, bsep, bstrat,
                  ax("EndlessLow", "(forall s (implies (BLev s) (exists t (and (BLev t) (in s t)))))")},
                 {}});

  out.push_back(
      {"Scott1957", Target::Ranked,
       {ext,
        ax("RankComparison",
           "(forall a (forall b (iff (before a b) (exists x (and (before x b) (not (before x a)))))))"),
        ax("RankInduction", "(forallP F (implies (forall a (implies (forall x (implies (before x a) (F x))) (F a))) "
                            "(forall a (F a))))"),
        ax("RankSeparation", "(forall a (forallP (F x (before x a)) (exists b (forall x (iff (in x b) (and (F x) "
                             "(before x a)))))))")},
       {}});

  out.push_back({"Scott1967", Target::Epsilon,
                 {ext, sep,
                  ax("Accumulation", "(forall s (implies (Lev s) (forall x (iff (in x s) (exists c (and (in c s) "
                                     "(Lev c) (or (in x c) (Sub x c))))))))"),
                  ax("Restriction", "(forall a (exists s (and (Lev s) (Sub a s))))")},
                 {}});

  out.push_back({"MSRankFree", Target::Epsilon,
                 {ext, sep,
                  ax("Hierarchy", "(forall a (exists h (forall k (implies (Sub k h) (exists s (and (IsPot s k) "
                                  "(or (in s h) (Sub a s))))))))")},
                 {}});

  const std::vector<Axiom> pst = {
      ax("Membership◇", "(forall a (box (forall x (implies (dia (in x a)) (box (implies (E! a) (in x a)))))))"),
      ax("Extensionality◇", "(forall a (box (forall b (implies (box (forall x (iff (dia (in x a)) (dia (in x b))))) "
                            "(dia (eq a b))))))"),
      ax("Priority⟨", "(forall a (forall x (implies (in x a) (past (E! x)))))"),
      ax("Specification⟨", "(forallP (F x (past (E! x))) (exists a (forall x (iff (F x) (in x a)))))")};
  const std::vector<FrameCondition> pst_frame = {FrameCondition::Transitive, FrameCondition::PastDirected,
                                                 FrameCondition::Connected};
  out.push_back({"PST", Target::Kripke, pst, pst_frame});
  std::vector<FrameCondition> lpst_frame = pst_frame;
  lpst_frame.push_back(FrameCondition::Linear);
  out.push_back({"LPST", Target::Kripke, pst, lpst_frame});

  out.push_back({"PST-consequences", Target::Kripke,
                 {ext, sep, strat, ax("Persistence", "(forall x (always-future (E! x)))"),
                  ax("MaxlevExists", "(exists s (and (Lev s) (Maxlev s)))"),
                  ax("EveryLevelMaxlevSomewhere", "(forall s (implies (Lev s) (dia (Maxlev s))))")},
                 {}});

  out.push_back(
      {"BLT-ZF-facts", Target::Epsilon,
       {ax("EmptySet", "(exists a (Empty a))"),
        ax("Union", "(forall a (exists c (forall x (iff (in x c) (exists y (and (in y a) (in x y)))))))"),
        ax("PowersetsFail", "(exists a (not (exists b (forall x (iff (in x b) (Sub x a))))))"),
        ax("HighFoundation", "(forall a (implies (in a a) (exists x (and (in x a) (forall y (not (and (in y a) "
                             "(in y x))))))))"),
        ax("FoundationFailsAtSingletonV",
           "(exists a (and (forall y (iff (in y a) (forall z (in z y)))) (not (Empty a)) (forall x (implies (in x a) "
           "(exists y (and (in y a) (in y x)))))))")},
       {}});
  return out;
}

const std::vector<AxiomSuite>& all_suites() {
  static const std::vector<AxiomSuite> s = build_suites();
  return s;
}

std::string set_label(const Structure& s, std::size_t i) {
  if (const auto* e = std::get_if<EpsilonStructure>(&s)) return e->labels[i];
  if (const auto* t = std::get_if<StageStructure>(&s)) return t->set_labels[i];
  return std::get<KripkeStructure>(s).labels[i];
}

std::string render(const Structure& s, const Formula& f, const Assignment& w) {
  // Binder sorts decide whether an index names a set or a stage.
  std::map<std::string, Sort> sorts;
  for (Formula g = f; g.op() == Op::ForAll || g.op() == Op::ForAllP || g.op() == Op::ForAllF; g = g.body())
    sorts[g.name()] = g.sort();
  std::string out;
  for (const auto& [name, v] : w) {
    if (!out.empty()) out += ", ";
    out += name + "=";
    if (const auto* x = std::get_if<std::size_t>(&v)) {
      const auto* st = std::get_if<StageStructure>(&s);
      out += (st && sorts[name] == Sort::Stage) ? st->stage_labels[*x] : set_label(s, *x);
    } else if (const auto* b = std::get_if<Bits>(&v)) {
      out += "{";
      bool first = true;
      for (std::size_t i : logic::indices(*b)) {
        out += (first ? "" : ", ") + set_label(s, i);
        first = false;
      }
      out += "}";
    } else {
      const auto& fn = std::get<std::vector<std::size_t>>(v);
      out += "[";
      for (std::size_t i = 0; i < fn.size(); ++i) out += (i ? ", " : "") + set_label(s, fn[i]);
      out += "]";
    }
  }
  return out.empty() ? "(closed formula is false)" : out;
}

void require_target(const Structure& s, const AxiomSuite& suite) {
  const bool ok = [&] {
    switch (suite.target) {
      case Target::Epsilon:
        return std::holds_alternative<EpsilonStructure>(s) || std::holds_alternative<KripkeStructure>(s);
      case Target::Ranked: {
        const auto* e = std::get_if<EpsilonStructure>(&s);
        return e && e->below.has_value();
      }
      case Target::Stage: return std::holds_alternative<StageStructure>(s);
      case Target::Kripke: return std::holds_alternative<KripkeStructure>(s);
    }
    return false;
  }();
  if (!ok) throw DomainError("suite " + suite.name + " does not apply to a " + logic::kind_name(s) + " structure");
}

Verdict frame_verdict(const KripkeStructure& k, FrameCondition c) {
  const logic::FrameReport r = logic::frame_report(k);
  Verdict v;
  switch (c) {
    case FrameCondition::Transitive: v.axiom = "Frame:transitive"; v.holds = r.transitive; break;
    case FrameCondition::PastDirected: v.axiom = "Frame:past-directed"; v.holds = r.past_directed; break;
    case FrameCondition::Connected: v.axiom = "Frame:connected"; v.holds = r.connected; break;
    case FrameCondition::Linear: v.axiom = "Frame:linear"; v.holds = r.linear; break;
  }
  if (!v.holds) {
    v.witness = Assignment{};
    v.detail = r.first_failure;
  }
  return v;
}

bool self_membered_somewhere(const Structure& s) {
  const auto* e = std::get_if<EpsilonStructure>(&s);
  if (!e) return false;
  for (std::size_t i = 0; i < e->size(); ++i)
    if (e->in(i, i)) return true;
  return false;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const AxiomSuite& s : all_suites()) n.push_back(s.name);
    return n;
  }();
  return names;
}

const AxiomSuite& suite(std::string_view name) {
  for (const AxiomSuite& s : all_suites())
    if (s.name == name) return s;
  // Accept the ASCII spelling of the boolean Endless suite.
  if (name == "BLT+Endless" || name == "BLT+EndlessLow") return suite("BLT+Endless∉");
  throw DomainError("unknown axiom suite: " + std::string(name));
}

bool CheckReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.holds; });
}

const Verdict* CheckReport::find(std::string_view axiom) const {
  for (const Verdict& v : verdicts)
    if (v.axiom == axiom) return &v;
  return nullptr;
}

CheckReport check_axioms(const Structure& s, const AxiomSuite& suite, CheckOptions opt) {
  require_target(s, suite);
  CheckReport report;
  report.suite = suite.name;
  report.informative = (suite.name == "Scott1967" || suite.name == "MSRankFree") && self_membered_somewhere(s);
  Evaluator ev(s, opt.eval);
  const auto* kripke = std::get_if<KripkeStructure>(&s);
  for (const Axiom& a : suite.axioms) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.axiom = a.name;
    if (kripke) {
      for (std::size_t w = 0; w < kripke->worlds() && v.holds; ++w) {
        if (auto cex = ev.counterexample(a.formula, {}, w)) {
          v.holds = false;
          v.witness = std::move(cex);
          v.world = w;
        }
      }
    } else if (auto cex = ev.counterexample(a.formula)) {
      v.holds = false;
      v.witness = std::move(cex);
    }
    if (!v.holds) {
      v.detail = render(s, a.formula, *v.witness);
      if (v.world) v.detail += " at world " + kripke->world_labels[*v.world];
    }
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool failed = !v.holds;
    report.verdicts.push_back(std::move(v));
    if (failed && opt.stop_at_first_failure) return report;
  }
  if (kripke) {
    for (FrameCondition c : suite.frame) {
      report.verdicts.push_back(frame_verdict(*kripke, c));
      if (!report.verdicts.back().holds && opt.stop_at_first_failure) return report;
    }
  }
  return report;
}

bool witness_refutes(const Structure& s, const AxiomSuite& suite, const Verdict& v) {
  if (v.holds || !v.witness) return false;
  if (v.axiom.rfind("Frame:", 0) == 0) {
    const auto& k = std::get<KripkeStructure>(s);
    return !frame_verdict(k, v.axiom == "Frame:transitive"     ? FrameCondition::Transitive
                             : v.axiom == "Frame:past-directed" ? FrameCondition::PastDirected
                             : v.axiom == "Frame:connected"     ? FrameCondition::Connected
                                                                : FrameCondition::Linear)
                .holds;
  }
  const Axiom* a = nullptr;
  for (const Axiom& x : suite.axioms)
    if (x.name == v.axiom) a = &x;
  if (!a) return false;
  // Bounded predicate witnesses must lie inside their carrier.
  Assignment partial;
  Formula g = a->formula;
  while (g.op() == Op::ForAll || g.op() == Op::ForAllP || g.op() == Op::ForAllF) {
    auto it = v.witness->find(g.name());
    if (it == v.witness->end()) return false;
    if (g.op() == Op::ForAllP && g.is_bounded()) {
      for (std::size_t i : logic::indices(std::get<Bits>(it->second))) {
        Assignment at = partial;
        at[g.bound_var()] = i;
        if (!logic::eval(s, g.bound(), at, v.world)) return false;
      }
    }
    partial[g.name()] = it->second;
    g = g.body();
  }
  return !logic::eval(s, g, *v.witness, v.world);
}

std::string to_text(const CheckReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << (r.informative ? " (informative)" : "") << "\n";
  for (const Verdict& v : r.verdicts) {
    out << "  " << (v.holds ? "holds " : "FAILS ") << v.axiom;
    if (!v.holds) out << "  witness: " << v.detail;
    out << "\n";
  }
  return out.str();
}

// ---- small models -----------------------------------------------------------

EpsilonStructure coded_structure(std::size_t k, std::uint64_t code) {
  EpsilonStructure e;
  e.members.assign(k, Bits(k));
  for (std::size_t a = 0; a < k; ++a) {
    e.labels.push_back("e" + std::to_string(a));
    for (std::size_t x = 0; x < k; ++x)
      if ((code >> (a * k + x)) & 1U) e.members[a].set(x);
  }
  return e;
}

namespace {

const std::vector<std::vector<std::size_t>>& permutations(std::size_t k) {
  static std::vector<std::vector<std::vector<std::size_t>>> cache(5);
  auto& perms = cache.at(k);
  if (perms.empty()) {
    std::vector<std::size_t> p(k);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  return perms;
}

std::uint64_t relabel(std::size_t k, std::uint64_t code, const std::vector<std::size_t>& p) {
  std::uint64_t out = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t x = 0; x < k; ++x)
      if ((code >> (a * k + x)) & 1U) out |= std::uint64_t{1} << (p[a] * k + p[x]);
  return out;
}

void require_small(std::size_t k) {
  if (k > 4) throw CapExceeded("enumeration size", k, 4);
}

}  // namespace

std::uint64_t canonical_code(std::size_t k, std::uint64_t code) {
  require_small(k);
  std::uint64_t best = code;
  for (const auto& p : permutations(k)) best = std::min(best, relabel(k, code, p));
  return best;
}

std::vector<EpsilonStructure> enumerate_structures(std::size_t k, const AxiomSuite& suite) {
  require_small(k);
  if (suite.target != Target::Epsilon) throw DomainError("enumeration takes one-sorted suites");
  std::vector<EpsilonStructure> out;
  const std::uint64_t total = std::uint64_t{1} << (k * k);
  for (std::uint64_t code = 0; code < total; ++code) {
    if (canonical_code(k, code) != code) continue;
    EpsilonStructure e = coded_structure(k, code);
    if (check_axioms(e, suite, stop_early()).all_hold()) out.push_back(std::move(e));
  }
  return out;
}

std::pair<EpsilonStructure, EpsilonStructure> scott1957_models() {
  // Quine atom a = {a} placed below ∅.
  EpsilonStructure quine = logic::make_epsilon({"0", "a"}, {{1, 1}});
  quine.below = std::vector<Bits>(2, Bits(2));
  (*quine.below)[0].set(1);

  // V_3 = {0, {0}, {{0}}, {0,{0}}} with {0} < 0 < {{0}}, {0,{0}}.
  EpsilonStructure v3 = epsilon_of(lt_sets(3));
  const std::vector<std::size_t> rank = {1, 0, 2, 2};  // by canonical index
  std::vector<Bits> below(4, Bits(4));
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t x = 0; x < 4; ++x)
      if (rank[x] < rank[b]) below[b].set(x);
  v3.below = std::move(below);
  return {std::move(quine), std::move(v3)};
}

// ---- embeddings -------------------------------------------------------------

namespace {

template <class Set, class Make>
std::optional<std::vector<Set>> decode(const EpsilonStructure& e, bool complemented, Make make) {
  const std::size_t n = e.size();
  std::vector<std::optional<Set>> val(n);
  std::size_t done = 0;
  for (bool progress = true; progress && done < n;) {
    progress = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (val[a]) continue;
      // A high element is determined by its non-members.
      const bool high = complemented && e.in(a, a);
      std::vector<Set> kids;
      bool ready = true;
      for (std::size_t x = 0; x < n && ready; ++x) {
        if (e.in(x, a) == high) continue;
        if (!val[x]) ready = false;
        else kids.push_back(*val[x]);
      }
      if (!ready) continue;
      val[a] = make(high, std::move(kids));
      ++done;
      progress = true;
    }
  }
  if (done < n) return std::nullopt;
  std::vector<Set> out;
  for (auto& v : val) out.push_back(*v);
  std::vector<Set> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  return out;
}

template <class Set>
EmbedResult embed_decoded(const std::vector<Set>& a, const std::vector<Set>& b) {
  const bool forward = a.size() <= b.size();
  const std::vector<Set>& small = forward ? a : b;
  const std::vector<Set>& big = forward ? b : a;
  auto height = [](const std::vector<Set>& v) {
    std::size_t h = 0;
    for (const Set& x : v) h = std::max<std::size_t>(h, x.depth() + 1);
    return h;
  };
  Embedding emb;
  emb.forward = forward;
  emb.source_height = height(small);
  emb.target_height = height(big);
  std::map<Set, std::size_t> where;
  for (std::size_t j = 0; j < big.size(); ++j) where.emplace(big[j], j);
  for (const Set& x : small) {
    auto it = where.find(x);
    if (it == where.end()) return {std::nullopt, "shorter model is not an initial segment of the taller: " + x.str()};
    emb.map.push_back(it->second);
  }
  std::size_t below_height = 0;
  for (const Set& y : big)
    if (y.depth() < emb.source_height) ++below_height;
  if (below_height != small.size()) return {std::nullopt, "image is not closed downward in rank"};
  return {std::move(emb), {}};
}

std::string violated(const EpsilonStructure& e, const char* name) {
  try {
    require_theory(e, name);
  } catch (const DomainError& err) {
    return err.what();
  }
  return {};
}

}  // namespace

std::optional<std::vector<HFSet>> decode_lt(const EpsilonStructure& e) {
  return decode<HFSet>(e, false, [](bool, std::vector<HFSet> kids) { return HFSet::of(std::move(kids)); });
}

std::optional<std::vector<CHFSet>> decode_blt(const EpsilonStructure& e) {
  return decode<CHFSet>(e, true, [](bool high, std::vector<CHFSet> kids) {
    return CHFSet::make(high ? Polarity::High : Polarity::Low, std::move(kids));
  });
}

EmbedResult embed_initial_segment(const EpsilonStructure& m, const EpsilonStructure& n, Kind kind) {
  const char* name = kind == Kind::LT ? "LT" : "BLT";
  for (const auto& [which, s] : {std::pair<const char*, const EpsilonStructure*>{"first", &m},
                                 std::pair<const char*, const EpsilonStructure*>{"second", &n}}) {
    const std::string err = violated(*s, name);
    if (!err.empty()) return {std::nullopt, std::string(which) + " structure: " + err};
  }
  if (kind == Kind::LT) {
    auto a = decode_lt(m), b = decode_lt(n);
    if (!a || !b) return {std::nullopt, std::string(a ? "second" : "first") + " structure is not well-founded"};
    return embed_decoded(*a, *b);
  }
  auto a = decode_blt(m), b = decode_blt(n);
  if (!a || !b) return {std::nullopt, std::string(a ? "second" : "first") + " structure is not rank-decodable"};
  return embed_decoded(*a, *b);
}

// ---- Kripke constructions ----------------------------------------------------

KripkeStructure potentialize(const EpsilonStructure& a) {
  logic::validate(a);
  for (const Verdict& v : check_axioms(a, suite("LT"), stop_early()).verdicts)
    if (!v.holds) throw DomainError("potentialization needs an LT model; " + v.axiom + " fails");
  const std::vector<std::size_t> lev = levels_of(a);
  const std::size_t n = a.size();
  KripkeStructure k;
  k.labels = a.labels;
  k.before.assign(lev.size(), Bits(lev.size()));
  for (std::size_t ti = 0; ti < lev.size(); ++ti) {
    k.world_labels.push_back(a.labels[lev[ti]]);
    for (std::size_t si = 0; si < lev.size(); ++si)
      if (a.in(lev[si], lev[ti])) k.before[ti].set(si);
    const Bits& s = a.members[lev[ti]];
    Bits dom(n);
    for (std::size_t x = 0; x < n; ++x)
      if (subset_bits(a.members[x], s)) dom.set(x);
    std::vector<Bits> mem(n, Bits(n));
    for (std::size_t b = 0; b < n; ++b)
      if (dom[b]) mem[b] = a.members[b];
    k.domain.push_back(std::move(dom));
    k.members.push_back(std::move(mem));
  }
  return k;
}

EpsilonStructure flatten(const KripkeStructure& p) {
  logic::validate(p);
  EpsilonStructure e;
  e.labels = p.labels;
  e.members.assign(p.size(), Bits(p.size()));
  for (std::size_t w = 0; w < p.worlds(); ++w)
    for (std::size_t b = 0; b < p.size(); ++b) e.members[b] |= p.members[w][b];
  return e;
}

KripkeStructure world_rename(const KripkeStructure& p, const std::vector<std::size_t>& f) {
  Bits hit(p.worlds());
  for (std::size_t w : f) {
    if (w >= p.worlds()) throw DomainError("world map points outside the structure");
    hit.set(w);
  }
  if (!hit.all()) throw DomainError("world map is not onto");
  KripkeStructure q;
  q.labels = p.labels;
  std::vector<std::size_t> seen(p.worlds(), 0);
  q.before.assign(f.size(), Bits(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t copy = seen[f[i]]++;
    q.world_labels.push_back(p.world_labels[f[i]] + (copy ? "#" + std::to_string(copy) : ""));
    for (std::size_t j = 0; j < f.size(); ++j)
      if (p.before[f[i]][f[j]]) q.before[i].set(j);
    q.domain.push_back(p.domain[f[i]]);
    q.members.push_back(p.members[f[i]]);
  }
  return q;
}

std::optional<std::vector<std::size_t>> recover_world_map(const KripkeStructure& p) {
  KripkeStructure q;
  try {
    q = potentialize(flatten(p));
  } catch (const DomainError&) {
    return std::nullopt;
  }
  std::vector<std::size_t> f;
  for (std::size_t w = 0; w < p.worlds(); ++w) {
    std::optional<std::size_t> match;
    for (std::size_t v = 0; v < q.worlds() && !match; ++v)
      if (q.domain[v] == p.domain[w] && q.members[v] == p.members[w]) match = v;
    if (!match) return std::nullopt;
    f.push_back(*match);
  }
  try {
    if (world_rename(q, f) != p) {
      // Labels of duplicated worlds may differ; compare the relational part.
      const KripkeStructure r = world_rename(q, f);
      if (r.before != p.before || r.domain != p.domain || r.members != p.members) return std::nullopt;
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return f;
}

}  // namespace levels::models
