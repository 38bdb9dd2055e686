#include "levels/logic/eval.hpp"

#include <bit>
#include <cstdint>
#include <unordered_map>

#include "levels/config.hpp"

namespace levels::logic {

namespace {

enum class Kern : int {
  Sub,
  CSub,
  Trans,
  Potent,
  IsPot,
  IsAcc,
  Hist,
  Lev,
  IsBPot,
  BHist,
  BLev,
  Helow,
  Compl,
  Count
};

struct KernInfo {
  const char* name;
  int arity;
};

constexpr KernInfo kKernels[] = {
    {"Sub", 2},  {"CSub", 2},  {"Trans", 1},  {"Potent", 1}, {"IsPot", 2}, {"IsAcc", 2}, {"Hist", 1},
    {"Lev", 1},  {"IsBPot", 2}, {"BHist", 1}, {"BLev", 1},   {"Helow", 1}, {"Compl", 2},
};

int kernel_id(std::string_view name) {
  for (int i = 0; i < static_cast<int>(Kern::Count); ++i)
    if (name == kKernels[i].name) return i;
  return -1;
}

enum class RowKind : std::uint8_t { Mem, NotMem, Pred };

struct Row {
  RowKind kind = RowKind::Mem;
  int term = -1;  // the set whose membership row is taken
  int pred = -1;  // predicate slot
};

enum class Fast : std::uint8_t {
  None,
  RowSubset,      // ∀x(R1 → R2)
  RowEqual,       // ∀x(R1 ↔ R2)
  RowAll,         // ∀x R1
  RowMeet,        // ∃x(R1 ∧ R2)
  RowAny,         // ∃x R1
  Bounded,        // quantifier restricted to the elements of R1
  Comprehension,  // ∃b(∀x(x ∈ b ↔ ψ) ∧ rest)
};

struct CTerm {
  int slot = -1;  // element slot, for variables
  int fun = -1;   // function slot, for applications
  int arg = -1;   // argument term, for applications
};

struct CNode {
  Op op = Op::True;
  Sort sort = Sort::Set;
  std::string name;
  int t0 = -1, t1 = -1;
  int slot = -1;
  int kernel = -1;
  std::vector<int> kids;
  Fast fast = Fast::None;
  Row r1, r2;
  // Comprehension
  int psi = -1;
  int xslot = -1;
  bool comp_neg = false;
  std::vector<int> rest;
  // Bounded second-order binder
  int bound = -1;
  int bound_slot = -1;
};

struct BitsTable {
  std::unordered_map<Bits, std::vector<std::size_t>> rows;
};

struct Ctx {
  std::vector<std::size_t> el;
  std::vector<Bits> pr;
  std::vector<std::vector<std::size_t>> fn;
  std::size_t w = 0;
};

}  // namespace

struct Evaluator::Impl {
  Structure s;
  EvalOptions opt;
  int kind = 0;  // 0 epsilon, 1 stage, 2 kripke
  std::size_t nsets = 0, nstages = 0;
  std::vector<Bits> after, reach;

  // Kernels, built on first use.
  bool base_ready = false;
  std::vector<Bits> sub_of;   // sub_of[c][x] iff x ⊆ c
  std::vector<Bits> csub_of;  // csub_of[c][x] iff complement of x ⊆ c
  std::vector<bool> have;
  std::vector<Bits> unary;
  std::vector<std::vector<Bits>> binary;

  // Comprehension lookup, keyed by world (0 for non-modal structures).
  std::map<std::size_t, BitsTable> tables;

  // Compiled program.
  std::vector<CNode> nodes;
  std::vector<CTerm> terms;
  std::vector<Sort> slot_sort;
  std::vector<std::string> slot_name;
  std::size_t npred = 0, nfun = 0;
  Ctx ctx;

  // Compile scopes.
  std::vector<std::pair<std::string, int>> el_scope, pr_scope, fn_scope;
  const Assignment* asg = nullptr;

  Impl(const Structure& st, EvalOptions o) : s(st), opt(o) {
    kind = static_cast<int>(s.index());
    if (kind == 0) {
      const auto& e = std::get<EpsilonStructure>(s);
      validate(e);
      nsets = e.size();
    } else if (kind == 1) {
      const auto& g = std::get<StageStructure>(s);
      validate(g);
      nsets = g.set_labels.size();
      nstages = g.stage_labels.size();
    } else {
      const auto& k = std::get<KripkeStructure>(s);
      validate(k);
      nsets = k.size();
      after = successors(k);
      reach = reachability(k);
    }
    have.assign(static_cast<std::size_t>(Kern::Count), false);
    unary.resize(static_cast<std::size_t>(Kern::Count));
    binary.resize(static_cast<std::size_t>(Kern::Count));
  }

  const EpsilonStructure& eps() const { return std::get<EpsilonStructure>(s); }
  const StageStructure& stg() const { return std::get<StageStructure>(s); }
  const KripkeStructure& kri() const { return std::get<KripkeStructure>(s); }

  // ---- structure access -------------------------------------------------

  const Bits& mem_row(std::size_t a) const {
    if (kind == 0) return eps().members[a];
    if (kind == 1) return stg().members[a];
    return kri().members[ctx.w][a];
  }

  Bits domain(Sort so) const {
    if (kind == 2) return kri().domain[ctx.w];
    return full_bits(so == Sort::Stage ? nstages : nsets);
  }

  std::size_t domain_size(Sort so) const { return so == Sort::Stage ? nstages : nsets; }

  bool exists_now(std::size_t x) const { return kind != 2 || kri().domain[ctx.w][x]; }

  // ---- kernels ------------------------------------------------------------

  void build_base() {
    if (base_ready) return;
    const auto& m = eps().members;
    const std::size_t n = nsets;
    sub_of.assign(n, Bits(n));
    csub_of.assign(n, Bits(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t c = 0; c < n; ++c) {
        if (m[x].is_subset_of(m[c])) sub_of[c].set(x);
        if ((m[x] | m[c]).all()) csub_of[c].set(x);
      }
    base_ready = true;
  }

  void build_kernel(int id) {
    if (have[static_cast<std::size_t>(id)]) return;
    build_base();
    const auto& m = eps().members;
    const std::size_t n = nsets;
    auto& un = unary[static_cast<std::size_t>(id)];
    auto& bin = binary[static_cast<std::size_t>(id)];
    auto self = [&](std::size_t c) { return m[c][c]; };
    auto pot_of = [&](std::size_t a) {
      Bits r(n);
      for (std::size_t c : indices(m[a])) r |= sub_of[c];
      return r;
    };
    auto bpot_of = [&](const Bits& among) {
      Bits r(n);
      for (std::size_t c : indices(among))
        if (!self(c)) r |= sub_of[c] | csub_of[c];
      return r;
    };
    auto equal_table = [&](const std::vector<Bits>& image) {
      // bin[b][a] iff members of b are exactly image[a]
      std::unordered_map<Bits, std::vector<std::size_t>> by_members;
      for (std::size_t b = 0; b < n; ++b) by_members[m[b]].push_back(b);
      bin.assign(n, Bits(n));
      for (std::size_t a = 0; a < n; ++a) {
        auto it = by_members.find(image[a]);
        if (it == by_members.end()) continue;
        for (std::size_t b : it->second) bin[b].set(a);
      }
    };
    auto image_flags = [&](const std::vector<Bits>& image, const Bits& which) {
      std::unordered_map<Bits, bool> targets;
      for (std::size_t h : indices(which)) targets[image[h]] = true;
      un = Bits(n);
      for (std::size_t x = 0; x < n; ++x)
        if (targets.count(m[x])) un.set(x);
    };
    switch (static_cast<Kern>(id)) {
      case Kern::Sub:
        bin.assign(n, Bits(n));
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t x : indices(sub_of[y])) bin[x].set(y);
        break;
      case Kern::CSub:
        bin.assign(n, Bits(n));
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t x : indices(csub_of[y])) bin[x].set(y);
        break;
      case Kern::Trans:
        un = Bits(n);
        for (std::size_t a = 0; a < n; ++a) {
          bool ok = true;
          for (std::size_t x : indices(m[a])) ok = ok && sub_of[a][x];
          un[a] = ok;
        }
        break;
      case Kern::Potent:
        un = Bits(n);
        for (std::size_t a = 0; a < n; ++a) {
          bool ok = true;
          for (std::size_t c : indices(m[a])) ok = ok && sub_of[c].is_subset_of(m[a]);
          un[a] = ok;
        }
        break;
      case Kern::IsPot: {
        std::vector<Bits> img(n);
        for (std::size_t a = 0; a < n; ++a) img[a] = pot_of(a);
        equal_table(img);
        break;
      }
      case Kern::IsAcc: {
        std::vector<Bits> img(n);
        for (std::size_t a = 0; a < n; ++a) {
          Bits r(n);
          for (std::size_t c : indices(m[a])) r |= m[c] | sub_of[c];
          img[a] = r;
        }
        equal_table(img);
        break;
      }
      case Kern::Hist:
        un = Bits(n);
        for (std::size_t h = 0; h < n; ++h) {
          bool ok = true;
          for (std::size_t x : indices(m[h])) {
            Bits r(n);
            for (std::size_t c : indices(m[x] & m[h])) r |= sub_of[c];
            ok = ok && r == m[x];
          }
          un[h] = ok;
        }
        break;
      case Kern::Lev: {
        build_kernel(static_cast<int>(Kern::Hist));
        std::vector<Bits> img(n);
        for (std::size_t h = 0; h < n; ++h) img[h] = pot_of(h);
        image_flags(img, unary[static_cast<std::size_t>(Kern::Hist)]);
        break;
      }
      case Kern::IsBPot: {
        std::vector<Bits> img(n);
        for (std::size_t a = 0; a < n; ++a) img[a] = bpot_of(m[a]);
        equal_table(img);
        break;
      }
      case Kern::BHist:
        un = Bits(n);
        for (std::size_t h = 0; h < n; ++h) {
          bool ok = !self(h);
          for (std::size_t x : indices(m[h])) ok = ok && bpot_of(m[x] & m[h]) == m[x];
          un[h] = ok;
        }
        break;
      case Kern::BLev: {
        build_kernel(static_cast<int>(Kern::BHist));
        std::vector<Bits> img(n);
        for (std::size_t h = 0; h < n; ++h) img[h] = bpot_of(m[h]);
        image_flags(img, unary[static_cast<std::size_t>(Kern::BHist)]);
        break;
      }
      case Kern::Helow: {
        build_kernel(static_cast<int>(Kern::Trans));
        const Bits& trans = unary[static_cast<std::size_t>(Kern::Trans)];
        std::vector<std::size_t> good;
        for (std::size_t c : indices(trans)) {
          bool ok = true;
          for (std::size_t x : indices(m[c])) ok = ok && !self(x);
          if (ok) good.push_back(c);
        }
        un = Bits(n);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t c : good)
            if (m[a].is_subset_of(m[c])) {
              un.set(a);
              break;
            }
        break;
      }
      case Kern::Compl: {
        bin.assign(n, Bits(n));
        std::unordered_map<Bits, std::vector<std::size_t>> by_members;
        for (std::size_t c = 0; c < n; ++c) by_members[m[c]].push_back(c);
        for (std::size_t a = 0; a < n; ++a) {
          auto it = by_members.find(~m[a]);
          if (it == by_members.end()) continue;
          for (std::size_t c : it->second) bin[c].set(a);
        }
        break;
      }
      case Kern::Count: break;
    }
    have[static_cast<std::size_t>(id)] = true;
  }

  // ---- compilation --------------------------------------------------------

  int new_slot(const std::string& name, Sort so) {
    slot_sort.push_back(so);
    slot_name.push_back(name);
    ctx.el.push_back(0);
    return static_cast<int>(slot_sort.size()) - 1;
  }

  Sort stage_sort() const { return kind == 1 ? Sort::Stage : Sort::Set; }

  int compile_term(const Term& t, std::optional<Sort> expect) {
    CTerm ct;
    if (t.is_var()) {
      int slot = -1;
      for (auto it = el_scope.rbegin(); it != el_scope.rend(); ++it)
        if (it->first == t.name) {
          slot = it->second;
          break;
        }
      if (slot < 0) {
        const Value* v = nullptr;
        if (asg) {
          auto it = asg->find(t.name);
          if (it != asg->end()) v = &it->second;
        }
        if (!v || !std::holds_alternative<std::size_t>(*v)) throw DomainError("unbound variable " + t.name);
        const Sort so = expect.value_or(Sort::Set);
        const std::size_t x = std::get<std::size_t>(*v);
        if (x >= domain_size(so)) throw DomainError("value of " + t.name + " out of range");
        slot = new_slot(t.name, so);
        ctx.el[static_cast<std::size_t>(slot)] = x;
        el_scope.insert(el_scope.begin(), {t.name, slot});  // outermost scope
      }
      if (expect && slot_sort[static_cast<std::size_t>(slot)] != *expect)
        throw DomainError("sort mismatch for " + t.name);
      ct.slot = slot;
    } else {
      if (expect && *expect != Sort::Set) throw DomainError("function values are sets: " + t.name);
      int slot = -1;
      for (auto it = fn_scope.rbegin(); it != fn_scope.rend(); ++it)
        if (it->first == t.name) {
          slot = it->second;
          break;
        }
      if (slot < 0) {
        const Value* v = nullptr;
        if (asg) {
          auto it = asg->find(t.name);
          if (it != asg->end()) v = &it->second;
        }
        if (!v || !std::holds_alternative<std::vector<std::size_t>>(*v))
          throw DomainError("unbound function variable " + t.name);
        const auto& g = std::get<std::vector<std::size_t>>(*v);
        if (g.size() != nsets) throw DomainError("function " + t.name + " has the wrong length");
        slot = static_cast<int>(nfun++);
        ctx.fn.push_back(g);
        fn_scope.insert(fn_scope.begin(), {t.name, slot});
      }
      ct.fun = slot;
      ct.arg = compile_term(t.args[0], Sort::Set);
    }
    terms.push_back(ct);
    return static_cast<int>(terms.size()) - 1;
  }

  int pred_slot(const std::string& name) {
    for (auto it = pr_scope.rbegin(); it != pr_scope.rend(); ++it)
      if (it->first == name) return it->second;
    const Value* v = nullptr;
    if (asg) {
      auto it = asg->find(name);
      if (it != asg->end()) v = &it->second;
    }
    if (!v || !std::holds_alternative<Bits>(*v)) throw DomainError("unbound predicate variable " + name);
    if (std::get<Bits>(*v).size() != nsets) throw DomainError("predicate " + name + " has the wrong width");
    const int slot = static_cast<int>(npred++);
    ctx.pr.push_back(std::get<Bits>(*v));
    pr_scope.insert(pr_scope.begin(), {name, slot});
    return slot;
  }

  int push(CNode n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  static bool term_mentions(const Term& t, const std::string& x) {
    if (t.name == x) return true;
    for (const Term& a : t.args)
      if (term_mentions(a, x)) return true;
    return false;
  }

  // Recognizes x ∈ t, x ∉ t and P(x) with t not depending on x.
  std::optional<Row> row_of(const Formula& g, const std::string& x) {
    if ((g.op() == Op::In || g.op() == Op::NotIn) && g.terms()[0] == Term(x) && !term_mentions(g.terms()[1], x)) {
      Row r;
      r.kind = g.op() == Op::In ? RowKind::Mem : RowKind::NotMem;
      r.term = compile_term(g.terms()[1], Sort::Set);
      return r;
    }
    if (g.op() == Op::Pred && g.terms().size() == 1 && g.terms()[0] == Term(x)) {
      Row r;
      r.kind = RowKind::Pred;
      r.pred = pred_slot(g.name());
      return r;
    }
    return std::nullopt;
  }

  static bool is_row_shape(const Formula& g, const std::string& x) {
    if ((g.op() == Op::In || g.op() == Op::NotIn) && g.terms()[0] == Term(x) && !term_mentions(g.terms()[1], x))
      return true;
    return g.op() == Op::Pred && g.terms().size() == 1 && g.terms()[0] == Term(x);
  }

  // ∀x(x ∈ b ↔ ψ) with b not free in ψ; returns (ψ, x, negated).
  static std::optional<std::tuple<Formula, std::string, bool>> comprehension_shape(const Formula& g,
                                                                                    const std::string& b) {
    if (g.op() != Op::ForAll || g.sort() != Sort::Set || g.name() == b) return std::nullopt;
    const Formula& body = g.body();
    if (body.op() != Op::Iff) return std::nullopt;
    const std::string& x = g.name();
    for (int side = 0; side < 2; ++side) {
      const Formula& a = body.kids()[static_cast<std::size_t>(side)];
      const Formula& psi = body.kids()[static_cast<std::size_t>(1 - side)];
      if ((a.op() == Op::In || a.op() == Op::NotIn) && a.terms()[0] == Term(x) && a.terms()[1] == Term(b) &&
          !free_vars(psi).count(b))
        return std::make_tuple(psi, x, a.op() == Op::NotIn);
    }
    return std::nullopt;
  }

  int compile_quantifier(const Formula& f) {
    CNode n;
    n.op = f.op();
    n.sort = f.sort();
    n.name = f.name();
    if (f.sort() == Sort::Stage && kind != 1) throw DomainError("stage quantifier needs a stage structure");
    const std::string& x = f.name();
    const Formula& body = f.body();
    n.slot = new_slot(x, f.sort());
    el_scope.emplace_back(x, n.slot);
    if (opt.fast_paths && f.sort() == Sort::Set) {
      if (f.op() == Op::ForAll) {
        if ((body.op() == Op::Implies || body.op() == Op::Iff) && is_row_shape(body.kids()[0], x) &&
            is_row_shape(body.kids()[1], x)) {
          n.fast = body.op() == Op::Implies ? Fast::RowSubset : Fast::RowEqual;
          n.r1 = *row_of(body.kids()[0], x);
          n.r2 = *row_of(body.kids()[1], x);
        } else if (is_row_shape(body, x)) {
          n.fast = Fast::RowAll;
          n.r1 = *row_of(body, x);
        } else if (body.op() == Op::Implies) {
          const Formula& ante = body.kids()[0];
          if (is_row_shape(ante, x)) {
            n.fast = Fast::Bounded;
            n.r1 = *row_of(ante, x);
          } else if (ante.op() == Op::And) {
            for (const Formula& k : ante.kids())
              if (is_row_shape(k, x)) {
                n.fast = Fast::Bounded;
                n.r1 = *row_of(k, x);
                break;
              }
          }
        }
      } else {
        if (body.op() == Op::And && body.kids().size() == 2 && is_row_shape(body.kids()[0], x) &&
            is_row_shape(body.kids()[1], x)) {
          n.fast = Fast::RowMeet;
          n.r1 = *row_of(body.kids()[0], x);
          n.r2 = *row_of(body.kids()[1], x);
        } else if (is_row_shape(body, x)) {
          n.fast = Fast::RowAny;
          n.r1 = *row_of(body, x);
        } else {
          // Comprehension: ∃b(∀y(y ∈ b ↔ ψ)) possibly among other conjuncts.
          std::vector<Formula> parts = body.op() == Op::And ? body.kids() : std::vector<Formula>{body};
          for (std::size_t i = 0; i < parts.size() && n.fast == Fast::None; ++i) {
            auto shape = comprehension_shape(parts[i], x);
            if (!shape) continue;
            auto& [psi, y, neg] = *shape;
            n.fast = Fast::Comprehension;
            n.comp_neg = neg;
            n.xslot = new_slot(y, Sort::Set);
            el_scope.emplace_back(y, n.xslot);
            n.psi = compile(psi);
            el_scope.pop_back();
            for (std::size_t j = 0; j < parts.size(); ++j)
              if (j != i) n.rest.push_back(compile(parts[j]));
          }
          if (n.fast == Fast::None && body.op() == Op::And) {
            for (const Formula& k : body.kids())
              if (is_row_shape(k, x)) {
                n.fast = Fast::Bounded;
                n.r1 = *row_of(k, x);
                break;
              }
          }
        }
      }
    }
    n.kids.push_back(compile(body));
    el_scope.pop_back();
    return push(std::move(n));
  }

  int compile_second_order(const Formula& f) {
    CNode n;
    n.op = f.op();
    n.name = f.name();
    const bool is_pred = f.op() == Op::ForAllP || f.op() == Op::ExistsP;
    if (f.is_bounded()) {
      n.bound_slot = new_slot(f.bound_var(), Sort::Set);
      el_scope.emplace_back(f.bound_var(), n.bound_slot);
      n.bound = compile(f.bound());
      el_scope.pop_back();
    }
    if (is_pred) {
      n.slot = static_cast<int>(npred++);
      ctx.pr.emplace_back(nsets);
      pr_scope.emplace_back(f.name(), n.slot);
    } else {
      n.slot = static_cast<int>(nfun++);
      ctx.fn.emplace_back(nsets, 0);
      fn_scope.emplace_back(f.name(), n.slot);
    }
    n.kids.push_back(compile(f.body()));
    (is_pred ? pr_scope : fn_scope).pop_back();
    return push(std::move(n));
  }

  int compile(const Formula& f) {
    CNode n;
    n.op = f.op();
    switch (f.op()) {
      case Op::True:
      case Op::False: return push(std::move(n));
      case Op::In:
      case Op::NotIn:
        n.t0 = compile_term(f.terms()[0], Sort::Set);
        n.t1 = compile_term(f.terms()[1], Sort::Set);
        return push(std::move(n));
      case Op::Eq: {
        std::optional<Sort> so;
        n.t0 = compile_term(f.terms()[0], so);
        const CTerm& c0 = terms[static_cast<std::size_t>(n.t0)];
        so = c0.slot >= 0 ? slot_sort[static_cast<std::size_t>(c0.slot)] : Sort::Set;
        n.t1 = compile_term(f.terms()[1], so);
        n.sort = *so;
        return push(std::move(n));
      }
      case Op::Before:
        if (kind == 2 || (kind == 0 && !eps().below)) throw DomainError("before needs a stage or ranked structure");
        n.t0 = compile_term(f.terms()[0], stage_sort());
        n.t1 = compile_term(f.terms()[1], stage_sort());
        return push(std::move(n));
      case Op::At:
        if (kind != 1) throw DomainError("found-at needs a stage structure");
        n.t0 = compile_term(f.terms()[0], Sort::Set);
        n.t1 = compile_term(f.terms()[1], Sort::Stage);
        return push(std::move(n));
      case Op::E:
        n.t0 = compile_term(f.terms()[0], std::nullopt);
        return push(std::move(n));
      case Op::Low:
      case Op::High:
        if (kind != 1 || !(f.op() == Op::Low ? stg().low : stg().high))
          throw DomainError("low/high need a stage structure that interprets them");
        n.t0 = compile_term(f.terms()[0], Sort::Set);
        return push(std::move(n));
      case Op::Pred:
        if (f.terms().size() != 1) throw DomainError("only monadic predicate variables are supported");
        n.slot = pred_slot(f.name());
        n.t0 = compile_term(f.terms()[0], Sort::Set);
        return push(std::move(n));
      case Op::Def: {
        const Definition* d = find_definition(f.name());
        if (!d) throw DomainError("unknown definition " + f.name());
        if (d->params.size() != f.terms().size()) throw DomainError("arity mismatch for " + f.name());
        const int kid = opt.kernels && kind == 0 ? kernel_id(f.name()) : -1;
        if (kid >= 0) {
          n.kernel = kid;
          n.t0 = compile_term(f.terms()[0], Sort::Set);
          if (f.terms().size() > 1) n.t1 = compile_term(f.terms()[1], Sort::Set);
          build_kernel(kid);
          return push(std::move(n));
        }
        std::map<std::string, Term> sub;
        for (std::size_t i = 0; i < d->params.size(); ++i) sub.emplace(d->params[i].first, f.terms()[i]);
        return compile(substitute(d->body, sub));
      }
      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        for (const Formula& k : f.kids()) n.kids.push_back(compile(k));
        return push(std::move(n));
      case Op::ForAll:
      case Op::Exists: return compile_quantifier(f);
      case Op::ForAllP:
      case Op::ExistsP:
      case Op::ForAllF:
      case Op::ExistsF: return compile_second_order(f);
      case Op::Past:
      case Op::Future:
      case Op::Dia:
      case Op::AlwaysPast:
      case Op::AlwaysFuture:
      case Op::Box:
        if (kind != 2) throw DomainError("modal operators need a Kripke structure");
        n.kids.push_back(compile(f.body()));
        return push(std::move(n));
    }
    throw DomainError("unsupported formula");
  }

  int compile_root(const Formula& f, const Assignment& a, std::optional<std::size_t> world) {
    if (kind == 2) {
      if (!world) throw DomainError("a world is required for Kripke evaluation");
      if (*world >= kri().worlds()) throw DomainError("world out of range");
      ctx.w = *world;
    } else if (world) {
      throw DomainError("worlds apply only to Kripke structures");
    }
    nodes.clear();
    terms.clear();
    slot_sort.clear();
    slot_name.clear();
    ctx = Ctx{{}, {}, {}, ctx.w};
    npred = nfun = 0;
    el_scope.clear();
    pr_scope.clear();
    fn_scope.clear();
    asg = &a;
    const int root = compile(f);
    asg = nullptr;
    return root;
  }

  // ---- evaluation ---------------------------------------------------------

  std::size_t term_value(int t) const {
    const CTerm& c = terms[static_cast<std::size_t>(t)];
    if (c.slot >= 0) return ctx.el[static_cast<std::size_t>(c.slot)];
    return ctx.fn[static_cast<std::size_t>(c.fun)][term_value(c.arg)];
  }

  Bits row_bits(const Row& r) const {
    const Bits dom = domain(Sort::Set);
    switch (r.kind) {
      case RowKind::Mem: return mem_row(term_value(r.term)) & dom;
      case RowKind::NotMem: return dom - mem_row(term_value(r.term));
      case RowKind::Pred: return ctx.pr[static_cast<std::size_t>(r.pred)] & dom;
    }
    return dom;
  }

  BitsTable& table() {
    auto [it, inserted] = tables.try_emplace(kind == 2 ? ctx.w : 0);
    if (inserted) {
      const Bits dom = domain(Sort::Set);
      for (std::size_t b : indices(dom)) it->second.rows[mem_row(b) & dom].push_back(b);
    }
    return it->second;
  }

  bool ev(int i) {
    const CNode& c = nodes[static_cast<std::size_t>(i)];
    switch (c.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::In:
      case Op::NotIn: {
        const bool in = mem_row(term_value(c.t1))[term_value(c.t0)];
        return c.op == Op::In ? in : !in;
      }
      case Op::Eq: {
        const std::size_t a = term_value(c.t0), b = term_value(c.t1);
        if (c.sort == Sort::Set && !(exists_now(a) && exists_now(b))) return false;
        return a == b;
      }
      case Op::Before: {
        const std::size_t a = term_value(c.t0), b = term_value(c.t1);
        return kind == 1 ? stg().before[b][a] : (*eps().below)[b][a];
      }
      case Op::At: return stg().found_at[term_value(c.t1)][term_value(c.t0)];
      case Op::E: return exists_now(term_value(c.t0));
      case Op::Low: return (*stg().low)[term_value(c.t0)];
      case Op::High: return (*stg().high)[term_value(c.t0)];
      case Op::Pred: {
        const std::size_t x = term_value(c.t0);
        return exists_now(x) && ctx.pr[static_cast<std::size_t>(c.slot)][x];
      }
      case Op::Def: {
        const std::size_t k = static_cast<std::size_t>(c.kernel);
        if (c.t1 < 0) return unary[k][term_value(c.t0)];
        return binary[k][term_value(c.t0)][term_value(c.t1)];
      }
      case Op::Not: return !ev(c.kids[0]);
      case Op::And:
        for (int k : c.kids)
          if (!ev(k)) return false;
        return true;
      case Op::Or:
        for (int k : c.kids)
          if (ev(k)) return true;
        return false;
      case Op::Implies: return !ev(c.kids[0]) || ev(c.kids[1]);
      case Op::Iff: return ev(c.kids[0]) == ev(c.kids[1]);
      case Op::ForAll:
      case Op::Exists: return ev_quantifier(c);
      case Op::ForAllP:
      case Op::ExistsP: return ev_pred_quantifier(c);
      case Op::ForAllF:
      case Op::ExistsF: return ev_fun_quantifier(c);
      case Op::Past:
      case Op::AlwaysPast: return ev_modal(c, kri().before[ctx.w], c.op == Op::Past);
      case Op::Future:
      case Op::AlwaysFuture: return ev_modal(c, after[ctx.w], c.op == Op::Future);
      case Op::Dia:
      case Op::Box: return ev_modal(c, reach[ctx.w], c.op == Op::Dia);
    }
    return false;
  }

  bool ev_modal(const CNode& c, const Bits& worlds, bool some) {
    const std::size_t saved = ctx.w;
    bool result = !some;
    for (auto v = worlds.find_first(); v != Bits::npos; v = worlds.find_next(v)) {
      ctx.w = v;
      if (ev(c.kids[0]) == some) {
        result = some;
        break;
      }
    }
    ctx.w = saved;
    return result;
  }

  bool ev_quantifier(const CNode& c) {
    const bool all = c.op == Op::ForAll;
    const std::size_t slot = static_cast<std::size_t>(c.slot);
    switch (c.fast) {
      case Fast::RowSubset: return row_bits(c.r1).is_subset_of(row_bits(c.r2));
      case Fast::RowEqual: return row_bits(c.r1) == row_bits(c.r2);
      case Fast::RowAll: return row_bits(c.r1) == domain(Sort::Set);
      case Fast::RowMeet: return row_bits(c.r1).intersects(row_bits(c.r2));
      case Fast::RowAny: return row_bits(c.r1).any();
      case Fast::Comprehension: {
        const Bits dom = domain(Sort::Set);
        Bits target(nsets);
        const std::size_t xs = static_cast<std::size_t>(c.xslot);
        for (auto x = dom.find_first(); x != Bits::npos; x = dom.find_next(x)) {
          ctx.el[xs] = x;
          if (ev(c.psi) != c.comp_neg) target.set(x);
        }
        BitsTable& t = table();
        auto it = t.rows.find(target);
        if (it == t.rows.end()) return false;
        for (std::size_t b : it->second) {
          ctx.el[slot] = b;
          bool ok = true;
          for (int k : c.rest) ok = ok && ev(k);
          if (ok) return true;
        }
        return false;
      }
      case Fast::Bounded: {
        const Bits range = row_bits(c.r1);
        for (auto x = range.find_first(); x != Bits::npos; x = range.find_next(x)) {
          ctx.el[slot] = x;
          if (ev(c.kids[0]) != all) return !all;
        }
        return all;
      }
      case Fast::None: break;
    }
    const Bits dom = domain(c.sort);
    for (auto x = dom.find_first(); x != Bits::npos; x = dom.find_next(x)) {
      ctx.el[slot] = x;
      if (ev(c.kids[0]) != all) return !all;
    }
    return all;
  }

  std::vector<std::size_t> carrier(const CNode& c) {
    std::vector<std::size_t> out;
    if (c.bound < 0) {
      for (std::size_t x = 0; x < nsets; ++x) out.push_back(x);
      return out;
    }
    const std::size_t bs = static_cast<std::size_t>(c.bound_slot);
    for (std::size_t x = 0; x < nsets; ++x) {
      ctx.el[bs] = x;
      if (ev(c.bound)) out.push_back(x);
    }
    return out;
  }

  // Visits every subset of the carrier in Gray-code order; stops when visit
  // returns true and reports whether it did.
  template <class Visit>
  bool each_subset(const CNode& c, Visit&& visit) {
    const auto car = carrier(c);
    if (pow2_saturating(car.size()) > limits().max_so_instances)
      throw CapExceeded("predicate instances", pow2_saturating(car.size()), limits().max_so_instances);
    Bits& p = ctx.pr[static_cast<std::size_t>(c.slot)];
    p = Bits(nsets);
    if (visit()) return true;
    const std::uint64_t total = std::uint64_t{1} << car.size();
    for (std::uint64_t i = 1; i < total; ++i) {
      p.flip(car[static_cast<std::size_t>(std::countr_zero(i))]);
      if (visit()) return true;
    }
    return false;
  }

  template <class Visit>
  bool each_function(const CNode& c, Visit&& visit) {
    const auto car = carrier(c);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < car.size(); ++i) {
      if (nsets == 0 || total > limits().max_so_instances / nsets) {
        throw CapExceeded("function instances", SIZE_MAX, limits().max_so_instances);
      }
      total *= nsets;
    }
    if (nsets == 0) return visit();
    auto& g = ctx.fn[static_cast<std::size_t>(c.slot)];
    g.assign(nsets, 0);
    for (;;) {
      if (visit()) return true;
      std::size_t i = 0;
      while (i < car.size() && ++g[car[i]] == nsets) g[car[i++]] = 0;
      if (i == car.size()) return false;
    }
  }

  bool ev_pred_quantifier(const CNode& c) {
    const bool all = c.op == Op::ForAllP;
    const bool stopped = each_subset(c, [&] { return ev(c.kids[0]) != all; });
    return stopped ? !all : all;
  }

  bool ev_fun_quantifier(const CNode& c) {
    const bool all = c.op == Op::ForAllF;
    const bool stopped = each_function(c, [&] { return ev(c.kids[0]) != all; });
    return stopped ? !all : all;
  }

  // ---- counterexample search ---------------------------------------------

  bool search(int i, Assignment& out) {
    const CNode& c = nodes[static_cast<std::size_t>(i)];
    if (c.op == Op::ForAll) {
      const Bits dom = domain(c.sort);
      const std::size_t slot = static_cast<std::size_t>(c.slot);
      for (auto x = dom.find_first(); x != Bits::npos; x = dom.find_next(x)) {
        ctx.el[slot] = x;
        if (search(c.kids[0], out)) {
          out[c.name] = x;
          return true;
        }
      }
      return false;
    }
    if (c.op == Op::ForAllP) {
      return each_subset(c, [&] {
        if (!search(c.kids[0], out)) return false;
        out[c.name] = ctx.pr[static_cast<std::size_t>(c.slot)];
        return true;
      });
    }
    if (c.op == Op::ForAllF) {
      return each_function(c, [&] {
        if (!search(c.kids[0], out)) return false;
        out[c.name] = ctx.fn[static_cast<std::size_t>(c.slot)];
        return true;
      });
    }
    return !ev(i);
  }
};

Evaluator::Evaluator(const Structure& s, EvalOptions opt) : impl_(std::make_unique<Impl>(s, opt)) {}
Evaluator::~Evaluator() = default;

const Structure& Evaluator::structure() const { return impl_->s; }

bool Evaluator::eval(const Formula& f, const Assignment& asg, std::optional<std::size_t> world) {
  const int root = impl_->compile_root(f, asg, world);
  return impl_->ev(root);
}

std::optional<Assignment> Evaluator::counterexample(const Formula& f, const Assignment& asg,
                                                    std::optional<std::size_t> world) {
  const int root = impl_->compile_root(f, asg, world);
  Assignment out;
  if (!impl_->search(root, out)) return std::nullopt;
  return out;
}

bool eval(const Structure& s, const Formula& f, const Assignment& asg, std::optional<std::size_t> world,
          EvalOptions opt) {
  Evaluator e(s, opt);
  return e.eval(f, asg, world);
}

bool eval_everywhere(const KripkeStructure& k, const Formula& f, const Assignment& asg, EvalOptions opt) {
  Evaluator e(Structure{k}, opt);
  for (std::size_t w = 0; w < k.worlds(); ++w)
    if (!e.eval(f, asg, w)) return false;
  return true;
}

std::pair<std::vector<std::string>, Formula> universal_prefix(const Formula& f) {
  std::vector<std::string> names;
  Formula g = f;
  while (g.op() == Op::ForAll || g.op() == Op::ForAllP || g.op() == Op::ForAllF) {
    names.push_back(g.name());
    g = g.body();
  }
  return {names, g};
}

const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const KernInfo& k : kKernels) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

std::string to_string(const Value& v) {
  if (const auto* x = std::get_if<std::size_t>(&v)) return std::to_string(*x);
  if (const auto* b = std::get_if<Bits>(&v)) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i : indices(*b)) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    return out + "}";
  }
  const auto& g = std::get<std::vector<std::size_t>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < g.size(); ++i) out += (i ? "," : "") + std::to_string(g[i]);
  return out + "]";
}

}  // namespace levels::logic
