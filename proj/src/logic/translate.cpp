#include "levels/logic/translate.hpp"

#include "levels/config.hpp"

namespace levels::logic {

namespace {

// Names of every definition except the two-sorted ones, which mention
// stages and must be unfolded before a sort-changing translation.
const std::set<std::string>& one_sorted_definitions() {
  static const std::set<std::string> keep = [] {
    std::set<std::string> k;
    for (const Definition& d : definitions()) {
      bool staged = false;
      for (const auto& p : d.params) staged = staged || p.second == Sort::Stage;
      if (!staged) k.insert(d.name);
    }
    return k;
  }();
  return keep;
}

Formula star(const Formula& f, bool boolean) {
  switch (f.op()) {
    case Op::Before: return in(f.terms()[0], f.terms()[1]);
    case Op::At: {
      const Term& x = f.terms()[0];
      const Term& s = f.terms()[1];
      if (!boolean) return def("Sub", {x, s});
      return lor({def("Sub", {x, s}), def("CSub", {x, s})});
    }
    case Op::Low:
      if (!boolean) throw DomainError("low is not part of the plain stage language");
      return not_in(f.terms()[0], f.terms()[0]);
    case Op::High:
      if (!boolean) throw DomainError("high is not part of the plain stage language");
      return in(f.terms()[0], f.terms()[0]);
    case Op::ForAll:
    case Op::Exists: {
      Formula body = star(f.body(), boolean);
      if (f.sort() == Sort::Set) return f.op() == Op::ForAll ? forall(f.name(), body) : exists(f.name(), body);
      Formula guard = def(boolean ? "BLev" : "Lev", {Term(f.name())});
      return f.op() == Op::ForAll ? forall(f.name(), implies(guard, body))
                                  : exists(f.name(), land({guard, body}));
    }
    default: break;
  }
  if (is_modal(f.op())) throw DomainError("stage translations take non-modal formulas");
  if (f.kids().empty()) return f;
  std::vector<Formula> kids;
  for (const Formula& k : f.kids()) kids.push_back(star(k, boolean));
  return with_kids(f, std::move(kids));
}

Formula modalize_rec(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::In:
    case Op::Eq:
    case Op::E: return dia(f);
    case Op::NotIn: return lnot(dia(in(f.terms()[0], f.terms()[1])));
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: {
      std::vector<Formula> kids;
      for (const Formula& k : f.kids()) kids.push_back(modalize_rec(k));
      return with_kids(f, std::move(kids));
    }
    case Op::Exists:
      if (f.sort() != Sort::Set) break;
      return dia(exists(f.name(), modalize_rec(f.body())));
    case Op::ForAll:
      // ∀ is read as ¬∃¬.
      if (f.sort() != Sort::Set) break;
      return lnot(dia(exists(f.name(), lnot(modalize_rec(f.body())))));
    default: break;
  }
  throw DomainError("modalization takes first-order one-sorted non-modal formulas");
}

class Leveller {
 public:
  explicit Leveller(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}

  Formula run(const Formula& f, const std::string& s) {
    const Term st(s);
    switch (f.op()) {
      case Op::True:
      case Op::False: return f;
      case Op::Eq:
      case Op::In: return land({f, def("Sub", {f.terms()[1], st})});
      case Op::NotIn: return lnot(land({in(f.terms()[0], f.terms()[1]), def("Sub", {f.terms()[1], st})}));
      case Op::E: return land({eq(f.terms()[0], f.terms()[0]), def("Sub", {f.terms()[0], st})});
      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff: {
        std::vector<Formula> kids;
        for (const Formula& k : f.kids()) kids.push_back(run(k, s));
        return with_kids(f, std::move(kids));
      }
      case Op::Exists:
        if (f.sort() != Sort::Set) break;
        return exists(f.name(), land({def("Sub", {Term(f.name()), st}), run(f.body(), s)}));
      case Op::ForAll:
        if (f.sort() != Sort::Set) break;
        return forall(f.name(), implies(def("Sub", {Term(f.name()), st}), run(f.body(), s)));
      case Op::Dia:
      case Op::Past:
      case Op::Future: {
        const std::string t = fresh();
        std::vector<Formula> parts = {def("Lev", {Term(t)})};
        if (f.op() == Op::Past) parts.push_back(in(Term(t), st));
        if (f.op() == Op::Future) parts.push_back(in(st, Term(t)));
        parts.push_back(run(f.body(), t));
        return exists(t, land(std::move(parts)));
      }
      case Op::Box:
      case Op::AlwaysPast:
      case Op::AlwaysFuture: {
        const std::string t = fresh();
        std::vector<Formula> guard = {def("Lev", {Term(t)})};
        if (f.op() == Op::AlwaysPast) guard.push_back(in(Term(t), st));
        if (f.op() == Op::AlwaysFuture) guard.push_back(in(st, Term(t)));
        return forall(t, implies(land(std::move(guard)), run(f.body(), t)));
      }
      default: break;
    }
    throw DomainError("levelling takes first-order one-sorted formulas");
  }

 private:
  std::string fresh() {
    std::string t = fresh_name("t", avoid_);
    avoid_.insert(t);
    return t;
  }
  std::set<std::string> avoid_;
};

class Bullet {
 public:
  explicit Bullet(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}

  Formula run(const Formula& f) {
    switch (f.op()) {
      case Op::Past: {
        const std::string x = fresh("x");
        return exists(x, dia(land({lnot(exists_atom(Term(x))), run(f.body())})));
      }
      case Op::Future: {
        const std::string x = fresh("x");
        const std::string v = fresh("v");
        return exists(x, land({def("Maxlev", {Term(x)}), dia(land({exists(v, in(Term(x), Term(v))), run(f.body())}))}));
      }
      case Op::AlwaysPast: return lnot(run(past(lnot(f.body()))));
      case Op::AlwaysFuture: return lnot(run(future(lnot(f.body()))));
      default: break;
    }
    if (f.kids().empty()) return f;
    std::vector<Formula> kids;
    for (const Formula& k : f.kids()) kids.push_back(run(k));
    return with_kids(f, std::move(kids));
  }

 private:
  std::string fresh(const std::string& base) {
    std::string t = fresh_name(base, avoid_);
    avoid_.insert(t);
    return t;
  }
  std::set<std::string> avoid_;
};

Formula swap_rec(const Formula& f) {
  if (f.op() == Op::In) return not_in(f.terms()[0], f.terms()[1]);
  if (f.op() == Op::NotIn) return in(f.terms()[0], f.terms()[1]);
  if (f.op() == Op::Before || f.op() == Op::At || f.op() == Op::Low || f.op() == Op::High)
    throw DomainError("the duality swap takes one-sorted formulas");
  if (f.kids().empty()) return f;
  std::vector<Formula> kids;
  for (const Formula& k : f.kids()) kids.push_back(swap_rec(k));
  return with_kids(f, std::move(kids));
}

Formula helow_rec(const Formula& f) {
  if (f.kids().empty()) return f;
  if ((f.op() == Op::ForAll || f.op() == Op::Exists) && f.sort() == Sort::Set) {
    const Formula guard = def("Helow", {Term(f.name())});
    const Formula body = helow_rec(f.body());
    return f.op() == Op::ForAll ? forall(f.name(), implies(guard, body)) : exists(f.name(), land({guard, body}));
  }
  std::vector<Formula> kids;
  for (const Formula& k : f.kids()) kids.push_back(helow_rec(k));
  return with_kids(f, std::move(kids));
}

}  // namespace

Formula star_st(const Formula& f) { return star(expand_definitions(f, &one_sorted_definitions()), false); }

Formula star_bst(const Formula& f) { return star(expand_definitions(f, &one_sorted_definitions()), true); }

Formula modalize(const Formula& f) { return modalize_rec(expand_definitions(f)); }

Formula levelling(const Formula& f, const std::string& s) {
  const Formula g = expand_definitions(f);
  std::set<std::string> avoid = all_vars(g);
  if (avoid.count(s)) throw DomainError("levelling variable " + s + " occurs in the formula");
  avoid.insert(s);
  return Leveller(std::move(avoid)).run(g, s);
}

Formula mlt_bullet(const Formula& f) {
  const Formula g = expand_definitions(f);
  return Bullet(all_vars(g)).run(g);
}

Formula dual_swap(const Formula& f) { return swap_rec(expand_definitions(f)); }

Formula helow_relativize(const Formula& f) { return helow_rec(expand_definitions(f)); }

}  // namespace levels::logic
