#include "levels/logic/formula.hpp"

#include <stdexcept>

#include "levels/config.hpp"

namespace levels::logic {

namespace {

Formula make(Op op, std::string name = {}, Sort sort = Sort::Set, std::vector<Term> terms = {},
             std::vector<Formula> kids = {}, std::string bound_var = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->sort = sort;
  n->terms = std::move(terms);
  n->kids = std::move(kids);
  n->bound_var = std::move(bound_var);
  return Formula(std::move(n));
}

void term_vars(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const Term& a : t.args) term_vars(a, out);
}

bool binds_element(Op op) { return op == Op::ForAll || op == Op::Exists; }
bool binds_second_order(Op op) {
  return op == Op::ForAllP || op == Op::ExistsP || op == Op::ForAllF || op == Op::ExistsF;
}

void free_vars_into(const Formula& f, std::set<std::string>& out) {
  for (const Term& t : f.terms()) term_vars(t, out);
  if (binds_element(f.op())) {
    std::set<std::string> inner;
    free_vars_into(f.body(), inner);
    inner.erase(f.name());
    out.insert(inner.begin(), inner.end());
    return;
  }
  if (binds_second_order(f.op())) {
    std::set<std::string> inner;
    free_vars_into(f.body(), inner);
    inner.erase(f.name());
    out.insert(inner.begin(), inner.end());
    if (f.is_bounded()) {
      std::set<std::string> b;
      free_vars_into(f.bound(), b);
      b.erase(f.bound_var());
      out.insert(b.begin(), b.end());
    }
    return;
  }
  if (f.op() == Op::Pred) out.insert(f.name());
  for (const Formula& k : f.kids()) free_vars_into(k, out);
}

void all_vars_into(const Formula& f, std::set<std::string>& out) {
  for (const Term& t : f.terms()) term_vars(t, out);
  if (binds_element(f.op()) || binds_second_order(f.op()) || f.op() == Op::Pred) out.insert(f.name());
  if (f.is_bounded()) out.insert(f.bound_var());
  for (const Formula& k : f.kids()) all_vars_into(k, out);
}

Term subst_term(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.is_var()) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  Term r;
  r.name = t.name;
  for (const Term& a : t.args) r.args.push_back(subst_term(a, sub));
  return r;
}

// Substitution restricted to keys that occur free in f.
std::map<std::string, Term> relevant(const std::map<std::string, Term>& sub, const Formula& f) {
  const auto fv = free_vars(f);
  std::map<std::string, Term> out;
  for (const auto& [k, v] : sub)
    if (fv.count(k)) out.emplace(k, v);
  return out;
}

std::set<std::string> replacement_vars(const std::map<std::string, Term>& sub) {
  std::set<std::string> out;
  for (const auto& [k, v] : sub) term_vars(v, out);
  return out;
}

}  // namespace

Term Term::app(std::string f, Term x) {
  Term t;
  t.name = std::move(f);
  t.args.push_back(std::move(x));
  return t;
}

Formula::Formula() : n_(std::make_shared<Node>()) {}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  const Node& x = *a.n_;
  const Node& y = *b.n_;
  return x.op == y.op && x.name == y.name && x.sort == y.sort && x.terms == y.terms &&
         x.bound_var == y.bound_var && x.kids == y.kids;
}

bool is_atom(Op op) {
  switch (op) {
    case Op::True: case Op::False: case Op::In: case Op::NotIn: case Op::Eq: case Op::Before:
    case Op::At: case Op::E: case Op::Low: case Op::High: case Op::Pred: case Op::Def:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(Op op) { return binds_element(op) || binds_second_order(op); }

bool is_modal(Op op) {
  switch (op) {
    case Op::Past: case Op::Future: case Op::Dia: case Op::AlwaysPast: case Op::AlwaysFuture:
    case Op::Box:
      return true;
    default:
      return false;
  }
}

Formula top() { return make(Op::True); }
Formula bottom() { return make(Op::False); }
Formula in(Term x, Term y) { return make(Op::In, {}, Sort::Set, {std::move(x), std::move(y)}); }
Formula not_in(Term x, Term y) { return make(Op::NotIn, {}, Sort::Set, {std::move(x), std::move(y)}); }
Formula eq(Term x, Term y) { return make(Op::Eq, {}, Sort::Set, {std::move(x), std::move(y)}); }
Formula before(Term s, Term t) { return make(Op::Before, {}, Sort::Set, {std::move(s), std::move(t)}); }
Formula at(Term x, Term s) { return make(Op::At, {}, Sort::Set, {std::move(x), std::move(s)}); }
Formula exists_atom(Term x) { return make(Op::E, {}, Sort::Set, {std::move(x)}); }
Formula low(Term x) { return make(Op::Low, {}, Sort::Set, {std::move(x)}); }
Formula high(Term x) { return make(Op::High, {}, Sort::Set, {std::move(x)}); }
Formula pred(std::string p, std::vector<Term> args) { return make(Op::Pred, std::move(p), Sort::Set, std::move(args)); }
Formula def(std::string name, std::vector<Term> args) { return make(Op::Def, std::move(name), Sort::Set, std::move(args)); }
Formula lnot(Formula a) { return make(Op::Not, {}, Sort::Set, {}, {std::move(a)}); }
Formula land(std::vector<Formula> parts) {
  if (parts.empty()) return top();
  if (parts.size() == 1) return parts[0];
  return make(Op::And, {}, Sort::Set, {}, std::move(parts));
}
Formula lor(std::vector<Formula> parts) {
  if (parts.empty()) return bottom();
  if (parts.size() == 1) return parts[0];
  return make(Op::Or, {}, Sort::Set, {}, std::move(parts));
}
Formula implies(Formula a, Formula b) { return make(Op::Implies, {}, Sort::Set, {}, {std::move(a), std::move(b)}); }
Formula iff(Formula a, Formula b) { return make(Op::Iff, {}, Sort::Set, {}, {std::move(a), std::move(b)}); }
Formula forall(std::string x, Formula body, Sort s) { return make(Op::ForAll, std::move(x), s, {}, {std::move(body)}); }
Formula exists(std::string x, Formula body, Sort s) { return make(Op::Exists, std::move(x), s, {}, {std::move(body)}); }
Formula forall_pred(std::string p, Formula body) { return make(Op::ForAllP, std::move(p), Sort::Set, {}, {std::move(body)}); }
Formula exists_pred(std::string p, Formula body) { return make(Op::ExistsP, std::move(p), Sort::Set, {}, {std::move(body)}); }
Formula forall_pred_over(std::string p, std::string x, Formula bound, Formula body) {
  return make(Op::ForAllP, std::move(p), Sort::Set, {}, {std::move(bound), std::move(body)}, std::move(x));
}
Formula exists_pred_over(std::string p, std::string x, Formula bound, Formula body) {
  return make(Op::ExistsP, std::move(p), Sort::Set, {}, {std::move(bound), std::move(body)}, std::move(x));
}
Formula forall_fun(std::string f, Formula body) { return make(Op::ForAllF, std::move(f), Sort::Set, {}, {std::move(body)}); }
Formula exists_fun(std::string f, Formula body) { return make(Op::ExistsF, std::move(f), Sort::Set, {}, {std::move(body)}); }
Formula forall_fun_over(std::string f, std::string x, Formula bound, Formula body) {
  return make(Op::ForAllF, std::move(f), Sort::Set, {}, {std::move(bound), std::move(body)}, std::move(x));
}
Formula exists_fun_over(std::string f, std::string x, Formula bound, Formula body) {
  return make(Op::ExistsF, std::move(f), Sort::Set, {}, {std::move(bound), std::move(body)}, std::move(x));
}
Formula past(Formula a) { return make(Op::Past, {}, Sort::Set, {}, {std::move(a)}); }
Formula future(Formula a) { return make(Op::Future, {}, Sort::Set, {}, {std::move(a)}); }
Formula dia(Formula a) { return make(Op::Dia, {}, Sort::Set, {}, {std::move(a)}); }
Formula always_past(Formula a) { return make(Op::AlwaysPast, {}, Sort::Set, {}, {std::move(a)}); }
Formula always_future(Formula a) { return make(Op::AlwaysFuture, {}, Sort::Set, {}, {std::move(a)}); }
Formula box(Formula a) { return make(Op::Box, {}, Sort::Set, {}, {std::move(a)}); }

Formula with_kids(const Formula& f, std::vector<Formula> kids) {
  return make(f.op(), f.name(), f.sort(), f.terms(), std::move(kids), f.bound_var());
}

Formula with_terms(const Formula& f, std::vector<Term> terms) {
  return make(f.op(), f.name(), f.sort(), std::move(terms), f.kids(), f.bound_var());
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  free_vars_into(f, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  all_vars_into(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int k = 1;; ++k) {
    std::string c = base + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub_in) {
  const auto sub = relevant(sub_in, f);
  if (sub.empty()) return f;

  if (is_atom(f.op())) {
    std::vector<Term> ts;
    for (const Term& t : f.terms()) ts.push_back(subst_term(t, sub));
    return with_terms(f, std::move(ts));
  }

  if (is_quantifier(f.op())) {
    const std::set<std::string> rv = replacement_vars(sub);
    std::string var = f.name();
    Formula body = f.body();
    if (rv.count(var)) {
      std::set<std::string> avoid = all_vars(f);
      avoid.insert(rv.begin(), rv.end());
      for (const auto& [k, v] : sub) avoid.insert(k);
      var = fresh_name(var, avoid);
      if (binds_element(f.op())) {
        body = substitute(body, {{f.name(), Term(var)}});
      } else {
        // Rename a predicate or function variable throughout the body.
        std::function<Formula(const Formula&)> ren = [&](const Formula& g) -> Formula {
          std::function<Term(const Term&)> rt = [&](const Term& t) {
            Term r = t;
            if (!t.is_var() && t.name == f.name()) r.name = var;
            for (auto& a : r.args) a = rt(a);
            return r;
          };
          std::vector<Term> ts;
          for (const Term& t : g.terms()) ts.push_back(rt(t));
          std::vector<Formula> ks;
          const bool shadow = binds_second_order(g.op()) && g.name() == f.name();
          for (std::size_t i = 0; i < g.kids().size(); ++i) {
            const bool is_body = i + 1 == g.kids().size();
            ks.push_back(shadow && is_body ? g.kids()[i] : ren(g.kids()[i]));
          }
          Formula h = with_kids(with_terms(g, std::move(ts)), std::move(ks));
          if (g.op() == Op::Pred && g.name() == f.name()) {
            auto n = std::make_shared<Node>(*h.node());
            n->name = var;
            h = Formula(std::move(n));
          }
          return h;
        };
        body = ren(body);
      }
    }
    std::map<std::string, Term> inner = sub;
    if (binds_element(f.op())) inner.erase(var);
    Formula new_body = substitute(body, inner);
    std::vector<Formula> kids;
    if (f.is_bounded()) {
      std::string bv = f.bound_var();
      Formula bf = f.bound();
      std::map<std::string, Term> bsub = sub;
      bsub.erase(bv);
      if (rv.count(bv)) {
        std::set<std::string> avoid = all_vars(f);
        avoid.insert(rv.begin(), rv.end());
        const std::string nb = fresh_name(bv, avoid);
        bf = substitute(bf, {{bv, Term(nb)}});
        bv = nb;
      }
      kids.push_back(substitute(bf, bsub));
      kids.push_back(new_body);
      auto n = std::make_shared<Node>(*f.node());
      n->name = var;
      n->kids = std::move(kids);
      n->bound_var = bv;
      return Formula(std::move(n));
    }
    auto n = std::make_shared<Node>(*f.node());
    n->name = var;
    n->kids = {new_body};
    return Formula(std::move(n));
  }

  std::vector<Formula> kids;
  for (const Formula& k : f.kids()) kids.push_back(substitute(k, sub));
  return with_kids(f, std::move(kids));
}

namespace {

struct DefSource {
  const char* name;
  std::vector<std::pair<std::string, Sort>> params;
  const char* body;
};

std::vector<Definition> build_definitions() {
  const std::vector<DefSource> src = {
      {"Sub", {{"x", Sort::Set}, {"y", Sort::Set}}, "(forall z (implies (in z x) (in z y)))"},
      // The complement of x is included in y.
      {"CSub", {{"x", Sort::Set}, {"y", Sort::Set}}, "(forall z (implies (notin z x) (in z y)))"},
      {"Trans", {{"a", Sort::Set}}, "(forall x (implies (in x a) (Sub x a)))"},
      {"Potent", {{"a", Sort::Set}}, "(forall c (implies (in c a) (forall x (implies (Sub x c) (in x a)))))"},
      {"IsPot", {{"b", Sort::Set}, {"a", Sort::Set}},
       "(forall x (iff (in x b) (exists c (and (in c a) (Sub x c)))))"},
      {"IsAcc", {{"b", Sort::Set}, {"a", Sort::Set}},
       "(forall x (iff (in x b) (exists c (and (in c a) (or (in x c) (Sub x c))))))"},
      {"Hist", {{"h", Sort::Set}},
       "(forall x (implies (in x h) (forall y (iff (in y x) (exists c (and (in c x) (in c h) (Sub y c)))))))"},
      {"Lev", {{"s", Sort::Set}}, "(exists h (and (Hist h) (IsPot s h)))"},
      {"IsBPot", {{"b", Sort::Set}, {"a", Sort::Set}},
       "(forall x (iff (in x b) (exists c (and (in c a) (notin c c) (or (Sub x c) (CSub x c))))))"},
      {"BHist", {{"h", Sort::Set}},
       "(and (notin h h) (forall x (implies (in x h) (forall y (iff (in y x) "
       "(exists c (and (in c x) (in c h) (notin c c) (or (Sub y c) (CSub y c)))))))))"},
      {"BLev", {{"s", Sort::Set}}, "(exists h (and (BHist h) (IsBPot s h)))"},
      {"Helow", {{"a", Sort::Set}},
       "(exists c (and (Trans c) (Sub a c) (forall x (implies (in x c) (notin x x)))))"},
      {"Compl", {{"c", Sort::Set}, {"a", Sort::Set}}, "(forall x (iff (in x c) (notin x a)))"},
      {"Empty", {{"x", Sort::Set}}, "(forall y (notin y x))"},
      {"Maxlev", {{"s", Sort::Set}}, "(and (E! s) (forall x (Sub x s)))"},
      {"FoundBefore", {{"x", Sort::Set}, {"s", Sort::Stage}},
       "(exists-stage r (and (at x r) (before r s)))"},
  };
  std::vector<Definition> out;
  out.reserve(src.size());
  for (const DefSource& d : src) {
    DefinitionLookup lookup = [&out](std::string_view n) -> const Definition* {
      for (const Definition& e : out)
        if (e.name == n) return &e;
      return nullptr;
    };
    out.push_back(Definition{d.name, d.params, parse_formula(d.body, lookup)});
  }
  return out;
}

}  // namespace

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> defs = build_definitions();
  return defs;
}

const Definition* find_definition(std::string_view name) {
  for (const Definition& d : definitions())
    if (d.name == name) return &d;
  return nullptr;
}

Formula expand_definitions(const Formula& f, const std::set<std::string>* keep) {
  if (f.op() == Op::Def && !(keep && keep->count(f.name()))) {
    const Definition* d = find_definition(f.name());
    if (!d) throw DomainError("unknown definition " + f.name());
    if (d->params.size() != f.terms().size()) throw DomainError("arity mismatch for " + f.name());
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < d->params.size(); ++i) sub.emplace(d->params[i].first, f.terms()[i]);
    return expand_definitions(substitute(d->body, sub), keep);
  }
  if (f.kids().empty()) return f;
  std::vector<Formula> kids;
  for (const Formula& k : f.kids()) kids.push_back(expand_definitions(k, keep));
  return with_kids(f, std::move(kids));
}

}  // namespace levels::logic
