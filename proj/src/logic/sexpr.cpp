#include <cctype>
#include <string>
#include <vector>

#include "levels/config.hpp"
#include "levels/logic/formula.hpp"

namespace levels::logic {

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t pos = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  SExpr read() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    SExpr e;
    e.pos = i_;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw ParseError("unclosed '('", e.pos);
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (s_[i_] == ')') throw ParseError("unexpected ')'", i_);
    const std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')')
      ++i_;
    e.atom = std::string(s_.substr(start, i_ - start));
    return e;
  }

  void finish() {
    skip();
    if (i_ != s_.size()) throw ParseError("trailing input", i_);
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string_view s_;
  std::size_t i_ = 0;
};

Formula raw(Op op, std::string name, Sort sort, std::vector<Term> terms, std::vector<Formula> kids,
            std::string bound_var = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->sort = sort;
  n->terms = std::move(terms);
  n->kids = std::move(kids);
  n->bound_var = std::move(bound_var);
  return Formula(std::move(n));
}

class Converter {
 public:
  explicit Converter(const DefinitionLookup& defs) : defs_(defs) {}

  Formula formula(const SExpr& e) {
    if (!e.is_list) {
      if (e.atom == "true") return raw(Op::True, {}, Sort::Set, {}, {});
      if (e.atom == "false") return raw(Op::False, {}, Sort::Set, {}, {});
      throw ParseError("expected a formula, found '" + e.atom + "'", e.pos);
    }
    if (e.items.empty()) throw ParseError("empty list", e.pos);
    const SExpr& h = e.items[0];
    if (h.is_list) throw ParseError("expected an operator", h.pos);
    const std::string& op = h.atom;
    const std::size_t n = e.items.size() - 1;

    auto need = [&](std::size_t k) {
      if (n != k) throw ParseError("'" + op + "' expects " + std::to_string(k) + " arguments", e.pos);
    };
    auto terms = [&](std::size_t from) {
      std::vector<Term> ts;
      for (std::size_t i = from; i < e.items.size(); ++i) ts.push_back(term(e.items[i]));
      return ts;
    };
    auto sub = [&](std::size_t i) { return formula(e.items[i]); };

    if (op == "in" || op == "notin" || op == "eq" || op == "before" || op == "at") {
      need(2);
      const Op o = op == "in" ? Op::In : op == "notin" ? Op::NotIn : op == "eq" ? Op::Eq : op == "before" ? Op::Before : Op::At;
      return raw(o, {}, Sort::Set, terms(1), {});
    }
    if (op == "E!" || op == "low" || op == "high") {
      need(1);
      return raw(op == "E!" ? Op::E : op == "low" ? Op::Low : Op::High, {}, Sort::Set, terms(1), {});
    }
    if (op == "not") {
      need(1);
      return raw(Op::Not, {}, Sort::Set, {}, {sub(1)});
    }
    if (op == "and" || op == "or") {
      std::vector<Formula> ks;
      for (std::size_t i = 1; i < e.items.size(); ++i) ks.push_back(sub(i));
      return raw(op == "and" ? Op::And : Op::Or, {}, Sort::Set, {}, std::move(ks));
    }
    if (op == "implies" || op == "iff") {
      need(2);
      return raw(op == "implies" ? Op::Implies : Op::Iff, {}, Sort::Set, {}, {sub(1), sub(2)});
    }
    if (op == "forall" || op == "exists" || op == "forall-stage" || op == "exists-stage") {
      need(2);
      const std::string v = symbol(e.items[1]);
      const Op o = (op == "forall" || op == "forall-stage") ? Op::ForAll : Op::Exists;
      const Sort s = op.size() > 7 && op.find("-stage") != std::string::npos ? Sort::Stage : Sort::Set;
      return raw(o, v, s, {}, {sub(2)});
    }
    if (op == "forallP" || op == "existsP" || op == "forallF" || op == "existsF") {
      need(2);
      const bool is_pred = op.back() == 'P';
      const Op o = op.rfind("forall", 0) == 0 ? (is_pred ? Op::ForAllP : Op::ForAllF) : (is_pred ? Op::ExistsP : Op::ExistsF);
      auto& scope = is_pred ? preds_ : funs_;
      const SExpr& b = e.items[1];
      if (!b.is_list) {
        const std::string v = symbol(b);
        scope.push_back(v);
        Formula body = sub(2);
        scope.pop_back();
        return raw(o, v, Sort::Set, {}, {body});
      }
      if (b.items.size() != 3) throw ParseError("bounded binder must be (NAME var formula)", b.pos);
      const std::string v = symbol(b.items[0]);
      const std::string x = symbol(b.items[1]);
      Formula bound = formula(b.items[2]);
      scope.push_back(v);
      Formula body = sub(2);
      scope.pop_back();
      return raw(o, v, Sort::Set, {}, {bound, body}, x);
    }
    if (op == "past" || op == "future" || op == "dia" || op == "always-past" || op == "always-future" || op == "box") {
      need(1);
      const Op o = op == "past" ? Op::Past : op == "future" ? Op::Future : op == "dia" ? Op::Dia
                 : op == "always-past" ? Op::AlwaysPast : op == "always-future" ? Op::AlwaysFuture : Op::Box;
      return raw(o, {}, Sort::Set, {}, {sub(1)});
    }
    for (auto it = preds_.rbegin(); it != preds_.rend(); ++it)
      if (*it == op) return raw(Op::Pred, op, Sort::Set, terms(1), {});
    const Definition* d = defs_ ? defs_(op) : find_definition(op);
    if (d) {
      if (d->params.size() != n) throw ParseError("'" + op + "' expects " + std::to_string(d->params.size()) + " arguments", e.pos);
      return raw(Op::Def, op, Sort::Set, terms(1), {});
    }
    throw ParseError("unknown operator or predicate '" + op + "'", h.pos);
  }

 private:
  std::string symbol(const SExpr& e) {
    if (e.is_list || e.atom.empty()) throw ParseError("expected a variable name", e.pos);
    return e.atom;
  }

  Term term(const SExpr& e) {
    if (!e.is_list) return Term(symbol(e));
    if (e.items.size() != 2) throw ParseError("function application takes one argument", e.pos);
    const std::string f = symbol(e.items[0]);
    bool bound = false;
    for (const auto& g : funs_) bound = bound || g == f;
    if (!bound) throw ParseError("'" + f + "' is not a bound function variable", e.items[0].pos);
    return Term::app(f, term(e.items[1]));
  }

  const DefinitionLookup& defs_;
  std::vector<std::string> preds_;
  std::vector<std::string> funs_;
};

void print(const Formula& f, std::string& out);

void print_terms(const Formula& f, std::string& out) {
  for (const Term& t : f.terms()) {
    out.push_back(' ');
    out += to_sexpr(t);
  }
}

void print_unary(const char* op, const Formula& f, std::string& out) {
  out += "(";
  out += op;
  out += " ";
  print(f.body(), out);
  out += ")";
}

void print(const Formula& f, std::string& out) {
  auto atom = [&](const char* op) {
    out += "(";
    out += op;
    print_terms(f, out);
    out += ")";
  };
  auto nary = [&](const char* op) {
    out += "(";
    out += op;
    for (const Formula& k : f.kids()) {
      out.push_back(' ');
      print(k, out);
    }
    out += ")";
  };
  auto so = [&](const char* op) {
    out += "(";
    out += op;
    out += " ";
    if (f.is_bounded()) {
      out += "(" + f.name() + " " + f.bound_var() + " ";
      print(f.bound(), out);
      out += ")";
    } else {
      out += f.name();
    }
    out += " ";
    print(f.body(), out);
    out += ")";
  };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::In: atom("in"); return;
    case Op::NotIn: atom("notin"); return;
    case Op::Eq: atom("eq"); return;
    case Op::Before: atom("before"); return;
    case Op::At: atom("at"); return;
    case Op::E: atom("E!"); return;
    case Op::Low: atom("low"); return;
    case Op::High: atom("high"); return;
    case Op::Pred:
    case Op::Def: atom(f.name().c_str()); return;
    case Op::Not: nary("not"); return;
    case Op::And: nary("and"); return;
    case Op::Or: nary("or"); return;
    case Op::Implies: nary("implies"); return;
    case Op::Iff: nary("iff"); return;
    case Op::ForAll:
    case Op::Exists: {
      const char* op = f.op() == Op::ForAll ? (f.sort() == Sort::Stage ? "forall-stage" : "forall")
                                            : (f.sort() == Sort::Stage ? "exists-stage" : "exists");
      out += "(";
      out += op;
      out += " " + f.name() + " ";
      print(f.body(), out);
      out += ")";
      return;
    }
    case Op::ForAllP: so("forallP"); return;
    case Op::ExistsP: so("existsP"); return;
    case Op::ForAllF: so("forallF"); return;
    case Op::ExistsF: so("existsF"); return;
    case Op::Past: print_unary("past", f, out); return;
    case Op::Future: print_unary("future", f, out); return;
    case Op::Dia: print_unary("dia", f, out); return;
    case Op::AlwaysPast: print_unary("always-past", f, out); return;
    case Op::AlwaysFuture: print_unary("always-future", f, out); return;
    case Op::Box: print_unary("box", f, out); return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const DefinitionLookup& defs) {
  Reader r(text);
  SExpr e = r.read();
  r.finish();
  Converter c(defs);
  return c.formula(e);
}

std::string to_sexpr(const Term& t) {
  if (t.is_var()) return t.name;
  return "(" + t.name + " " + to_sexpr(t.args[0]) + ")";
}

std::string to_sexpr(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace levels::logic
