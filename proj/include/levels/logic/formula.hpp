#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace levels::logic {

enum class Sort : std::uint8_t { Set, Stage };

// A variable, or a function variable applied to a term.
struct Term {
  std::string name;
  std::vector<Term> args;  // non-empty iff this is an application

  Term() = default;
  Term(std::string n) : name(std::move(n)) {}  // NOLINT: implicit by design
  Term(const char* n) : name(n) {}             // NOLINT
  static Term app(std::string f, Term x);
  bool is_var() const { return args.empty(); }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class Op : std::uint8_t {
  True,
  False,
  // atoms
  In,
  NotIn,
  Eq,
  Before,
  At,
  E,  // existence, E!x
  Low,
  High,
  Pred,  // predicate variable applied to terms
  Def,   // named defined predicate
  // connectives
  Not,
  And,
  Or,
  Implies,
  Iff,
  // quantifiers
  ForAll,
  Exists,
  ForAllP,
  ExistsP,
  ForAllF,
  ExistsF,
  // tense and modal operators
  Past,
  Future,
  Dia,
  AlwaysPast,
  AlwaysFuture,
  Box,
};

class Formula;

struct Node {
  Op op = Op::True;
  std::string name;  // bound variable, predicate variable or definition name
  Sort sort = Sort::Set;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  // Bounded second-order quantifier: the variable ranges over subsets of (or
  // functions on) {bound_var : kids[0]}; the body is kids[1].
  std::string bound_var;
};

// Immutable formula tree with structural equality.
class Formula {
 public:
  Formula();  // true
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  Op op() const { return n_->op; }
  const std::string& name() const { return n_->name; }
  Sort sort() const { return n_->sort; }
  const std::vector<Term>& terms() const { return n_->terms; }
  const std::vector<Formula>& kids() const { return n_->kids; }
  bool is_bounded() const { return !n_->bound_var.empty(); }
  const std::string& bound_var() const { return n_->bound_var; }
  // Body of a quantifier or unary operator.
  const Formula& body() const { return n_->kids.back(); }
  // Bound formula of a bounded second-order quantifier.
  const Formula& bound() const { return n_->kids.front(); }
  const Node* node() const { return n_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const Node> n_;
};

bool is_atom(Op op);
bool is_quantifier(Op op);
bool is_modal(Op op);

// Builders.
Formula top();
Formula bottom();
Formula in(Term x, Term y);
Formula not_in(Term x, Term y);
Formula eq(Term x, Term y);
Formula before(Term s, Term t);
Formula at(Term x, Term s);
Formula exists_atom(Term x);
Formula low(Term x);
Formula high(Term x);
Formula pred(std::string p, std::vector<Term> args);
Formula def(std::string name, std::vector<Term> args);
Formula lnot(Formula a);
Formula land(std::vector<Formula> parts);
Formula lor(std::vector<Formula> parts);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall(std::string x, Formula body, Sort s = Sort::Set);
Formula exists(std::string x, Formula body, Sort s = Sort::Set);
Formula forall_pred(std::string p, Formula body);
Formula exists_pred(std::string p, Formula body);
Formula forall_pred_over(std::string p, std::string x, Formula bound, Formula body);
Formula exists_pred_over(std::string p, std::string x, Formula bound, Formula body);
Formula forall_fun(std::string f, Formula body);
Formula exists_fun(std::string f, Formula body);
Formula forall_fun_over(std::string f, std::string x, Formula bound, Formula body);
Formula exists_fun_over(std::string f, std::string x, Formula bound, Formula body);
Formula past(Formula a);
Formula future(Formula a);
Formula dia(Formula a);
Formula always_past(Formula a);
Formula always_future(Formula a);
Formula box(Formula a);
// Same operator and attributes, new children.
Formula with_kids(const Formula& f, std::vector<Formula> kids);
Formula with_terms(const Formula& f, std::vector<Term> terms);

// Free symbols: element variables, predicate and function variables.
std::set<std::string> free_vars(const Formula& f);
// Every variable name occurring anywhere, bound or free.
std::set<std::string> all_vars(const Formula& f);
// base1, base2, ... : the first one not in avoid.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);
// Capture-avoiding substitution of terms for free element variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);

// Definitions referenced by name in s-expressions and Def nodes.
struct Definition {
  std::string name;
  std::vector<std::pair<std::string, Sort>> params;
  Formula body;
};
using DefinitionLookup = std::function<const Definition*(std::string_view)>;

const Definition* find_definition(std::string_view name);
const std::vector<Definition>& definitions();
// Replace Def nodes by their bodies, recursively. When keep is non-null,
// definitions named in it are left in place.
Formula expand_definitions(const Formula& f, const std::set<std::string>* keep = nullptr);

// S-expression syntax, e.g. (forall x (not (in x a))), (forallP (F x (in x a)) phi).
Formula parse_formula(std::string_view text, const DefinitionLookup& defs = {});
std::string to_sexpr(const Formula& f);
std::string to_sexpr(const Term& t);

}  // namespace levels::logic
