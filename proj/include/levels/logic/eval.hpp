#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levels/logic/formula.hpp"
#include "levels/logic/structure.hpp"

namespace levels::logic {

// Element index, predicate extension, or function graph (value per element).
using Value = std::variant<std::size_t, Bits, std::vector<std::size_t>>;
using Assignment = std::map<std::string, Value>;

struct EvalOptions {
  // Bitset tables for defined predicates on ∈-structures. Off means every
  // definition is expanded and evaluated by quantification.
  bool kernels = true;
  // Row comparisons, member-bounded iteration and comprehension lookup.
  bool fast_paths = true;
};

class Evaluator {
 public:
  explicit Evaluator(const Structure& s, EvalOptions opt = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  // world is required iff the structure is Kripke.
  bool eval(const Formula& f, const Assignment& asg = {}, std::optional<std::size_t> world = {});

  // Peels the leading ∀ / ∀P / ∀F binders and searches for values making the
  // remaining matrix false. The returned assignment binds every peeled name.
  std::optional<Assignment> counterexample(const Formula& f, const Assignment& asg = {},
                                           std::optional<std::size_t> world = {});

  const Structure& structure() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool eval(const Structure& s, const Formula& f, const Assignment& asg = {}, std::optional<std::size_t> world = {},
          EvalOptions opt = {});

// True at every world of a Kripke structure.
bool eval_everywhere(const KripkeStructure& k, const Formula& f, const Assignment& asg = {}, EvalOptions opt = {});

// Splits the leading ∀ / ∀P / ∀F binders from the matrix.
std::pair<std::vector<std::string>, Formula> universal_prefix(const Formula& f);

// Names of the defined predicates that have bitset tables.
const std::vector<std::string>& kernel_names();

std::string to_string(const Value& v);

}  // namespace levels::logic
