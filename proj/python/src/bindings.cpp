#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "levels/chfset.hpp"
#include "levels/games.hpp"
#include "levels/hfset.hpp"
#include "levels/interp.hpp"
#include "levels/io.hpp"
#include "levels/logic/eval.hpp"
#include "levels/models.hpp"

namespace py = pybind11;
using namespace levels;

namespace {

models::Kind kind_of(const std::string& k) {
  if (k == "lt") return models::Kind::LT;
  if (k == "blt") return models::Kind::BLT;
  throw DomainError("kind must be lt or blt");
}

}  // namespace

// Sets cross the boundary in their textual form.
PYBIND11_MODULE(_levels, m) {
  m.doc() = "Finite models of level theories, complemented sets and games";

  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line front end; returns (exit code, stdout, stderr).");

  m.def("count", [](std::size_t n, const std::string& kind) {
    return py::int_(py::str(models::closed_form_count(n, kind_of(kind)).str()));
  });
  m.def("universe", [](std::size_t n, const std::string& kind) {
    std::vector<std::string> out;
    if (kind_of(kind) == models::Kind::LT)
      for (HFSet a : models::lt_sets(n)) out.push_back(to_string(a));
    else
      for (CHFSet a : models::blt_sets(n)) out.push_back(to_string(a));
    return out;
  });
  m.def("check", [](const std::string& kind, std::size_t height, const std::string& suite) {
    std::ostringstream out, err;
    cli::run_cli({"--format", "json", "check", "--kind", kind, "--height", std::to_string(height), "--suite", suite},
                 out, err);
    if (out.str().empty()) throw DomainError(err.str());
    return out.str();
  }, "JSON report of an axiom suite on a generated universe.");
  m.def("eval_formula", [](const std::string& kind, std::size_t height, const std::string& formula) {
    const logic::Formula f = logic::parse_formula(formula);
    return kind_of(kind) == models::Kind::LT ? logic::eval(models::lt_universe(height), f)
                                             : logic::eval(models::blt_universe(height), f);
  });

  m.def("hf_canonical", [](const std::string& s) { return to_string(parse_hf(s)); });
  m.def("chf_canonical", [](const std::string& s) { return to_string(parse_chf(s)); });
  m.def("chf_member", [](const std::string& x, const std::string& a) { return member_chf(parse_chf(x), parse_chf(a)); });
  m.def("negative", [](const std::string& a) { return to_string(negative(parse_chf(a))); });
  m.def("complement", [](const std::string& a) { return to_string(complement(parse_chf(a))); });
  m.def("h", [](const std::string& a) { return to_string(interp::h_bij(parse_chf(a))); });
  m.def("h_inv", [](const std::string& a) { return to_string(interp::h_inv(parse_hf(a))); });

  m.def("game_leq", [](const std::string& a, const std::string& c) { return games::game_leq(parse_chf(a), parse_chf(c)); });
  m.def("game_eq", [](const std::string& a, const std::string& c) { return games::game_eq(parse_chf(a), parse_chf(c)); });
  m.def("game_sum", [](const std::string& a, const std::string& c) {
    return to_string(games::game_sum(parse_chf(a), parse_chf(c)));
  });
  m.def("game_neg", [](const std::string& a) { return to_string(games::game_neg(parse_chf(a))); });
  m.def("is_surreal", [](const std::string& a) { return games::is_surreal(parse_chf(a)); });
  m.def("surreal_mul", [](const std::string& a, const std::string& c) {
    return to_string(games::surreal_mul(parse_chf(a), parse_chf(c)));
  });
  m.def("dyadic_value", [](const std::string& a) -> std::optional<std::string> {
    const auto v = games::dyadic_value(parse_chf(a));
    if (!v) return std::nullopt;
    return games::to_string(*v);
  }, "The dyadic a is equivalent to, as text, or None.");
}
