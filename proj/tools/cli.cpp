#include "cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "levels/config.hpp"
#include "levels/games.hpp"
#include "levels/interp.hpp"
#include "levels/io.hpp"
#include "levels/logic/eval.hpp"
#include "levels/logic/formula.hpp"
#include "levels/logic/translate.hpp"
#include "levels/models.hpp"

namespace levels::cli {

namespace {

using io::json;
using logic::Structure;

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string kind = "lt";
  std::size_t height = 3;
  std::string suite;
  std::string structure_file;
  std::size_t enumerate_k = 0;
  bool dump = false;
  std::string dir;
  std::string var = "lv";
  std::string world;
  std::vector<std::string> operands;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

models::Kind kind_of(const Options& o) {
  if (o.kind == "lt") return models::Kind::LT;
  if (o.kind == "blt") return models::Kind::BLT;
  throw Usage("--kind must be lt or blt");
}

const std::string& operand(const Options& o, std::size_t i, const char* what) {
  if (o.operands.size() <= i) throw Usage(std::string("missing ") + what);
  return o.operands[i];
}

Structure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  return io::structure_from_json(j);
}

// The structure a suite is read in, built from --kind and --height.
Structure structure_for(const Options& o, models::Target target) {
  const models::Kind k = kind_of(o);
  const bool lt = k == models::Kind::LT;
  switch (target) {
    case models::Target::Epsilon:
      return lt ? models::lt_universe(o.height) : models::blt_universe(o.height);
    case models::Target::Ranked:
      if (!lt) throw DomainError("ranked structures are built from lt universes only");
      return models::lt_universe_ranked(o.height);
    case models::Target::Stage:
      return lt ? Structure(models::st_structure_from_lt(models::lt_universe(o.height)))
                : Structure(models::bst_structure_from_blt(models::blt_universe(o.height)));
    case models::Target::Kripke:
      if (!lt) throw DomainError("Kripke structures are built from lt universes only");
      return models::potentialize(models::lt_universe(o.height));
  }
  throw DomainError("unknown target");
}

int report(const Options& o, const models::CheckReport& r, std::ostream& out) {
  if (o.format == "json")
    out << io::to_json(r).dump(2) << "\n";
  else
    out << models::to_text(r);
  return r.all_hold() ? kOk : kFail;
}

void print_bool(const Options& o, bool v, std::ostream& out) {
  if (o.format == "json")
    out << json(v).dump() << "\n";
  else
    out << (v ? "true" : "false") << "\n";
}

void print_chf(const Options& o, CHFSet a, std::ostream& out) {
  if (o.format == "json")
    out << json{{"set", to_string(a)}, {"json", io::to_json(a)}}.dump() << "\n";
  else
    out << to_string(a) << "\n";
}

void print_value(const Options& o, std::optional<games::Dyadic> v, std::ostream& out) {
  const std::string text = v ? games::to_string(*v) : "not a number";
  if (o.format == "json")
    out << (v ? json(text) : json(nullptr)).dump() << "\n";
  else
    out << text << "\n";
}

int cmd_enum(const Options& o, std::ostream& out) {
  if (o.enumerate_k > 0) {
    if (o.suite.empty()) throw Usage("--enumerate needs --suite");
    const auto found = models::enumerate_structures(o.enumerate_k, models::suite(o.suite));
    if (o.format == "json") {
      json list = json::array();
      for (const auto& e : found) list.push_back(io::to_json(Structure(e)));
      out << json{{"k", o.enumerate_k}, {"suite", o.suite}, {"count", found.size()}, {"structures", list}}.dump(2)
          << "\n";
    } else {
      out << found.size() << " structure(s) with " << o.enumerate_k << " elements satisfy " << o.suite << "\n";
      for (const auto& e : found) {
        out << "--\n";
        for (std::size_t a = 0; a < e.size(); ++a) {
          out << e.labels[a] << " = {";
          bool first = true;
          for (std::size_t x : logic::indices(e.members[a])) out << (first ? "" : ",") << e.labels[x], first = false;
          out << "}\n";
        }
      }
    }
    return kOk;
  }
  std::vector<std::string> sets;
  if (kind_of(o) == models::Kind::LT)
    for (HFSet a : models::lt_sets(o.height)) sets.push_back(to_string(a));
  else
    for (CHFSet a : models::blt_sets(o.height)) sets.push_back(to_string(a));
  if (o.format == "json")
    out << json{{"kind", o.kind}, {"height", o.height}, {"count", sets.size()}, {"sets", sets}}.dump(2) << "\n";
  else
    for (const auto& s : sets) out << s << "\n";
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::string name = o.suite.empty() ? (o.kind == "blt" ? "BLT" : "LT") : o.suite;
  const models::AxiomSuite& s = models::suite(name);
  const Structure st = o.structure_file.empty() ? structure_for(o, s.target) : load_structure(o.structure_file);
  return report(o, models::check_axioms(st, s), out);
}

int cmd_count(const Options& o, std::ostream& out) {
  std::size_t n = o.height;
  if (!o.operands.empty()) {
    try {
      n = std::stoul(o.operands[0]);
    } catch (const std::exception&) {
      throw Usage("count takes a height, got \"" + o.operands[0] + "\"");
    }
  }
  const auto c = models::closed_form_count(n, kind_of(o));
  if (o.format == "json")
    out << json{{"kind", o.kind}, {"height", n}, {"count", c.str()}}.dump() << "\n";
  else
    out << c << "\n";
  return kOk;
}

int cmd_translate(const Options& o, std::ostream& out) {
  const std::string& in = operand(o, 0, "input");
  std::string result;
  const std::map<std::string, std::function<std::string()>> table = {
      {"chf2hf", [&] { return to_string(interp::h_bij(parse_chf(in))); }},
      {"hf2chf", [&] { return to_string(interp::h_inv(parse_hf(in))); }},
      {"helow", [&] { return to_string(helow_of_hf(parse_hf(in))); }},
      {"encode", [&] { return to_string(interp::encode_star(parse_chf(in))); }},
      {"decode", [&] { return to_string(interp::decode_star(parse_hf(in))); }},
      {"star", [&] { return logic::to_sexpr(logic::star_st(logic::parse_formula(in))); }},
      {"bstar", [&] { return logic::to_sexpr(logic::star_bst(logic::parse_formula(in))); }},
      {"modalize", [&] { return logic::to_sexpr(logic::modalize(logic::parse_formula(in))); }},
      {"levelling", [&] { return logic::to_sexpr(logic::levelling(logic::parse_formula(in), o.var)); }},
      {"bullet", [&] { return logic::to_sexpr(logic::mlt_bullet(logic::parse_formula(in))); }},
      {"dual", [&] { return logic::to_sexpr(logic::dual_swap(logic::parse_formula(in))); }},
      {"helow-relativize", [&] { return logic::to_sexpr(logic::helow_relativize(logic::parse_formula(in))); }},
  };
  auto it = table.find(o.dir);
  if (it == table.end()) throw Usage("unknown --dir \"" + o.dir + "\"");
  result = it->second();
  if (o.format == "json")
    out << json{{"dir", o.dir}, {"input", in}, {"output", result}}.dump() << "\n";
  else
    out << result << "\n";
  return kOk;
}

int cmd_game(const Options& o, std::ostream& out) {
  const std::string& op = operand(o, 0, "game operation");
  auto arg = [&](std::size_t i) { return parse_chf(operand(o, i, "set operand")); };
  if (op == "leq") return print_bool(o, games::game_leq(arg(1), arg(2)), out), kOk;
  if (op == "eq") return print_bool(o, games::game_eq(arg(1), arg(2)), out), kOk;
  if (op == "fuzzy") return print_bool(o, games::game_fuzzy(arg(1), arg(2)), out), kOk;
  if (op == "sum") return print_chf(o, games::game_sum(arg(1), arg(2)), out), kOk;
  if (op == "sub") return print_chf(o, games::game_sub(arg(1), arg(2)), out), kOk;
  if (op == "neg") return print_chf(o, games::game_neg(arg(1)), out), kOk;
  if (op == "canon") return print_chf(o, games::canonical_rep(arg(1), o.height), out), kOk;
  if (op == "value") return print_value(o, games::dyadic_value(arg(1)), out), kOk;
  if (op == "options") {
    const games::GameView v = games::options(arg(1));
    std::vector<std::string> lo, hi;
    for (CHFSet x : v.low_options) lo.push_back(to_string(x));
    for (CHFSet y : v.high_options) hi.push_back(to_string(y));
    if (o.format == "json") {
      out << json{{"low", lo}, {"high", hi}}.dump() << "\n";
    } else {
      out << "low:";
      for (const auto& s : lo) out << " " << s;
      out << "\nhigh:";
      for (const auto& s : hi) out << " " << s;
      out << "\n";
    }
    return kOk;
  }
  throw Usage("unknown game operation \"" + op + "\"");
}

int cmd_surreal(const Options& o, std::ostream& out) {
  const std::string& op = operand(o, 0, "surreal operation");
  auto arg = [&](std::size_t i) { return parse_chf(operand(o, i, "set operand")); };
  if (op == "mul") return print_chf(o, games::surreal_mul(arg(1), arg(2)), out), kOk;
  if (op == "is") return print_bool(o, games::is_surreal(arg(1)), out), kOk;
  if (op == "ordinal") return print_bool(o, games::is_surreal_ordinal(arg(1)), out), kOk;
  throw Usage("unknown surreal operation \"" + op + "\"");
}

int cmd_kripke(const Options& o, std::ostream& out) {
  const logic::KripkeStructure k = models::potentialize(models::lt_universe(o.height));
  if (o.dump) {
    out << io::to_json(Structure(k)).dump(2) << "\n";
    return kOk;
  }
  return report(o, models::check_axioms(k, models::suite(o.suite.empty() ? "PST" : o.suite)), out);
}

int cmd_eval(const Options& o, std::ostream& out) {
  const logic::Formula f = logic::parse_formula(operand(o, 0, "formula"));
  const Structure st = o.structure_file.empty() ? structure_for(o, models::Target::Epsilon)
                                                : load_structure(o.structure_file);
  std::optional<std::size_t> world;
  if (!o.world.empty()) {
    const auto* k = std::get_if<logic::KripkeStructure>(&st);
    if (!k) throw Usage("--world needs a Kripke structure");
    auto it = std::find(k->world_labels.begin(), k->world_labels.end(), o.world);
    if (it == k->world_labels.end()) throw Usage("unknown world \"" + o.world + "\"");
    world = static_cast<std::size_t>(it - k->world_labels.begin());
  }
  if (std::holds_alternative<logic::KripkeStructure>(st) && !world)
    return print_bool(o, logic::eval_everywhere(std::get<logic::KripkeStructure>(st), f), out), kOk;
  print_bool(o, logic::eval(st, f, {}, world), out);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  o.seed = limits().seed;
  CLI::App app{"Finite models of level theories, complemented sets and games", "levels"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "Seed for sampled checks");

  auto kind_opt = [&](CLI::App* c) { c->add_option("--kind", o.kind, "lt or blt")->check(CLI::IsMember({"lt", "blt"})); };
  auto height_opt = [&](CLI::App* c) { c->add_option("--height", o.height, "Universe height"); };
  auto operands = [&](CLI::App* c, const char* what) { c->add_option(what, o.operands, "Operands"); };

  CLI::App* en = app.add_subcommand("enum", "List a universe, or enumerate small models of a suite");
  kind_opt(en), height_opt(en);
  en->add_option("--enumerate", o.enumerate_k, "Number of elements (<= 4)");
  en->add_option("--suite", o.suite, "Axiom suite");

  CLI::App* ck = app.add_subcommand("check", "Check an axiom suite on a generated universe or a JSON structure");
  kind_opt(ck), height_opt(ck);
  ck->add_option("--suite", o.suite, "Axiom suite");
  ck->add_option("--structure", o.structure_file, "JSON structure file");

  CLI::App* co = app.add_subcommand("count", "Closed-form universe size");
  kind_opt(co), height_opt(co), operands(co, "n");

  CLI::App* tr = app.add_subcommand("translate", "Translate a set or a formula");
  tr->add_option("--dir", o.dir, "chf2hf|hf2chf|helow|encode|decode|star|bstar|modalize|levelling|bullet|dual|helow-relativize")
      ->required();
  tr->add_option("--var", o.var, "Level variable for levelling");
  operands(tr, "input");

  CLI::App* gm = app.add_subcommand("game", "Game arithmetic on complemented sets");
  height_opt(gm), operands(gm, "args");
  CLI::App* su = app.add_subcommand("surreal", "Surreal recognition and multiplication");
  operands(su, "args");

  CLI::App* kr = app.add_subcommand("kripke", "Potentialize an lt universe and check a modal suite");
  height_opt(kr);
  kr->add_option("--suite", o.suite, "Modal suite (default PST)");
  kr->add_flag("--dump", o.dump, "Print the structure as JSON instead");

  CLI::App* ev = app.add_subcommand("eval", "Evaluate a formula");
  kind_opt(ev), height_opt(ev), operands(ev, "formula");
  ev->add_option("--structure", o.structure_file, "JSON structure file");
  ev->add_option("--world", o.world, "World label for Kripke structures");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::uint64_t saved_seed = limits().seed;
  limits().seed = o.seed;
  int code = kOk;
  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "enum") code = cmd_enum(o, out);
    else if (name == "check") code = cmd_check(o, out);
    else if (name == "count") code = cmd_count(o, out);
    else if (name == "translate") code = cmd_translate(o, out);
    else if (name == "game") code = cmd_game(o, out);
    else if (name == "surreal") code = cmd_surreal(o, out);
    else if (name == "kripke") code = cmd_kripke(o, out);
    else if (name == "eval") code = cmd_eval(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    code = kUsage;
  } catch (const Usage& e) {
    err << "usage: " << e.what() << "\n";
    code = kUsage;
  } catch (const CapExceeded& e) {
    err << "refused: " << e.what() << "\n";
    code = kRefused;
  } catch (const DomainError& e) {
    err << "refused: " << e.what() << "\n";
    code = kRefused;
  }
  limits().seed = saved_seed;
  return code;
}

}  // namespace levels::cli
