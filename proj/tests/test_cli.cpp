#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "levels/io.hpp"
#include "levels/logic/eval.hpp"
#include "levels/models.hpp"

using namespace levels;
using levels::io::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = std::string(P_tmpdir) + "/levels_cli_" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("count") {
  CHECK(run({"count", "--kind", "blt", "3"}).out == "512\n");
  CHECK(run({"count", "--kind", "lt", "4"}).out == "16\n");
  CHECK(run({"count", "--kind", "lt", "5"}).out == "65536\n");
  const Run j = run({"--format", "json", "count", "--kind", "blt", "2"});
  CHECK(json::parse(j.out).at("count") == "8");
  const Run big = run({"count", "--kind", "lt", "7"});
  CHECK(big.code == cli::kRefused);
  CHECK(big.err.find("exceeds cap") != std::string::npos);
  CHECK(run({"count", "--kind", "lt", "x"}).code == cli::kUsage);
}

TEST_CASE("check exit codes and reports") {
  const Run ok = run({"check", "--kind", "lt", "--height", "3", "--suite", "LT"});
  CHECK(ok.code == cli::kOk);
  const Run fail = run({"--format", "json", "check", "--kind", "lt", "--height", "2", "--suite", "LT+Endless"});
  CHECK(fail.code == cli::kFail);
  const json r = json::parse(fail.out);
  CHECK(r.at("all_hold") == false);
  bool endless_fails = false;
  for (const json& v : r.at("verdicts"))
    if (v.at("axiom") == "Endless") endless_fails = v.at("holds") == false && v.contains("witness");
  CHECK(endless_fails);
  CHECK(run({"check", "--kind", "blt", "--height", "2", "--suite", "BST"}).code == cli::kOk);
  CHECK(run({"check", "--kind", "lt", "--height", "2", "--suite", "PST"}).code == cli::kOk);
  CHECK(run({"check", "--kind", "lt", "--height", "3", "--suite", "Scott1957"}).code == cli::kOk);
  CHECK(run({"check", "--suite", "NoSuchSuite"}).code == cli::kRefused);
  CHECK(run({"check", "--kind", "qt"}).code == cli::kUsage);
  // Identical runs give identical JSON.
  const std::vector<std::string> args = {"--format", "json", "check", "--kind", "blt", "--height", "2"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("enum output re-parses") {
  const auto lt = lines(run({"enum", "--kind", "lt", "--height", "4"}).out);
  const auto want = models::lt_sets(4);
  REQUIRE(lt.size() == want.size());
  for (std::size_t i = 0; i < lt.size(); ++i) CHECK(parse_hf(lt[i]) == want[i]);
  const auto blt = lines(run({"enum", "--kind", "blt", "--height", "2"}).out);
  const auto bwant = models::blt_sets(2);
  REQUIRE(blt.size() == bwant.size());
  for (std::size_t i = 0; i < blt.size(); ++i) CHECK(parse_chf(blt[i]) == bwant[i]);
  const json j = json::parse(run({"--format", "json", "enum", "--kind", "blt", "--height", "3"}).out);
  CHECK(j.at("count") == 512);
}

TEST_CASE("enumerate small models") {
  const json lt = json::parse(run({"--format", "json", "enum", "--enumerate", "4", "--suite", "LT"}).out);
  CHECK(lt.at("count") == 1);
  const auto e = std::get<logic::EpsilonStructure>(io::structure_from_json(lt.at("structures")[0]));
  CHECK(models::check_axioms(e, models::suite("LT")).all_hold());
  const json blt = json::parse(run({"--format", "json", "enum", "--enumerate", "4", "--suite", "BLT"}).out);
  CHECK(blt.at("count") == 0);
  CHECK(run({"enum", "--enumerate", "3"}).code == cli::kUsage);
}

TEST_CASE("translate") {
  CHECK(run({"translate", "--dir", "chf2hf", "co{}"}).out == "{{}}\n");
  CHECK(run({"translate", "--dir", "hf2chf", "{{}}"}).out == "co{}\n");
  CHECK(run({"translate", "--dir", "helow", "{{}}"}).out == "{{}}\n");
  CHECK(run({"translate", "--dir", "modalize", "(in x y)"}).out == "(dia (in x y))\n");
  CHECK(run({"translate", "--dir", "dual", "(in x y)"}).out == "(notin x y)\n");
  for (CHFSet c : universe_chf(3)) {
    const std::string hf = lines(run({"translate", "--dir", "chf2hf", to_string(c)}).out).at(0);
    CHECK(parse_chf(lines(run({"translate", "--dir", "hf2chf", hf}).out).at(0)) == c);
  }
  const Run bad = run({"translate", "--dir", "chf2hf", "{{}"});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("position") != std::string::npos);
  CHECK(run({"translate", "--dir", "sideways", "{}"}).code == cli::kUsage);
  CHECK(run({"translate", "{}"}).code == cli::kUsage);
}

TEST_CASE("games and surreals") {
  CHECK(run({"game", "leq", "{{}}", "{}"}).out == "false\n");
  CHECK(run({"game", "leq", "{}", "{{}}"}).out == "true\n");
  CHECK(run({"game", "eq", "{}", "co{}"}).out == "true\n");
  CHECK(run({"game", "value", "{{},co{{}}}"}).out == "1/2\n");
  CHECK(run({"game", "value", "{{},co{}}"}).out == "not a number\n");
  CHECK(run({"game", "value", "{co{}}"}).out == "-1\n");
  CHECK(run({"game", "canon", "co{}", "--height", "1"}).out == "{}\n");
  CHECK(run({"game", "neg", "{{}}"}).out == "co{co{}}\n");
  const std::string two = lines(run({"game", "sum", "{{}}", "{{}}"}).out).at(0);
  CHECK(run({"game", "value", two}).out == "2\n");
  CHECK(run({"game", "options", "{{},co{}}"}).out == "low: {}\nhigh: co{}\n");
  CHECK(run({"surreal", "mul", "{{}}", "{{}}"}).out == "{{}}\n");
  CHECK(run({"surreal", "is", "{{},co{}}"}).out == "false\n");
  CHECK(run({"surreal", "ordinal", "{{}}"}).out == "true\n");
  CHECK(run({"surreal", "mul", "{{},co{}}", "{{}}"}).code == cli::kRefused);
  CHECK(run({"game", "fly", "{}"}).code == cli::kUsage);
  CHECK(run({"game", "leq", "{", "{}"}).code == cli::kUsage);
  const json j = json::parse(run({"--format", "json", "game", "sum", "{}", "co{}"}).out);
  CHECK(io::chf_from_json(j.at("json")) == parse_chf(j.at("set").get<std::string>()));
}

TEST_CASE("kripke and eval") {
  CHECK(run({"kripke", "--height", "3"}).code == cli::kOk);
  CHECK(run({"kripke", "--height", "3", "--suite", "LPST"}).code == cli::kOk);
  const Run dump = run({"kripke", "--height", "2", "--dump"});
  const auto k = io::structure_from_json(json::parse(dump.out));
  CHECK(std::get<logic::KripkeStructure>(k) == models::potentialize(models::lt_universe(2)));
  const std::string path = temp_file("kripke.json", dump.out);
  CHECK(run({"check", "--structure", path, "--suite", "PST"}).code == cli::kOk);
  CHECK(run({"eval", "--structure", path, "(dia (exists x (exists y (in x y))))"}).out == "true\n");
  const std::string first = std::get<logic::KripkeStructure>(k).world_labels[0];
  CHECK(run({"eval", "--structure", path, "--world", first, "(exists x (exists y (in x y)))"}).out == "false\n");
  CHECK(run({"eval", "--height", "3", "(exists a (forall x (notin x a)))"}).out == "true\n");
  CHECK(run({"eval", "--kind", "blt", "--height", "2", "(exists a (in a a))"}).out == "true\n");
  CHECK(run({"eval", "(exists a (in a"}).code == cli::kUsage);
  CHECK(run({"eval", "--structure", "/nonexistent/x.json", "(exists a (in a a))"}).code == cli::kUsage);
  CHECK(run({"eval", "--structure", temp_file("bad.json", "{\"kind\":"), "(exists a (in a a))"}).code ==
        cli::kUsage);
  CHECK(run({"eval", "--structure", temp_file("wrong.json", R"({"kind":"epsilon","elements":["a"],"mem":{"b":[]}})"),
             "(exists a (in a a))"})
            .code == cli::kRefused);
}

TEST_CASE("structure JSON round trips") {
  const std::vector<logic::Structure> samples = {
      models::lt_universe(3), models::lt_universe_ranked(3), models::blt_universe(2),
      models::st_structure_from_lt(models::lt_universe(3)), models::bst_structure_from_blt(models::blt_universe(2)),
      models::potentialize(models::lt_universe(3)), models::scott1957_models().first};
  for (const auto& s : samples) {
    const json j = io::to_json(s);
    CHECK(io::structure_from_json(j) == s);
    CHECK(io::structure_from_json(json::parse(j.dump())) == s);
  }
  for (HFSet a : models::lt_sets(4)) CHECK(io::hf_from_json(io::to_json(a)) == a);
  for (CHFSet a : universe_chf(3)) CHECK(io::chf_from_json(io::to_json(a)) == a);
  CHECK(io::to_json(parse_hf("{{}}")).dump() == "[[]]");
  CHECK(io::to_json(CHFSet::universe()).dump() == R"({"co":[]})");
  CHECK_THROWS_AS(io::chf_from_json(json::parse(R"({"co":[],"x":1})")), DomainError);
  CHECK_THROWS_AS(io::structure_from_json(json::parse(R"({"kind":"epsilon","elements":["a","a"]})")), DomainError);
}
