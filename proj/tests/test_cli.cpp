#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "treedim/cli.hpp"
#include "treedim/error.hpp"

using namespace treedim;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::initializer_list<const char *> args) {
  std::vector<const char *> argv{"treedim"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string &name,
                                const std::string &content) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / name;
  std::ofstream f(p, std::ios::binary);
  f << content;
  return p;
}

} // namespace

TEST_CASE("help exits cleanly, config mistakes do not") {
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"dim", "--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitConfigError);
  CHECK(cli({"dim"}).code == kExitConfigError);            // --m missing
  CHECK(cli({"dim", "--m", "2", "--bogus"}).code == kExitConfigError);
  CHECK(cli({"frobnicate", "--m", "2"}).code == kExitConfigError);
  CHECK(cli({"dim", "--m", "1"}).code == kExitConfigError);
  CHECK(cli({"dim", "--m", "2", "--format", "yaml"}).code ==
        kExitConfigError);
  CHECK(cli({"dim", "--m", "2", "--group", "wat"}).code == kExitConfigError);
  CHECK(cli({"verify", "--m", "2", "--which", "prop99"}).code ==
        kExitConfigError);
  CHECK(cli({"verify", "--m", "2", "--format", "csv"}).code ==
        kExitConfigError);
  CHECK(cli({"order", "--m", "2", "--element", "a q"}).code ==
        kExitConfigError);
}

TEST_CASE("point budget below the alphabet size cannot compute any level") {
  const CliResult r = cli({"dim", "--m", "4", "--point-budget", "3"});
  CHECK(r.code == kExitBudgetExhausted);
  CHECK(r.err.find("budget") != std::string::npos);
  // A suite whose every level is beyond the budget is exhaustion too.
  CHECK(cli({"verify", "--m", "6", "--which", "lemma32", "--point-budget",
             "10"})
            .code == kExitBudgetExhausted);
  // Partial coverage is an ordinary truncated run.
  CHECK(cli({"verify", "--m", "6", "--which", "all", "--max-level", "3",
             "--point-budget", "10"})
            .code == kExitOk);
}

TEST_CASE("identical configuration produces byte-identical output") {
  const CliResult a =
      cli({"dim", "--m", "3", "--max-level", "4", "--format", "csv"});
  const CliResult b =
      cli({"dim", "--m", "3", "--max-level", "4", "--format", "csv"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);

  const CliResult v1 = cli({"verify", "--m", "3", "--which", "all"});
  const CliResult v2 = cli({"verify", "--m", "3", "--which", "all"});
  CHECK(v1.code == kExitOk);
  CHECK(v1.out == v2.out);
}

TEST_CASE("dim reads automaton files and checks their alphabet") {
  const auto path = temp_file(
      "treedim_adder.json",
      R"({"alphabet_size": 2, "states": [{"name": "a", "output": [2, 1],)"
      R"( "transitions": ["e", "a"]}]})");
  const std::string group = "file:" + path.string();

  const CliResult ok =
      cli({"dim", "--m", "2", "--group", group.c_str(), "--max-level", "3"});
  CHECK(ok.code == kExitOk);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc.at("group") == group);
  CHECK(doc.at("levels").size() == 3);
  CHECK(doc.at("levels")[2].at("index") == "8");
  CHECK_FALSE(doc.contains("closed_form"));

  const CliResult mismatch =
      cli({"dim", "--m", "3", "--group", group.c_str()});
  CHECK(mismatch.code == kExitConfigError);
  CHECK(mismatch.err.find("alphabet size 2") != std::string::npos);
}

TEST_CASE("malformed automaton files name the offending state and field") {
  const auto path = temp_file(
      "treedim_bad.json",
      R"({"alphabet_size": 2, "states": [{"name": "a", "output": [2, 2],)"
      R"( "transitions": ["e", "a"]}]})");
  const std::string group = "file:" + path.string();
  const CliResult r = cli({"dim", "--m", "2", "--group", group.c_str()});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("state 'a'") != std::string::npos);
  CHECK(r.err.find("output") != std::string::npos);

  const auto missing = temp_file("treedim_missing.json",
                                 R"({"alphabet_size": 2, "states": [{}]})");
  const std::string group2 = "file:" + missing.string();
  const CliResult r2 = cli({"dim", "--m", "2", "--group", group2.c_str()});
  CHECK(r2.code == kExitConfigError);

  const CliResult r3 =
      cli({"dim", "--m", "2", "--group", "file:/nonexistent/x.json"});
  CHECK(r3.code == kExitConfigError);
}

TEST_CASE("order reports both plain and derived-quotient orders") {
  const CliResult r =
      cli({"order", "--m", "3", "--element", "a b", "--level", "2"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("m") == 3);
  CHECK(doc.at("level") == 2);
  CHECK(doc.at("element") == "a b");
  CHECK(doc.at("order") == "3");
  CHECK(doc.at("order_mod_derived") == "3");

  const auto id = cli({"order", "--m", "2", "--element", "e", "--level", "3"});
  CHECK(nlohmann::json::parse(id.out).at("order") == "1");

  const auto four =
      cli({"order", "--m", "4", "--element", "a b", "--level", "1"});
  CHECK(nlohmann::json::parse(four.out).at("order_mod_derived") == "2");

  const auto inv =
      cli({"order", "--m", "2", "--element", "b^-1", "--level", "3"});
  REQUIRE(inv.code == kExitOk);
  CHECK(nlohmann::json::parse(inv.out).at("order") == "8");
}

TEST_CASE("reports can be written to a file") {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / "treedim_out.json";
  std::filesystem::remove(p);
  const std::string path_str = p.string();
  const CliResult r = cli({"dim", "--m", "2", "--max-level", "2", "--out",
                           path_str.c_str()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(p);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(nlohmann::json::parse(buf.str()).at("m") == 2);

  CHECK(cli({"dim", "--m", "2", "--out", "/nonexistent-dir/x.json"}).code ==
        kExitConfigError);
}

TEST_CASE("point budget resolution order: flag, environment, default") {
  unsetenv("TREEDIM_POINT_BUDGET");
  CHECK(resolve_point_budget(std::nullopt) == kDefaultPointBudget);
  CHECK(resolve_point_budget(123) == 123);

  setenv("TREEDIM_POINT_BUDGET", "777", 1);
  CHECK(resolve_point_budget(std::nullopt) == 777);
  CHECK(resolve_point_budget(123) == 123);

  setenv("TREEDIM_POINT_BUDGET", "cheese", 1);
  CHECK_THROWS_AS(resolve_point_budget(std::nullopt), Error);
  unsetenv("TREEDIM_POINT_BUDGET");

  // The environment reaches the subcommands: a tiny budget forces exit 3.
  setenv("TREEDIM_POINT_BUDGET", "3", 1);
  CHECK(cli({"dim", "--m", "4"}).code == kExitBudgetExhausted);
  CHECK(cli({"dim", "--m", "4", "--point-budget", "4096", "--max-level",
             "2"})
            .code == kExitOk);
  unsetenv("TREEDIM_POINT_BUDGET");
}

TEST_CASE("verify emits a sorted record array") {
  const CliResult r = cli({"verify", "--m", "2", "--which", "all",
                           "--max-level", "3", "--kmax", "1"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() > 0);
  std::string prev_check;
  for (const auto &rec : doc) {
    CHECK(rec.contains("check"));
    CHECK(rec.contains("expected"));
    CHECK(rec.contains("actual"));
    CHECK(rec.contains("pass"));
    CHECK(rec.at("m") == 2);
    const std::string check = rec.at("check");
    CHECK(prev_check <= check);
    prev_check = check;
  }
}
