#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "gridharden/commands.hpp"
#include "gridharden/error.hpp"
#include "gridharden/io.hpp"
#include "support/instances.hpp"

using namespace gridharden;
namespace fs = std::filesystem;

namespace {

const std::string kData = GRIDHARDEN_DATA_DIR;

std::string data(const std::string& rel) { return kData + "/" + rel; }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(RunConfig cfg) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

RunConfig worked(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.feeder = data("worked_example/feeder.json");
  cfg.scenario = data("worked_example/scenario.json");
  cfg.menu = data("worked_example/menu.json");
  return cfg;
}

RunConfig ieee13(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.feeder = data("ieee13/feeder.json");
  cfg.scenario = data("ieee13/scenario.json");
  cfg.menu = data("ieee13/menu.json");
  return cfg;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gridharden_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("feeder JSON round trip") {
  const auto feeder = testing::ieee13_feeder();
  const auto back = parse_feeder(to_json(feeder));
  CHECK(back.source == feeder.source);
  CHECK(back.nodes.size() == feeder.nodes.size());
  CHECK(back.edges.size() == feeder.edges.size());
  CHECK(to_json(back) == to_json(feeder));

  const auto menus = testing::worked_example_menus();
  const auto parsed = parse_menus(to_json(menus));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].options == menus[0].options);
  CHECK(parsed[1].options == menus[1].options);
}

TEST_CASE("strict parsing rejects unknown fields, lenient parsing warns") {
  auto doc = to_json(testing::worked_example_scenario());
  doc["damaged"][0]["crew"] = 2;
  CHECK_THROWS_AS(parse_scenario(doc, {true, nullptr}), Error);
  std::ostringstream warnings;
  const auto scenario = parse_scenario(doc, {false, &warnings});
  CHECK(scenario.damaged.size() == 2);
  CHECK(warnings.str().find("crew") != std::string::npos);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(parse_feeder(json::parse(R"({"nodes": []})")), Error);
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"damaged": [{"edge": "a", "repair_time": "x"}]})")), Error);
  CHECK_THROWS_AS(parse_menus(json::parse(R"({"options": [1, 2]})")), Error);
  try {
    parse_feeder(json::parse(R"({"source": ["a", "b"], "nodes": [], "edges": []})"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "multiple-sources");
  }
  try {
    read_json_file(data("does/not/exist.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "io-error");
  }
}

TEST_CASE("numbers are written with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("budget grids") {
  const auto grid = BudgetGrid::parse("0:20:1");
  CHECK(grid.values().size() == 21);
  CHECK(grid.values().back() == 20.0);
  CHECK(BudgetGrid::parse("0:1:0.1").values().size() == 11);
  CHECK(BudgetGrid::parse("3:3:1").values().size() == 1);
  CHECK_THROWS(BudgetGrid::parse("0:5"));
  CHECK_THROWS(BudgetGrid::parse("0:5:0"));
  CHECK_THROWS(BudgetGrid::parse("5:0:1"));
  CHECK_THROWS(BudgetGrid::parse("-1:5:1"));
}

TEST_CASE("sequence command on the IEEE 13 scenario") {
  auto cfg = ieee13("sequence");
  cfg.oracle = true;
  const auto r = run(cfg);
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["order"].size() == 4);
  CHECK(doc["order"][0] == "650-632");
  CHECK(doc["agrees"] == true);
}

TEST_CASE("sequence command with no damage") {
  const auto dir = scratch("nodamage");
  write_text_file((dir / "scenario.json").string(), R"({"damaged": []})");
  auto cfg = ieee13("sequence");
  cfg.scenario = (dir / "scenario.json").string();
  const auto r = run(cfg);
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["order"].empty());
  CHECK(doc["harm"] == 0.0);
}

TEST_CASE("harden command reproduces the worked example") {
  auto cfg = worked("harden");
  cfg.budget = 10.0;
  cfg.exact = true;
  const auto r = run(cfg);
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["plan"]["1"]["dp"] == 1.2);
  CHECK(doc["plan"]["2"]["dp"] == 3.0);
  CHECK(doc["spend"] == 9.5);
  CHECK(doc["table"].size() == 2);
  CHECK(doc["ratio"].get<double>() == doctest::Approx(1.0));

  cfg.budget = 0.0;
  cfg.exact = false;
  const auto zero = json::parse(run(cfg).out);
  CHECK(zero["plan"].empty());
  CHECK(zero["spend"] == 0.0);
}

TEST_CASE("input errors exit with code 2 and an error document") {
  auto cfg = worked("harden");
  cfg.budget = 10.0;
  cfg.menu = data("missing.json");
  const auto r = run(cfg);
  CHECK(r.code == 2);
  const auto err = json::parse(r.err);
  CHECK(err["error"] == "io-error");
  CHECK(err.contains("message"));
}

TEST_CASE("sweep rows and single-point agreement with harden") {
  const auto dir = scratch("sweep");
  auto cfg = ieee13("sweep");
  cfg.budgets = BudgetGrid::parse("0:30:1");
  cfg.out = (dir / "sweep.csv").string();
  REQUIRE(run(cfg).code == 0);
  const auto rows = lines_of(slurp(dir / "sweep.csv"));
  REQUIRE(rows.size() == 32);
  CHECK(rows[0] == "budget,f_of_mean");
  double previous = 1e300;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto comma = rows[k].find(',');
    const double harm = std::stod(rows[k].substr(comma + 1));
    CHECK(harm <= previous);
    previous = harm;
  }
  // Menus saturate at a spend of 26.5; later rows repeat the same harm.
  for (std::size_t k = 29; k < rows.size(); ++k) {
    CHECK(rows[k].substr(rows[k].find(',')) == rows[28].substr(rows[28].find(',')));
  }

  cfg.budgets = BudgetGrid::parse("7:7:1");
  REQUIRE(run(cfg).code == 0);
  const auto single = lines_of(slurp(dir / "sweep.csv"));
  REQUIRE(single.size() == 2);
  auto h = ieee13("harden");
  h.budget = 7.0;
  const auto plan = json::parse(run(h).out);
  CHECK(single[1] == "7," + format_number(plan["harm"].get<double>()));
}

TEST_CASE("sweep with Monte Carlo columns") {
  auto cfg = worked("sweep");
  cfg.budgets = BudgetGrid::parse("0:10:5");
  cfg.seed = 3;
  cfg.samples = 200;
  const auto r = run(cfg);
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "budget,f_of_mean,mc_mean,mc_stderr");
}

TEST_CASE("evaluate is deterministic and reports the gap term with pmax") {
  auto cfg = ieee13("evaluate");
  cfg.menu.clear();
  cfg.seed = 11;
  cfg.samples = 1;
  const auto a = run(cfg);
  const auto b = run(cfg);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["stderr"] == 0.0);
  CHECK(json::parse(a.out)["jensen_bound"].is_null());

  cfg.samples = 500;
  cfg.pmax = 12.0;
  const auto c = json::parse(run(cfg).out);
  CHECK(c["samples"] == 500);
  CHECK(c["jensen_bound"].is_number());
}

TEST_CASE("evaluate writes a trajectory") {
  const auto dir = scratch("trajectory");
  auto cfg = worked("evaluate");
  cfg.budget = 10.0;
  cfg.seed = 5;
  cfg.samples = 100;
  cfg.trajectory = (dir / "q.csv").string();
  REQUIRE(run(cfg).code == 0);
  const auto rows = lines_of(slurp(dir / "q.csv"));
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == "time,Q");
  CHECK(rows[1] == "0,0.5");
  CHECK(rows.back().substr(rows.back().find(',')) == ",1");
}

TEST_CASE("generate is reproducible and validates") {
  const auto dir1 = scratch("gen1");
  const auto dir2 = scratch("gen2");
  RunConfig cfg;
  cfg.command = "generate";
  cfg.nodes = 13;
  cfg.damaged = 4;
  cfg.seed = 7;
  cfg.out = dir1.string();
  REQUIRE(run(cfg).code == 0);
  cfg.out = dir2.string();
  REQUIRE(run(cfg).code == 0);
  for (const char* name : {"feeder.json", "scenario.json", "menu.json"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }

  RunConfig v;
  v.command = "validate";
  v.feeder = (dir1 / "feeder.json").string();
  v.scenario = (dir1 / "scenario.json").string();
  v.menu = (dir1 / "menu.json").string();
  v.strict = true;
  const auto r = run(v);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["ok"] == true);

  cfg.nodes = 5;
  cfg.damaged = 5;
  CHECK(run(cfg).code == 2);
}

TEST_CASE("validate reports violations") {
  const auto dir = scratch("invalid");
  write_text_file((dir / "feeder.json").string(),
                  R"({"source": "a", "nodes": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
                      "edges": [{"id": "1", "from": "a", "to": "b"}, {"id": "2", "from": "b", "to": "a"}]})");
  RunConfig v;
  v.command = "validate";
  v.feeder = (dir / "feeder.json").string();
  const auto r = run(v);
  CHECK(r.code == 1);
  const auto doc = json::parse(r.out);
  CHECK(doc["ok"] == false);
  CHECK_FALSE(doc["violations"].empty());
}

TEST_CASE("the binary runs end to end") {
  const std::string cli = GRIDHARDEN_CLI;
  const auto dir = scratch("binary");
  const auto out = (dir / "plan.json").string();
  const std::string cmd = "\"" + cli + "\" harden --feeder \"" + data("worked_example/feeder.json") +
                          "\" --scenario \"" + data("worked_example/scenario.json") + "\" --menu \"" +
                          data("worked_example/menu.json") + "\" --budget 10 --out \"" + out + "\"";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(json::parse(slurp(out))["spend"] == 9.5);

  const std::string bad = "\"" + cli + "\" harden --feeder nowhere.json --scenario nowhere.json --menu nowhere.json"
                          " --budget 1 2> \"" + (dir / "err.json").string() + "\"";
  CHECK(std::system(bad.c_str()) != 0);
  CHECK(json::parse(slurp(dir / "err.json"))["error"] == "io-error");
}
