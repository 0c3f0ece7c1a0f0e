#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wreathlab/config.hpp"
#include "wreathlab/errors.hpp"
#include "wreathlab/run.hpp"

using namespace wreathlab;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("wreathlab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_with(const RunConfig& cfg, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run(cfg, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing and field-level errors") {
    auto c = parse_config(json::parse(R"({"command": "simulate", "group": {"lamp": "Z/3", "base": "Z^2"},
                                          "walk": {"n": 50, "paths": 4}, "threads": 2})"));
    CHECK(c.lamp == "Z/3");
    CHECK(c.n == 50);
    CHECK(c.paths == 4);
    CHECK(c.threads == 2);
    CHECK(c.seed == 1);

    auto message = [](const char* text) {
      try {
        parse_config(json::parse(text));
      } catch (const ValidationError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message(R"({"walk": {"n": -5}})").find("walk.n") != std::string::npos);
    CHECK(message(R"({"walk": {"steps": 5}})").find("walk.steps") != std::string::npos);
    CHECK(message(R"({"colour": 1})").find("colour") != std::string::npos);
    CHECK(message(R"({"measure": {"atoms": [{"element": "| 1"}]}})").find("measure.atoms[0]") != std::string::npos);
    CHECK(message(R"({"stabilization": {"window": [1]}})").find("stabilization.window") != std::string::npos);
  }

  TEST_CASE("validation") {
    RunConfig c;
    c.command = "simulate";
    c.paths = 0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c.paths = 10;
    CHECK_NOTHROW(validate(c));
    c.window_start = 5;
    c.window_end = c.n * c.t_ratio + 1;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = RunConfig{};
    c.command = "launch";
    CHECK_THROWS_AS(validate(c), ValidationError);
    c.command = "entropy";
    c.base = "Q";
    CHECK_THROWS_AS(validate(c), ValidationError);
    c.base = "Z";
    c.solvable = "S_{2,2}";
    CHECK_THROWS_AS(validate(c), ValidationError);
    c.measure.name = "srw";
    CHECK_NOTHROW(validate(c));
    c.format = "xml";
    CHECK_THROWS_AS(validate(c), ValidationError);
  }

  TEST_CASE("normalized config round trip") {
    auto c = parse_config(json::parse(R"({"command": "diagnostics", "diagnostics": {"t0": [2, 5]},
                                          "measure": {"name": "custom", "atoms": [{"element": "| 1", "p": 1.0}]}})"));
    auto n1 = normalized(c);
    auto n2 = normalized(parse_config(n1));
    CHECK(n1 == n2);
    CHECK(n1["diagnostics"]["t0"] == json::array({2, 5}));
    CHECK(n1["walk"]["seed"] == 1);
    CHECK_FALSE(n1.contains("threads"));
  }

  TEST_CASE("paths = 0 exits with the validation code") {
    RunConfig c;
    c.command = "simulate";
    c.paths = 0;
    auto r = run_with(c);
    CHECK(r.code == kValidation);
    CHECK(r.err.find("walk.paths") != std::string::npos);
  }

  TEST_CASE("budget overflow exits with the resource code") {
    RunConfig c;
    c.command = "entropy";
    c.entropy_n_max = 12;
    c.budget = 1000;
    c.out_dir = scratch("budget").string();
    CHECK(run_with(c).code == kResource);
  }

  TEST_CASE("wordproblem") {
    RunConfig c;
    c.command = "wordproblem";
    c.quotient = "Z^2";
    auto r = run_with(c, "aBAb\nab ba\n# comment\n\nabAB abABbaBAabAB\n");
    REQUIRE(r.code == kOk);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<json> recs;
    while (std::getline(lines, line)) recs.push_back(json::parse(line));
    REQUIRE(recs.size() == 3);
    CHECK(recs[0]["verdict"] == "nonidentity");
    CHECK(recs[0]["flow"].size() == 4);
    CHECK(recs[1]["verdict"] == "unequal");
    CHECK(recs[2]["verdict"] == "equal");
    CHECK(run_with(c, "abz\n").code == kValidation);
    CHECK(run_with(c, "a b c\n").code == kValidation);
  }

  TEST_CASE("embed") {
    RunConfig c;
    c.command = "embed";
    c.quotient = "Z^2";
    auto r = run_with(c, "a\n");
    REQUIRE(r.code == kOk);
    auto rec = json::parse(r.out);
    CHECK(rec["text"] == "delta(0,0)=1,0 | 1,0");
    CHECK(rec["image"]["base"] == "1,0");
  }

  TEST_CASE("simulate writes reproducible outputs") {
    RunConfig c;
    c.command = "simulate";
    c.base = "Z^3";
    c.n = 100;
    c.paths = 8;
    c.sites = {"e", "1,0,0"};
    auto d1 = scratch("sim1"), d2 = scratch("sim2");
    c.out_dir = d1.string();
    REQUIRE(run_with(c).code == kOk);
    c.out_dir = d2.string();
    c.threads = 3;
    REQUIRE(run_with(c).code == kOk);
    for (const char* f : {"paths.csv", "summary.csv", "summary.json", "config.json"})
      CHECK(slurp(d1 / f) == slurp(d2 / f));
    auto summary = json::parse(slurp(d1 / "summary.json"));
    CHECK(summary["statistics"].contains("window_count[1,0,0]"));
    CHECK(summary["paths"] == 8);
    c.format = "json";
    auto d3 = scratch("sim3");
    c.out_dir = d3.string();
    REQUIRE(run_with(c).code == kOk);
    CHECK_FALSE(fs::exists(d3 / "paths.csv"));
    CHECK(fs::exists(d3 / "summary.json"));
  }

  TEST_CASE("entropy, diagnostics and report") {
    RunConfig c;
    c.command = "entropy";
    c.entropy_n_max = 5;
    auto d = scratch("ent");
    c.out_dir = d.string();
    REQUIRE(run_with(c).code == kOk);
    auto csv = read_csv((d / "entropy.csv").string());
    CHECK(csv.size() == 6);
    CHECK(csv[0][0] == "n");

    c.command = "diagnostics";
    c.base = "Z^3";
    c.paths = 5;
    c.diag_ns = {40};
    auto dd = scratch("diag");
    c.out_dir = dd.string();
    REQUIRE(run_with(c).code == kOk);
    CHECK(json::parse(slurp(dd / "diagnostics.json"))["self_check"]["failed"] == 0);

    c.command = "report";
    c.report_inputs = {(dd / "diagnostics.csv").string(), (dd / "diagnostics.csv").string()};
    auto dr = scratch("report");
    c.out_dir = dr.string();
    REQUIRE(run_with(c).code == kOk);
    auto merged = read_csv((dr / "report.csv").string());
    CHECK(merged.size() == 3);
    CHECK(merged[0][0] == "source");
    c.report_inputs = {(dd / "diagnostics.csv").string(), (d / "entropy.csv").string()};
    CHECK(run_with(c).code == kValidation);
  }

  TEST_CASE("number formatting") {
    CHECK(format_double(0.5) == "0.500000000");
    CHECK(format_double(-0.0) == "0.000000000");
  }
}
