#pragma once

// Run configuration: a JSON document with nested sections. Unknown keys and
// ill-typed values are rejected with the offending field path.
//
// {
//   "command": "simulate",
//   "group": {"lamp": "Z/2", "base": "Z^3", "solvable": ""},
//   "measure": {"name": "sws", "atoms": [{"element": "delta(0)=1 | 1", "p": 0.5}, ...]},
//   "walk": {"n": 1000, "T_ratio": 10, "paths": 100, "seed": 1},
//   "stabilization": {"sites": ["e"], "window": [0, 0]},
//   "entropy": {"n_max": 10, "budget": 5000000, "sampling": false, "samples": 10000},
//   "diagnostics": {"n": [100, 400], "t0": [5], "r": [1], "lambda": [1], "self_check": true},
//   "words": {"quotient": "Z^2"},
//   "report": {"inputs": ["a.csv", "b.csv"]},
//   "output": {"dir": "out", "format": "both"},
//   "threads": 1
// }
//
// group.solvable = "S_{d,k}" (k >= 2) walks on S_{d,k} through its Magnus
// image and replaces lamp/base. A window of [0, 0] means [n/2, n].

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wreathlab/walks.hpp"

namespace wreathlab {

struct RunConfig {
  std::string command;

  std::string lamp = "Z/2";
  std::string base = "Z";
  std::string solvable;

  MeasureSpec measure;

  std::uint64_t n = 1000;
  std::uint64_t t_ratio = 10;
  std::uint64_t paths = 100;
  std::uint64_t seed = 1;

  std::vector<std::string> sites{"e"};
  std::uint64_t window_start = 0;
  std::uint64_t window_end = 0;

  std::uint64_t entropy_n_max = 10;
  std::uint64_t budget = 5'000'000;
  bool sampling = false;
  std::uint64_t samples = 10000;

  std::vector<std::uint64_t> diag_ns{100, 400};
  std::vector<std::uint64_t> diag_t0{5};
  std::vector<std::int64_t> diag_r{1};
  std::vector<std::int64_t> diag_lambda{1};
  bool self_check = true;

  std::string quotient = "Z^2";

  std::vector<std::string> report_inputs;

  std::string out_dir = "out";
  std::string format = "both";
  unsigned threads = 1;
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"simulate", "entropy", "diagnostics", "wordproblem", "embed", "report"};
  return c;
}

// Throws ValidationError naming the field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
// Checks ranges and cross-field constraints for cfg.command.
void validate(const RunConfig& cfg);

// Canonical form with every default explicit. Execution-only settings
// (output directory, thread count) are left out so that results do not
// depend on them.
nlohmann::json normalized(const RunConfig& cfg);

// Measure on the configured group.
StepDistribution build_measure(const RunConfig& cfg);

}  // namespace wreathlab
