// wreathlab: batch front end.
//
//   wreathlab simulate    --config run.json --out out/
//   wreathlab entropy     --config run.json --format csv
//   wreathlab diagnostics --config run.json --threads 4
//   echo "aBAb" | wreathlab wordproblem --quotient Z^2
//   echo "a" | wreathlab embed --quotient Z^2
//   wreathlab report      --config merge.json
//
// Element text: Z^d elements are comma-separated integers ("1,-2"), Z/m
// elements a residue, F_d words letters a, b, c, ... with uppercase for
// inverses ("aBAb"), "e" the identity. Wreath elements are written
// "delta(site)=value ... | base", e.g. "delta(0)=1 | 1" in Z/2 wr Z.
// Groups: "Z^d", "Z/m", "F_d", "S_{d,k}", "1".

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "wreathlab/config.hpp"
#include "wreathlab/errors.hpp"
#include "wreathlab/run.hpp"

int main(int argc, char** argv) {
  using namespace wreathlab;
  CLI::App app{"Wreath products, free solvable groups and random walks on them"};
  std::string command, config_path, out_dir, format, quotient;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  app.add_option("command", command, "simulate | entropy | diagnostics | wordproblem | embed | report")->required();
  app.add_option("--config", config_path, "JSON run configuration (schema in README.md)");
  app.add_option("--seed", seed, "override walk.seed");
  app.add_option("--out", out_dir, "override output.dir");
  app.add_option("--threads", threads, "worker threads for ensembles");
  app.add_option("--format", format, "csv, json or both");
  app.add_option("--quotient", quotient, "override words.quotient (wordproblem, embed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  }
  cfg.command = command;
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads) cfg.threads = *threads;
  if (!format.empty()) cfg.format = format;
  if (!quotient.empty()) cfg.quotient = quotient;
  return run(cfg, std::cin, std::cout, std::cerr);
}
