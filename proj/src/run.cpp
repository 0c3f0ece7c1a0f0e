#include "wreathlab/run.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "wreathlab/diagnostics.hpp"
#include "wreathlab/entropy.hpp"
#include "wreathlab/errors.hpp"
#include "wreathlab/magnus.hpp"

namespace wreathlab {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

bool want_csv(const RunConfig& c) { return c.format == "csv" || c.format == "both"; }
bool want_json(const RunConfig& c) { return c.format == "json" || c.format == "both"; }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("error writing {}", path.string()));
}

fs::path prepare_out(const RunConfig& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  write_file(dir / "config.json", normalized(c).dump(2) + "\n");
  return dir;
}

std::string summary_csv_row(const std::string& name, const Summary& s) {
  return fmt::format("{},{},{},{},{},{},{}\n", name, s.count, format_double(s.mean), format_double(s.se),
                     format_double(s.median), format_double(s.min), format_double(s.max));
}

BaseElement parse_site(const GroupHandle& base, const std::string& text) {
  if (text == "e") return base.identity();
  try {
    return base.parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(fmt::format("config field stabilization.sites: \"{}\": {}", text, e.what()));
  }
}

int simulate(const RunConfig& c, std::ostream& out) {
  auto mu = std::make_shared<const StepDistribution>(build_measure(c));
  const GroupHandle& base = mu->group().base();
  std::vector<BaseElement> sites;
  for (const auto& s : c.sites) sites.push_back(parse_site(base, s));
  const std::uint64_t n = c.n, horizon = c.n * c.t_ratio;
  std::uint64_t a = c.window_start, b = c.window_end;
  if (a == 0 && b == 0) {
    a = std::max<std::uint64_t>(1, n / 2);
    b = n;
  }
  const bool lengths = base.has_word_length();

  Ensemble ens{mu, horizon, c.paths, c.seed, c.threads};
  auto rows = map_paths(ens, [&](std::uint64_t, const SamplePath& p) {
    std::vector<std::pair<std::string, double>> stats;
    if (lengths) stats.emplace_back("speed", static_cast<double>(word_length(p.position(n))) / static_cast<double>(n));
    double returns = 0;
    for (std::uint64_t i = 1; i <= n; ++i)
      if (p.position(i).is_identity()) ++returns;
    stats.emplace_back("returns", returns);
    stats.emplace_back("lamp_support", static_cast<double>(p.lamps_at(n).size()));
    for (std::size_t k = 0; k < sites.size(); ++k) {
      stats.emplace_back(fmt::format("window_count[{}]", c.sites[k]), static_cast<double>(window_count(p, sites[k], a, b)));
      stats.emplace_back(fmt::format("post_n_modifications[{}]", c.sites[k]),
                         horizon > n ? static_cast<double>(window_count(p, sites[k], n + 1, horizon)) : 0.0);
    }
    return stats;
  });

  std::vector<std::string> names;
  if (!rows.empty())
    for (const auto& [name, v] : rows.front()) names.push_back(name);
  std::vector<Summary> summaries;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> vals;
    for (const auto& r : rows) vals.push_back(r[k].second);
    summaries.push_back(summarize(std::move(vals)));
  }

  fs::path dir = prepare_out(c);
  if (want_csv(c)) {
    std::string csv = "path,statistic,value\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto& [name, v] : rows[i]) csv += fmt::format("{},{},{}\n", i, name, format_double(v));
    write_file(dir / "paths.csv", csv);
    std::string sum = "statistic,count,mean,se,median,min,max\n";
    for (std::size_t k = 0; k < names.size(); ++k) sum += summary_csv_row(names[k], summaries[k]);
    write_file(dir / "summary.csv", sum);
  }
  if (want_json(c)) {
    json stats = json::object();
    for (std::size_t k = 0; k < names.size(); ++k) stats[names[k]] = to_json(summaries[k]);
    json doc = {{"group", mu->group().name()},
                {"measure", to_json(*mu)},
                {"n", n},
                {"T", horizon},
                {"T_ratio", c.t_ratio},
                {"paths", c.paths},
                {"seed", c.seed},
                {"window", {a, b}},
                {"statistics", stats}};
    write_file(dir / "summary.json", doc.dump(2) + "\n");
  }
  out << fmt::format("simulate: {} paths on {}, n = {}, T = {}; results in {}\n", c.paths, mu->group().name(), n, horizon,
                     dir.string());
  return kOk;
}

int entropy(const RunConfig& c, std::ostream& out) {
  StepDistribution mu = build_measure(c);
  EntropyOptions opts;
  opts.budget = c.budget;
  opts.allow_sampling = c.sampling;
  opts.samples = c.samples;
  opts.seed = c.seed;
  opts.threads = c.threads;
  EntropyReport rep = entropy_sequence(mu, c.entropy_n_max, opts);
  fs::path dir = prepare_out(c);
  if (want_csv(c)) {
    std::string csv = "n,H,H_over_n,increment,exact,support,samples,miller_madow\n";
    for (const auto& p : rep.points)
      csv += fmt::format("{},{},{},{},{},{},{},{}\n", p.n, format_double(p.entropy), format_double(p.ratio),
                         format_double(p.increment), p.exact ? 1 : 0, p.support, p.samples, format_double(p.correction));
    write_file(dir / "entropy.csv", csv);
  }
  if (want_json(c)) {
    json doc = to_json(rep);
    doc["group"] = mu.group().name();
    doc["measure"] = to_json(mu);
    write_file(dir / "entropy.json", doc.dump(2) + "\n");
  }
  const auto& last = rep.points.back();
  out << fmt::format("entropy: H(mu^*{}) = {} nats ({}), exact through n = {}; results in {}\n", last.n,
                     format_double(last.entropy), rep.estimator, rep.exact_through, dir.string());
  return kOk;
}

int diagnostics(const RunConfig& c, std::ostream& out, std::ostream& err) {
  StepDistribution mu = build_measure(c);
  DiagnosticsGrid grid{c.diag_ns, c.diag_t0, c.diag_r, c.diag_lambda, c.t_ratio};
  auto rows = diagnostics_report(mu, grid, c.paths, c.seed, c.threads, c.self_check);
  std::uint64_t passed = 0, failed = 0;
  for (const auto& r : rows) {
    passed += r.checks_passed;
    failed += r.checks_failed;
  }
  fs::path dir = prepare_out(c);
  if (want_csv(c)) {
    std::string csv = diagnostics_csv_header() + "\n";
    for (const auto& r : rows) csv += to_csv(r) + "\n";
    write_file(dir / "diagnostics.csv", csv);
  }
  if (want_json(c)) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    json doc = {{"group", mu.group().name()},
                {"measure", to_json(mu)},
                {"units", "nats"},
                {"rows", arr},
                {"self_check", {{"enabled", c.self_check}, {"passed", passed}, {"failed", failed}}}};
    write_file(dir / "diagnostics.json", doc.dump(2) + "\n");
  }
  out << fmt::format("diagnostics: {} rows; reconstruction self-checks passed {}, failed {}; results in {}\n", rows.size(),
                     passed, failed, dir.string());
  if (failed > 0) {
    err << fmt::format("error: {} reconstruction self-checks failed\n", failed);
    return kIntegrity;
  }
  return kOk;
}

std::vector<std::string> tokens(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

std::string as_word(const std::string& t) { return t == "e" ? std::string() : t; }

int wordproblem(const RunConfig& c, std::istream& in, std::ostream& out) {
  GroupHandle q = parse_group_spec(c.quotient);
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() > 2) throw ValidationError(fmt::format("expected one or two words per line, got \"{}\"", line));
    json rec;
    if (t.size() == 1) {
      Flow f = flow_of_word(as_word(t[0]), q);
      rec = {{"word", t[0]}, {"verdict", f.empty() ? "identity" : "nonidentity"}, {"flow", to_json(f)}};
    } else {
      Flow f = flow_of_word(as_word(t[0]), q), g = flow_of_word(as_word(t[1]), q);
      rec = {{"words", {t[0], t[1]}}, {"verdict", f == g ? "equal" : "unequal"}, {"flows", {to_json(f), to_json(g)}}};
    }
    rec["quotient"] = q.name();
    out << rec.dump() << "\n";
  }
  return kOk;
}

int embed(const RunConfig& c, std::istream& in, std::ostream& out) {
  GroupHandle q = parse_group_spec(c.quotient);
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens(line);
    if (t.empty()) continue;
    for (const auto& w : t) {
      WreathElement img = magnus_embed(as_word(w), q);
      json rec = {{"word", w}, {"group", magnus_group(q).name()}, {"image", to_json(img)}, {"text", to_text(img)}};
      out << rec.dump() << "\n";
    }
  }
  return kOk;
}

int report(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  for (const auto& path : c.report_inputs) {
    auto table = read_csv(path);
    if (table.empty()) throw ValidationError(fmt::format("{} is empty", path));
    if (header.empty()) header = table[0];
    if (table[0] != header) throw ValidationError(fmt::format("{} has a different header from {}", path, c.report_inputs[0]));
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (table[i].size() != header.size()) throw ValidationError(fmt::format("{} line {}: wrong field count", path, i + 1));
      std::vector<std::string> row{path};
      row.insert(row.end(), table[i].begin(), table[i].end());
      rows.push_back(std::move(row));
    }
  }
  fs::path dir = prepare_out(c);
  if (want_csv(c)) {
    std::string csv = "source";
    for (const auto& h : header) csv += "," + h;
    csv += "\n";
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) csv += (k ? "," : "") + r[k];
      csv += "\n";
    }
    write_file(dir / "report.csv", csv);
  }
  if (want_json(c)) {
    json cols = json::object();
    for (std::size_t k = 0; k < header.size(); ++k) {
      std::vector<double> vals;
      bool numeric = true;
      for (const auto& r : rows) {
        try {
          std::size_t used = 0;
          double v = std::stod(r[k + 1], &used);
          if (used != r[k + 1].size()) numeric = false;
          vals.push_back(v);
        } catch (const std::exception&) {
          numeric = false;
        }
        if (!numeric) break;
      }
      if (numeric && !vals.empty()) cols[header[k]] = to_json(summarize(vals));
    }
    json doc = {{"inputs", c.report_inputs}, {"rows", rows.size()}, {"columns", cols}};
    write_file(dir / "report.json", doc.dump(2) + "\n");
  }
  out << fmt::format("report: merged {} rows from {} files into {}\n", rows.size(), c.report_inputs.size(), dir.string());
  return kOk;
}

}  // namespace

std::string format_double(double x) {
  if (x == 0) x = 0;  // no negative zero
  return fmt::format("{:.9f}", x);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError(fmt::format("cannot open {}", path));
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(fields));
  }
  return out;
}

int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    if (cfg.command == "simulate") return simulate(cfg, out);
    if (cfg.command == "entropy") return entropy(cfg, out);
    if (cfg.command == "diagnostics") return diagnostics(cfg, out, err);
    if (cfg.command == "wordproblem") return wordproblem(cfg, in, out);
    if (cfg.command == "embed") return embed(cfg, in, out);
    if (cfg.command == "report") return report(cfg, out);
    throw ValidationError(fmt::format("unknown command \"{}\"", cfg.command));
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const IntegrityError& e) {
    err << "integrity error: " << e.what() << "\n";
    return kIntegrity;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const UsageError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace wreathlab
