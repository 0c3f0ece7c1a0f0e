#include "wreathlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "wreathlab/errors.hpp"

namespace wreathlab {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(fmt::format("config field {}: {}", field, what));
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
}

std::uint64_t get_uint(const json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    fail(field, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::int64_t get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) fail(field, "out of range");
  return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "expected true or false");
  return v.get<bool>();
}

template <class F>
auto get_list(const json& v, const std::string& field, F elem) {
  if (!v.is_array()) fail(field, "expected an array");
  std::vector<decltype(elem(v, field))> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(elem(v[i], fmt::format("{}[{}]", field, i)));
  return out;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  only_keys(doc, "", {"command", "group", "measure", "walk", "stabilization", "entropy", "diagnostics", "words", "report",
                      "output", "threads"});
  if (doc.contains("command")) c.command = get_string(doc["command"], "command");
  if (doc.contains("group")) {
    const auto& g = doc["group"];
    only_keys(g, "group", {"lamp", "base", "solvable"});
    if (g.contains("lamp")) c.lamp = get_string(g["lamp"], "group.lamp");
    if (g.contains("base")) c.base = get_string(g["base"], "group.base");
    if (g.contains("solvable")) c.solvable = get_string(g["solvable"], "group.solvable");
  }
  if (doc.contains("measure")) {
    const auto& m = doc["measure"];
    only_keys(m, "measure", {"name", "atoms"});
    if (m.contains("name")) c.measure.name = get_string(m["name"], "measure.name");
    if (m.contains("atoms")) {
      c.measure.custom_atoms = get_list(m["atoms"], "measure.atoms", [](const json& a, const std::string& f) {
        only_keys(a, f, {"element", "p"});
        if (!a.contains("element") || !a.contains("p")) fail(f, "needs element and p");
        if (!a["p"].is_number()) fail(f + ".p", "expected a number");
        return std::pair<std::string, double>{get_string(a["element"], f + ".element"), a["p"].get<double>()};
      });
    }
  }
  if (doc.contains("walk")) {
    const auto& w = doc["walk"];
    only_keys(w, "walk", {"n", "T_ratio", "paths", "seed"});
    if (w.contains("n")) c.n = get_uint(w["n"], "walk.n");
    if (w.contains("T_ratio")) c.t_ratio = get_uint(w["T_ratio"], "walk.T_ratio");
    if (w.contains("paths")) c.paths = get_uint(w["paths"], "walk.paths");
    if (w.contains("seed")) c.seed = get_uint(w["seed"], "walk.seed");
  }
  if (doc.contains("stabilization")) {
    const auto& s = doc["stabilization"];
    only_keys(s, "stabilization", {"sites", "window"});
    if (s.contains("sites")) c.sites = get_list(s["sites"], "stabilization.sites", get_string);
    if (s.contains("window")) {
      auto w = get_list(s["window"], "stabilization.window", get_uint);
      if (w.size() != 2) fail("stabilization.window", "expected [start, end]");
      c.window_start = w[0];
      c.window_end = w[1];
    }
  }
  if (doc.contains("entropy")) {
    const auto& e = doc["entropy"];
    only_keys(e, "entropy", {"n_max", "budget", "sampling", "samples"});
    if (e.contains("n_max")) c.entropy_n_max = get_uint(e["n_max"], "entropy.n_max");
    if (e.contains("budget")) c.budget = get_uint(e["budget"], "entropy.budget");
    if (e.contains("sampling")) c.sampling = get_bool(e["sampling"], "entropy.sampling");
    if (e.contains("samples")) c.samples = get_uint(e["samples"], "entropy.samples");
  }
  if (doc.contains("diagnostics")) {
    const auto& d = doc["diagnostics"];
    only_keys(d, "diagnostics", {"n", "t0", "r", "lambda", "self_check"});
    if (d.contains("n")) c.diag_ns = get_list(d["n"], "diagnostics.n", get_uint);
    if (d.contains("t0")) c.diag_t0 = get_list(d["t0"], "diagnostics.t0", get_uint);
    if (d.contains("r")) c.diag_r = get_list(d["r"], "diagnostics.r", get_int);
    if (d.contains("lambda")) c.diag_lambda = get_list(d["lambda"], "diagnostics.lambda", get_int);
    if (d.contains("self_check")) c.self_check = get_bool(d["self_check"], "diagnostics.self_check");
  }
  if (doc.contains("words")) {
    const auto& w = doc["words"];
    only_keys(w, "words", {"quotient"});
    if (w.contains("quotient")) c.quotient = get_string(w["quotient"], "words.quotient");
  }
  if (doc.contains("report")) {
    const auto& r = doc["report"];
    only_keys(r, "report", {"inputs"});
    if (r.contains("inputs")) c.report_inputs = get_list(r["inputs"], "report.inputs", get_string);
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    only_keys(o, "output", {"dir", "format"});
    if (o.contains("dir")) c.out_dir = get_string(o["dir"], "output.dir");
    if (o.contains("format")) c.format = get_string(o["format"], "output.format");
  }
  if (doc.contains("threads")) {
    auto t = get_uint(doc["threads"], "threads");
    if (t > 1024) fail("threads", "at most 1024");
    c.threads = static_cast<unsigned>(t);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config file {}", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("config file {} is not valid JSON: {}", path, e.what()));
  }
  return parse_config(doc);
}

void validate(const RunConfig& c) {
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    fail("command", fmt::format("unknown command \"{}\"", c.command));
  if (c.format != "csv" && c.format != "json" && c.format != "both") fail("output.format", "expected csv, json or both");
  if (c.threads < 1) fail("threads", "must be at least 1");
  auto check_group = [](const std::string& spec, const std::string& field) {
    try {
      parse_group_spec(spec);
    } catch (const std::exception& e) {
      fail(field, e.what());
    }
  };
  const bool walks = c.command == "simulate" || c.command == "entropy" || c.command == "diagnostics";
  if (walks) {
    if (c.solvable.empty()) {
      check_group(c.lamp, "group.lamp");
      check_group(c.base, "group.base");
    } else {
      check_group(c.solvable, "group.solvable");
      auto g = parse_group_spec(c.solvable);
      if (g.family() != Family::Solvable) fail("group.solvable", "expected S_{d,k} with k >= 2");
      if (c.measure.name != "srw") fail("measure.name", "walks on S_{d,k} support only srw");
    }
  }
  if (c.command == "simulate") {
    if (c.paths < 1) fail("walk.paths", "must be at least 1");
    if (c.n < 1) fail("walk.n", "must be at least 1");
    if (c.t_ratio < 1) fail("walk.T_ratio", "must be at least 1");
    if (c.sites.empty()) fail("stabilization.sites", "needs at least one site");
    if (c.window_start != 0 || c.window_end != 0) {
      if (c.window_start < 1 || c.window_start > c.window_end) fail("stabilization.window", "expected 1 <= start <= end");
      if (c.window_end > c.n * c.t_ratio) fail("stabilization.window", "extends beyond the horizon T");
    }
  }
  if (c.command == "entropy") {
    if (c.entropy_n_max < 1) fail("entropy.n_max", "must be at least 1");
    if (c.budget < 1) fail("entropy.budget", "must be at least 1");
    if (c.sampling && c.samples < 1) fail("entropy.samples", "must be at least 1");
  }
  if (c.command == "diagnostics") {
    if (c.paths < 1) fail("walk.paths", "must be at least 1");
    if (c.t_ratio < 1) fail("walk.T_ratio", "must be at least 1");
    if (c.diag_ns.empty() || c.diag_t0.empty() || c.diag_r.empty() || c.diag_lambda.empty())
      fail("diagnostics", "n, t0, r and lambda need at least one value each");
    for (auto v : c.diag_ns)
      if (v < 1) fail("diagnostics.n", "values must be at least 1");
    for (auto v : c.diag_t0)
      if (v < 1) fail("diagnostics.t0", "values must be at least 1");
    for (auto v : c.diag_r)
      if (v < 0) fail("diagnostics.r", "values must be nonnegative");
    for (auto v : c.diag_lambda)
      if (v < 0) fail("diagnostics.lambda", "values must be nonnegative");
  }
  if (c.command == "wordproblem" || c.command == "embed") check_group(c.quotient, "words.quotient");
  if (c.command == "report" && c.report_inputs.empty()) fail("report.inputs", "needs at least one CSV file");
}

json normalized(const RunConfig& c) {
  json atoms = json::array();
  for (const auto& [e, p] : c.measure.custom_atoms) atoms.push_back({{"element", e}, {"p", p}});
  return {{"command", c.command},
          {"group", {{"lamp", c.lamp}, {"base", c.base}, {"solvable", c.solvable}}},
          {"measure", {{"name", c.measure.name}, {"atoms", atoms}}},
          {"walk", {{"n", c.n}, {"T_ratio", c.t_ratio}, {"paths", c.paths}, {"seed", c.seed}}},
          {"stabilization", {{"sites", c.sites}, {"window", {c.window_start, c.window_end}}}},
          {"entropy", {{"n_max", c.entropy_n_max}, {"budget", c.budget}, {"sampling", c.sampling}, {"samples", c.samples}}},
          {"diagnostics",
           {{"n", c.diag_ns}, {"t0", c.diag_t0}, {"r", c.diag_r}, {"lambda", c.diag_lambda}, {"self_check", c.self_check}}},
          {"words", {{"quotient", c.quotient}}},
          {"report", {{"inputs", c.report_inputs}}},
          {"output", {{"format", c.format}}}};
}

StepDistribution build_measure(const RunConfig& c) {
  if (!c.solvable.empty()) {
    GroupHandle g = parse_group_spec(c.solvable);
    return solvable_srw(g.rank(), g.level());
  }
  WreathGroup w(parse_group_spec(c.lamp), parse_group_spec(c.base));
  return standard_measure(w, c.measure);
}

}  // namespace wreathlab
