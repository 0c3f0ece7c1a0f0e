#include "wreathlab/diagnostics.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "wreathlab/entropy.hpp"
#include "wreathlab/errors.hpp"

namespace wreathlab {

namespace {

// d(center, b) <= radius in the word metric of the base.
bool within(const BaseElement& center, const BaseElement& b, std::int64_t radius) {
  if (center.family() == Family::IntVector && b.family() == Family::IntVector) {
    const auto& c = center.as_vector().coords;
    const auto& x = b.as_vector().coords;
    std::int64_t d = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      d += x[i] > c[i] ? x[i] - c[i] : c[i] - x[i];
      if (d > radius) return false;
    }
    return true;
  }
  return word_length(multiply(inverse(center), b)) <= radius;
}

bool lamp_in_l(const BaseElement& a, const GroupHandle& lamp, std::int64_t lambda) {
  if (lamp.is_finite()) return true;
  return word_length(a) <= lambda;
}

std::uint64_t interval_count(std::uint64_t n, std::uint64_t t0) { return n / t0; }

void check_n(const SamplePath& path, std::uint64_t n) {
  if (n > path.horizon()) throw UsageError(fmt::format("n = {} exceeds the path horizon {}", n, path.horizon()));
}

std::vector<bool> atom_goodness(const SamplePath& path, const GoodnessParams& params) {
  std::vector<bool> good;
  for (const auto& g : path.atom_table()) good.push_back(is_good(g, params, path.group()));
  return good;
}

void check_consistent(const CoarseTrajectory& p, const BadIncrementRecord& beta) {
  if (p.t0 != beta.t0 || p.n != beta.n || p.intervals() != beta.intervals.size())
    throw IntegrityError("coarse trajectory and bad increments come from different parameters");
  if (beta.final_increments.size() != p.n - p.intervals() * p.t0)
    throw IntegrityError("final interval has the wrong number of increments");
}

struct Event {
  std::uint64_t time;
  BaseElement site;
  BaseElement value;
};

// Replays the bad intervals from their coarse starting points and reports
// every lamp modification; verifies each interval ends at the next coarse point.
std::vector<Event> replay_bad(const CoarseTrajectory& p, const BadIncrementRecord& beta) {
  std::vector<Event> events;
  for (std::uint64_t j = 1; j <= p.intervals(); ++j) {
    const auto& rec = beta.intervals[j - 1];
    if (!rec) continue;
    if (rec->size() != p.t0) throw IntegrityError(fmt::format("bad interval {} does not hold {} increments", j, p.t0));
    BaseElement x = p.at(j - 1);
    std::uint64_t time = (j - 1) * p.t0;
    for (const auto& g : *rec) {
      ++time;
      for (const auto& [s, a] : g.lamps.entries()) events.push_back({time, multiply(x, s), a});
      x = multiply(x, g.base);
    }
    if (!(x == p.at(j)))
      throw IntegrityError(fmt::format("bad interval {} ends at {} instead of {}", j, to_text(x), to_text(p.at(j))));
  }
  return events;
}

LampConfig accumulate(std::vector<Event> events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  std::vector<LampConfig::Entry> entries;
  entries.reserve(events.size());
  for (auto& e : events) entries.emplace_back(std::move(e.site), std::move(e.value));
  return LampConfig::from_entries(std::move(entries));
}

}  // namespace

void validate(const GoodnessParams& params) {
  if (params.t0 < 1) throw ValidationError("t0 must be at least 1");
  if (params.r < 0) throw ValidationError("r must be nonnegative");
  if (params.lambda < 0) throw ValidationError("lambda must be nonnegative");
}

CoarseTrajectory coarse_trajectory(const SamplePath& path, std::uint64_t t0, std::uint64_t n) {
  if (t0 < 1) throw ValidationError("t0 must be at least 1");
  check_n(path, n);
  CoarseTrajectory p;
  p.t0 = t0;
  p.n = n;
  p.origin = path.position(0);
  for (std::uint64_t j = 1; j <= interval_count(n, t0); ++j) p.points.push_back(path.position(j * t0));
  return p;
}

bool is_good(const WreathElement& g, const GoodnessParams& params, const WreathGroup& group) {
  if (!ball_membership(g.base, params.r)) return false;
  for (const auto& [site, value] : g.lamps.entries()) {
    if (!ball_membership(site, params.r)) return false;
    if (!lamp_in_l(value, group.lamp(), params.lambda)) return false;
  }
  return true;
}

std::vector<bool> classify_intervals(const SamplePath& path, std::uint64_t n, const GoodnessParams& params) {
  validate(params);
  check_n(path, n);
  const auto good = atom_goodness(path, params);
  const auto& inc = path.increment_indices();
  std::vector<bool> out;
  for (std::uint64_t j = 1; j <= interval_count(n, params.t0); ++j) {
    bool ok = true;
    for (std::uint64_t i = (j - 1) * params.t0; i < j * params.t0 && ok; ++i) ok = good[inc[i]];
    out.push_back(ok);
  }
  return out;
}

std::uint64_t BadIncrementRecord::bad_count() const {
  return static_cast<std::uint64_t>(std::count_if(intervals.begin(), intervals.end(), [](const auto& x) { return x.has_value(); }));
}

BadIncrementRecord bad_increments(const SamplePath& path, std::uint64_t n, const GoodnessParams& params) {
  const auto flags = classify_intervals(path, n, params);
  BadIncrementRecord beta;
  beta.t0 = params.t0;
  beta.n = n;
  for (std::uint64_t j = 1; j <= flags.size(); ++j) {
    if (flags[j - 1]) {
      beta.intervals.emplace_back(std::nullopt);
      continue;
    }
    std::vector<WreathElement> list;
    for (std::uint64_t i = (j - 1) * params.t0 + 1; i <= j * params.t0; ++i) list.push_back(path.increment(i));
    beta.intervals.emplace_back(std::move(list));
  }
  for (std::uint64_t i = flags.size() * params.t0 + 1; i <= n; ++i) beta.final_increments.push_back(path.increment(i));
  return beta;
}

bool in_coarse_neighborhood(const BaseElement& b, const CoarseTrajectory& p, const GoodnessParams& params) {
  const std::int64_t radius = params.r * static_cast<std::int64_t>(p.t0);
  for (std::uint64_t j = 0; j < p.intervals(); ++j)
    if (within(p.at(j), b, radius)) return true;
  return false;
}

LampConfig reconstruct_outside(const CoarseTrajectory& p, const BadIncrementRecord& beta, const GoodnessParams& params,
                               const WreathGroup& group) {
  (void)group;
  check_consistent(p, beta);
  auto events = replay_bad(p, beta);
  std::erase_if(events, [&](const Event& e) { return in_coarse_neighborhood(e.site, p, params); });
  return accumulate(std::move(events));
}

bool UnstableReport::contains_unstable(const BaseElement& b) const {
  return std::binary_search(unstable.begin(), unstable.end(), b);
}

std::optional<BaseElement> UnstableReport::delta(const BaseElement& b, std::uint64_t i, const BaseElement& lamp_identity) const {
  if (!contains_unstable(b)) throw UsageError(fmt::format("{} is not an unstable point", to_text(b)));
  if (i < 1 || i > s) throw UsageError(fmt::format("time {} outside 1..{}", i, s));
  const std::uint64_t j = (i - 1) / t0 + 1;
  if (std::binary_search(bad_intervals.begin(), bad_intervals.end(), j)) return std::nullopt;
  for (const auto& inc : increments)
    if (inc.time == i && inc.site == b) return inc.value;
  return lamp_identity;
}

std::vector<BaseElement> unstable_points(const SamplePath& path, std::uint64_t n, const GoodnessParams& params,
                                         const LampConfig& proxy) {
  validate(params);
  if (path.horizon() < n) throw UsageError(fmt::format("proxy horizon {} is shorter than n = {}", path.horizon(), n));
  const CoarseTrajectory p = coarse_trajectory(path, params.t0, n);
  const std::uint64_t s = p.intervals() * params.t0;
  const LampConfig phi_s = path.lamps_at(s);
  const BaseElement& e = path.group().lamp().identity();
  std::vector<BaseElement> candidates = phi_s.support();
  for (const auto& b : proxy.support()) candidates.push_back(b);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<BaseElement> out;
  for (const auto& b : candidates)
    if (!(phi_s.value_or(b, e) == proxy.value_or(b, e)) && in_coarse_neighborhood(b, p, params)) out.push_back(b);
  return out;
}

std::vector<std::uint64_t> visit_times(const SamplePath& path, std::uint64_t n, const GoodnessParams& params,
                                       const std::vector<BaseElement>& unstable) {
  const auto flags = classify_intervals(path, n, params);
  const CoarseTrajectory p = coarse_trajectory(path, params.t0, n);
  const std::int64_t radius = params.r * static_cast<std::int64_t>(params.t0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 1; j <= flags.size(); ++j) {
    if (!flags[j - 1]) continue;
    const BaseElement& x = p.at(j - 1);
    if (std::any_of(unstable.begin(), unstable.end(), [&](const BaseElement& u) { return within(x, u, radius); }))
      out.push_back(j);
  }
  return out;
}

UnstableReport unstable_report(const SamplePath& path, std::uint64_t n, const GoodnessParams& params) {
  const LampConfig& proxy = limit_config_proxy(path, n);
  UnstableReport rep;
  rep.t0 = params.t0;
  rep.s = interval_count(n, params.t0) * params.t0;
  rep.horizon = path.horizon();
  rep.unstable = unstable_points(path, n, params, proxy);
  rep.visits = visit_times(path, n, params, rep.unstable);
  const auto flags = classify_intervals(path, n, params);
  for (std::uint64_t j = 1; j <= flags.size(); ++j)
    if (!flags[j - 1]) rep.bad_intervals.push_back(j);
  for (const auto& c : path.log()) {
    if (c.time > rep.s) break;
    if (!flags[(c.time - 1) / params.t0]) continue;
    if (!rep.contains_unstable(c.site)) continue;
    rep.increments.push_back({c.site, c.time, multiply(inverse(c.old_value), c.new_value)});
  }
  return rep;
}

LampConfig reconstruct_inside(const CoarseTrajectory& p, const BadIncrementRecord& beta, const UnstableReport& report,
                              const LampConfig& proxy, const GoodnessParams& params, const WreathGroup& group) {
  (void)group;
  check_consistent(p, beta);
  if (report.s != p.intervals() * p.t0 || report.t0 != p.t0)
    throw IntegrityError("unstable report does not match the coarse trajectory");
  auto events = replay_bad(p, beta);
  std::erase_if(events, [&](const Event& e) { return !report.contains_unstable(e.site); });
  for (const auto& inc : report.increments) {
    const std::uint64_t j = (inc.time - 1) / p.t0 + 1;
    if (beta.is_bad(j)) throw IntegrityError(fmt::format("unstable increment at time {} lies in a bad interval", inc.time));
    events.push_back({inc.time, inc.site, inc.value});
  }
  LampConfig moving = accumulate(std::move(events));
  std::vector<LampConfig::Entry> entries = moving.entries();
  for (const auto& [site, value] : proxy.entries())
    if (!report.contains_unstable(site) && in_coarse_neighborhood(site, p, params)) entries.emplace_back(site, value);
  return LampConfig::from_entries(std::move(entries));
}

WreathElement reconstruct_state(const CoarseTrajectory& p, const BadIncrementRecord& beta, const LampConfig& phi_s,
                                const WreathGroup& group) {
  check_consistent(p, beta);
  (void)group;
  WreathElement w{phi_s, p.at(p.intervals())};
  for (const auto& g : beta.final_increments) w = wreath_multiply(w, g);
  return w;
}

DiagnosticsBundle diagnose(const SamplePath& path, std::uint64_t n, const GoodnessParams& params) {
  validate(params);
  return {coarse_trajectory(path, params.t0, n), bad_increments(path, n, params), unstable_report(path, n, params)};
}

ReconstructionCheck check_reconstruction(const SamplePath& path, std::uint64_t n, const GoodnessParams& params) {
  const DiagnosticsBundle d = diagnose(path, n, params);
  const LampConfig phi_s = path.lamps_at(d.unstable.s);
  auto inside = [&](const BaseElement& b) { return in_coarse_neighborhood(b, d.trajectory, params); };
  ReconstructionCheck r;
  try {
    r.outside = reconstruct_outside(d.trajectory, d.bad, params, path.group()) ==
                phi_s.filtered([&](const BaseElement& b) { return !inside(b); });
  } catch (const IntegrityError&) {
  }
  try {
    r.inside = reconstruct_inside(d.trajectory, d.bad, d.unstable, path.final_lamps(), params, path.group()) ==
               phi_s.filtered(inside);
  } catch (const IntegrityError&) {
  }
  try {
    r.state = reconstruct_state(d.trajectory, d.bad, phi_s, path.group()) == path.prefix(n);
  } catch (const IntegrityError&) {
  }
  return r;
}

namespace {

struct PathStats {
  double u = 0, v = 0;
  std::uint64_t bad = 0, intervals = 0;
  std::string u_label, v_label;
  bool ok = true;
};

std::string join_sites(const std::vector<BaseElement>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ';';
    out += to_text(x);
  }
  return out;
}

std::string join_ints(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (auto x : xs) {
    if (!out.empty()) out += ';';
    out += std::to_string(x);
  }
  return out;
}

}  // namespace

std::vector<DiagnosticsRow> diagnostics_report(const StepDistribution& mu, const DiagnosticsGrid& grid,
                                               std::uint64_t paths, std::uint64_t seed, unsigned threads,
                                               bool self_check) {
  if (paths < 1) throw ValidationError("diagnostics need at least one path");
  if (grid.t_ratio < 1) throw ValidationError("T_ratio must be at least 1");
  std::vector<GoodnessParams> combos;
  for (auto t0 : grid.t0s)
    for (auto r : grid.rs)
      for (auto lambda : grid.lambdas) {
        GoodnessParams gp{t0, r, lambda};
        validate(gp);
        combos.push_back(gp);
      }
  auto shared = std::make_shared<const StepDistribution>(mu);
  std::vector<DiagnosticsRow> rows;
  for (auto n : grid.ns) {
    if (n < 1) throw ValidationError("n must be at least 1");
    Ensemble ens{shared, n * grid.t_ratio, paths, seed, threads};
    auto per_path = map_paths(ens, [&](std::uint64_t, const SamplePath& path) {
      std::vector<PathStats> out;
      for (const auto& gp : combos) {
        const DiagnosticsBundle d = diagnose(path, n, gp);
        PathStats st;
        st.u = static_cast<double>(d.unstable.unstable.size()) / static_cast<double>(n);
        st.v = static_cast<double>(d.unstable.visits.size()) / static_cast<double>(n);
        st.bad = d.bad.bad_count();
        st.intervals = d.bad.intervals.size();
        st.u_label = join_sites(d.unstable.unstable);
        st.v_label = join_ints(d.unstable.visits);
        if (self_check) st.ok = check_reconstruction(path, n, gp).all();
        out.push_back(std::move(st));
      }
      return out;
    });
    for (std::size_t c = 0; c < combos.size(); ++c) {
      DiagnosticsRow row;
      row.n = n;
      row.t0 = combos[c].t0;
      row.r = combos[c].r;
      row.lambda = combos[c].lambda;
      row.t_ratio = grid.t_ratio;
      row.paths = paths;
      std::vector<double> us, vs;
      std::uint64_t bad = 0, total = 0;
      LabeledEnsemble labels(paths);
      std::vector<std::string> ul, vl;
      for (const auto& pp : per_path) {
        const PathStats& st = pp[c];
        us.push_back(st.u);
        vs.push_back(st.v);
        bad += st.bad;
        total += st.intervals;
        ul.push_back(st.u_label);
        vl.push_back(st.v_label);
        if (self_check) (st.ok ? row.checks_passed : row.checks_failed)++;
      }
      Summary su = summarize(us), sv = summarize(vs);
      row.mean_u = su.mean;
      row.se_u = su.se;
      row.mean_v = sv.mean;
      row.se_v = sv.se;
      row.bad_fraction = total ? static_cast<double>(bad) / static_cast<double>(total) : 0.0;
      labels.register_partition("U", std::move(ul));
      labels.register_partition("V", std::move(vl));
      row.h_u = partition_entropy(labels, "U");
      row.h_v = partition_entropy(labels, "V");
      rows.push_back(row);
    }
  }
  return rows;
}

std::string diagnostics_csv_header() { return "n,t0,r,lambda,T_ratio,mean_U,se_U,mean_V,se_V,bad_frac,H_U,H_V"; }

std::string to_csv(const DiagnosticsRow& row) {
  return fmt::format("{},{},{},{},{},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f}", row.n, row.t0, row.r, row.lambda,
                     row.t_ratio, row.mean_u, row.se_u, row.mean_v, row.se_v, row.bad_fraction, row.h_u, row.h_v);
}

nlohmann::json to_json(const DiagnosticsRow& row) {
  return {{"n", row.n},          {"t0", row.t0},         {"r", row.r},
          {"lambda", row.lambda}, {"T_ratio", row.t_ratio}, {"paths", row.paths},
          {"mean_U", row.mean_u}, {"se_U", row.se_u},     {"mean_V", row.mean_v},
          {"se_V", row.se_v},     {"bad_frac", row.bad_fraction}, {"H_U", row.h_u},
          {"H_V", row.h_v},       {"checks_passed", row.checks_passed}, {"checks_failed", row.checks_failed}};
}

}  // namespace wreathlab
