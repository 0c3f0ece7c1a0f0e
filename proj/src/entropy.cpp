#include "wreathlab/entropy.hpp"

#include <numbers>

namespace wreathlab {

double kappa(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

double shannon_entropy(const std::vector<double>& probs) {
  double h = 0;
  for (double p : probs) h += kappa(p);
  return h;
}

FiniteDistribution<WreathElement> to_distribution(const StepDistribution& mu) {
  std::vector<FiniteDistribution<WreathElement>::Atom> atoms;
  for (std::size_t i = 0; i < mu.size(); ++i) atoms.emplace_back(mu.atom(i), mu.probability(i));
  return FiniteDistribution<WreathElement>::from_atoms(std::move(atoms));
}

FiniteDistribution<BaseElement> uniform_generators(const GroupHandle& g) {
  const auto& gens = g.symmetric_generators();
  if (gens.empty()) throw ValidationError(fmt::format("{} has no nontrivial generators", g.name()));
  std::vector<FiniteDistribution<BaseElement>::Atom> atoms;
  for (const auto& x : gens) atoms.emplace_back(x, 1.0 / static_cast<double>(gens.size()));
  return FiniteDistribution<BaseElement>::from_atoms(std::move(atoms));
}

double plugin_entropy(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0) return 0;
  double h = 0;
  for (auto c : counts) h += kappa(static_cast<double>(c) / total);
  return h;
}

double miller_madow_correction(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  double k = 0;
  for (auto c : counts) {
    total += static_cast<double>(c);
    if (c > 0) ++k;
  }
  if (total == 0 || k == 0) return 0;
  return (k - 1) / (2 * total);
}

EntropyReport entropy_sequence(const StepDistribution& mu, std::uint64_t n_max, const EntropyOptions& opts) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  EntropyReport report;
  report.estimator = "exact";
  const auto step = to_distribution(mu);
  FiniteDistribution<WreathElement> cur = step;
  double prev = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      try {
        cur = convolve(cur, step, wreath_multiply, opts.budget);
      } catch (const ResourceError&) {
        if (!opts.allow_sampling) throw;
        break;
      }
    }
    EntropyPoint pt;
    pt.n = n;
    pt.entropy = shannon_entropy(cur);
    pt.ratio = pt.entropy / static_cast<double>(n);
    pt.increment = pt.entropy - prev;
    pt.support = cur.size();
    prev = pt.entropy;
    report.points.push_back(pt);
    report.exact_through = n;
  }
  for (std::size_t i = 2; i < report.points.size(); ++i)
    if (report.points[i].increment > report.points[i - 1].increment + 1e-12) report.exact_increments_nonincreasing = false;

  const std::uint64_t first = report.exact_through + 1;
  if (first > n_max) return report;
  if (opts.samples < 1) throw ValidationError("plug-in estimation needs at least one sample");
  report.estimator = "exact+plugin-miller-madow";

  Ensemble ens{std::make_shared<const StepDistribution>(mu), n_max, opts.samples, opts.seed, opts.threads};
  auto endpoints = map_paths(ens, [first, n_max](std::uint64_t, const SamplePath& p) {
    std::vector<WreathElement> out;
    out.reserve(n_max - first + 1);
    WreathElement w = p.group().identity();
    for (std::uint64_t i = 1; i <= n_max; ++i) {
      w = wreath_multiply(w, p.increment(i));
      if (i >= first) out.push_back(w);
    }
    return out;
  });
  for (std::uint64_t n = first; n <= n_max; ++n) {
    std::map<WreathElement, std::uint64_t> tally;
    for (const auto& path : endpoints) ++tally[path[n - first]];
    std::vector<std::uint64_t> counts;
    counts.reserve(tally.size());
    for (const auto& [w, c] : tally) counts.push_back(c);
    EntropyPoint pt;
    pt.n = n;
    pt.exact = false;
    pt.correction = miller_madow_correction(counts);
    pt.entropy = plugin_entropy(counts) + pt.correction;
    pt.ratio = pt.entropy / static_cast<double>(n);
    pt.increment = pt.entropy - prev;
    pt.support = counts.size();
    pt.samples = opts.samples;
    prev = pt.entropy;
    report.points.push_back(pt);
  }
  return report;
}

void LabeledEnsemble::register_partition(const std::string& name, std::vector<std::string> labels) {
  if (labels.size() != paths_)
    throw ValidationError(fmt::format("partition \"{}\" has {} labels for {} paths", name, labels.size(), paths_));
  partitions_[name] = std::move(labels);
}

const std::vector<std::string>& LabeledEnsemble::labels(const std::string& name) const {
  auto it = partitions_.find(name);
  if (it == partitions_.end()) throw UsageError(fmt::format("partition \"{}\" is not registered", name));
  return it->second;
}

double partition_entropy(const LabeledEnsemble& ens, const std::vector<std::string>& join) {
  std::vector<const std::vector<std::string>*> cols;
  for (const auto& name : join) cols.push_back(&ens.labels(name));
  if (cols.empty() || ens.paths() == 0) return 0;
  std::map<std::vector<std::string_view>, std::uint64_t> tally;
  for (std::size_t i = 0; i < ens.paths(); ++i) {
    std::vector<std::string_view> key;
    key.reserve(cols.size());
    for (const auto* c : cols) key.emplace_back((*c)[i]);
    ++tally[key];
  }
  std::vector<std::uint64_t> counts;
  for (const auto& [k, c] : tally) counts.push_back(c);
  return plugin_entropy(counts);
}

double partition_entropy(const LabeledEnsemble& ens, const std::string& name) {
  return partition_entropy(ens, std::vector<std::string>{name});
}

double conditional_entropy(const LabeledEnsemble& ens, const std::vector<std::string>& rho,
                           const std::vector<std::string>& gamma) {
  std::vector<std::string> joint = rho;
  joint.insert(joint.end(), gamma.begin(), gamma.end());
  return partition_entropy(ens, joint) - partition_entropy(ens, gamma);
}

double conditional_entropy(const LabeledEnsemble& ens, const std::string& rho, const std::string& gamma) {
  return conditional_entropy(ens, std::vector<std::string>{rho}, std::vector<std::string>{gamma});
}

double binary_entropy(double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError(fmt::format("binary entropy needs 0 <= p <= 1, got {}", p));
  return kappa(p) + kappa(1 - p);
}

double subset_entropy_bound(std::uint64_t d, double alpha) {
  if (!(alpha >= 0 && alpha <= 0.5)) throw DomainError(fmt::format("subset bound needs 0 <= alpha <= 1/2, got {}", alpha));
  return static_cast<double>(d) * binary_entropy(alpha);
}

ObscuringThreshold obscuring_construction(const std::vector<double>& probs, double eps) {
  if (!(eps > 0)) throw DomainError("obscuring threshold needs eps > 0");
  std::vector<double> sorted = probs;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // tail[i] = kappa-mass of atoms i, i+1, ...
  std::vector<double> tail(sorted.size() + 1, 0.0);
  for (std::size_t i = sorted.size(); i-- > 0;) tail[i] = tail[i + 1] + kappa(sorted[i]);
  ObscuringThreshold r;
  r.q_size = 0;
  // Atoms heavier than 1/e stay in Q: kappa is increasing only on [0, 1/e],
  // so the tail bound kappa(P(X = d, E)) <= kappa(P(X = d)) needs p_d <= 1/e.
  while (r.q_size < sorted.size() && (!(tail[r.q_size] < eps / 2) || sorted[r.q_size] > 1 / std::numbers::e)) ++r.q_size;
  r.tail_kappa = tail[r.q_size];

  const double q = static_cast<double>(r.q_size);
  auto g = [q](double d) { return kappa(1 - d) + q * kappa(d); };
  const double top = std::nextafter(1 / std::numbers::e, 0.0);
  if (g(top) < eps / 2) {
    r.delta = top;
    return r;
  }
  // g increases on (0, 1/e) and g(0) = 0
  double lo = 0, hi = top;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < eps / 2)
      lo = mid;
    else
      hi = mid;
  }
  r.delta = lo;
  return r;
}

double obscuring_threshold(const std::vector<double>& probs, double eps) { return obscuring_construction(probs, eps).delta; }

double obscured_entropy(const std::vector<double>& probs, const std::vector<double>& in_event) {
  if (probs.size() != in_event.size()) throw UsageError("event masses must match the atoms");
  double inside = 0;
  double h = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (in_event[i] < 0 || in_event[i] > probs[i] + 1e-15) throw UsageError("event mass exceeds atom probability");
    inside += in_event[i];
    h += kappa(in_event[i]);
  }
  return h + kappa(std::max(0.0, 1 - inside));
}

GuivarchReport guivarch_check(double h, double h_se, double speed, double speed_se, double growth) {
  GuivarchReport r;
  r.h = h;
  r.h_se = h_se;
  r.speed = speed;
  r.speed_se = speed_se;
  r.growth = growth;
  r.bound = speed * growth;
  r.slack = 3 * std::sqrt(h_se * h_se + growth * speed_se * growth * speed_se);
  r.margin = r.bound + r.slack - h;
  r.holds = r.margin >= 0;
  return r;
}

double growth_rate(const GroupHandle& g) {
  switch (g.family()) {
    case Family::IntVector:
    case Family::Residue: return 0;
    case Family::ReducedWord: return std::log(2.0 * g.rank() - 1);
    case Family::Solvable: break;
  }
  throw UnsupportedError(fmt::format("growth rate of {} is not available", g.name()));
}

double free_group_srw_entropy(int d, std::uint64_t n) {
  if (d < 1) throw DomainError("free group rank must be positive");
  const double up = (2.0 * d - 1) / (2.0 * d);
  std::vector<double> p(n + 2, 0.0), next(n + 2, 0.0);
  p[0] = 1;
  for (std::uint64_t step = 1; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    next[1] += p[0];
    for (std::uint64_t k = 1; k < step; ++k) {
      next[k + 1] += p[k] * up;
      next[k - 1] += p[k] * (1 - up);
    }
    p.swap(next);
  }
  const double log2d = std::log(2.0 * d), logb = std::log(2.0 * d - 1);
  double h = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (p[k] <= 0) continue;
    h += kappa(p[k]);
    if (k > 0) h += p[k] * (log2d + static_cast<double>(k - 1) * logb);
  }
  return h;
}

nlohmann::json to_json(const EntropyReport& r) {
  auto pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"n", p.n},
                   {"H", p.entropy},
                   {"H_over_n", p.ratio},
                   {"increment", p.increment},
                   {"exact", p.exact},
                   {"support", p.support},
                   {"samples", p.samples},
                   {"miller_madow", p.correction}});
  return {{"units", "nats"},
          {"estimator", r.estimator},
          {"exact_through", r.exact_through},
          {"exact_increments_nonincreasing", r.exact_increments_nonincreasing},
          {"points", pts}};
}

nlohmann::json to_json(const GuivarchReport& r) {
  return {{"h", r.h},         {"h_se", r.h_se},   {"speed", r.speed},   {"speed_se", r.speed_se}, {"growth", r.growth},
          {"bound", r.bound}, {"slack", r.slack}, {"margin", r.margin}, {"holds", r.holds}};
}

}  // namespace wreathlab
