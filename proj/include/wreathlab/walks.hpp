#pragma once

// Seeded random walks on wreath products A wr B. Plain groups B are handled
// as Z/1 wr B, and walks on S_{d,k} run on their Magnus images in
// Z^d wr S_{d,k-1}.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreathlab/group.hpp"
#include "wreathlab/rng.hpp"
#include "wreathlab/wreath.hpp"

namespace wreathlab {

class StepDistribution {
 public:
  // Throws ValidationError unless probabilities are positive, sum to 1
  // within 1e-9, and atoms are distinct members of the group.
  StepDistribution(WreathGroup group, std::vector<std::pair<WreathElement, double>> atoms);

  const WreathGroup& group() const { return group_; }
  std::size_t size() const { return atoms_.size(); }
  const WreathElement& atom(std::size_t i) const { return atoms_[i]; }
  double probability(std::size_t i) const { return probs_[i]; }
  const std::vector<WreathElement>& atoms() const { return atoms_; }
  const std::vector<double>& probabilities() const { return probs_; }

  // Index of one atom drawn with one uniform variate.
  std::size_t sample(PhiloxStream& rng) const;

 private:
  WreathGroup group_;
  std::vector<WreathElement> atoms_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

// Product measure p * q on the same group, equal products merged.
StepDistribution convolve_measures(const StepDistribution& p, const StepDistribution& q);

// Uniform lamp switch at e: all of A when A is finite, {0, +-e_i} for Z^d lamps.
StepDistribution lamp_switch(const WreathGroup& group);
// Uniform on the symmetric base generators.
StepDistribution base_step(const WreathGroup& group);

// Names: "srw" (base_step), "switch_walk" (switch then step),
// "walk_or_switch" (uniform on lamp generators at e and base generators),
// "sws" (switch, step, switch), "example_conjugate" (delta_e x delta_e for
// x in the base generators; needs Z/2 lamps), "custom" (explicit atoms).
struct MeasureSpec {
  std::string name = "sws";
  std::vector<std::pair<std::string, double>> custom_atoms;  // "delta(..)=.. | base" texts
};

StepDistribution standard_measure(const WreathGroup& group, const MeasureSpec& spec);
// Simple random walk on S_{d,k} as the Magnus images of x_i^{+-1} in Z^d wr S_{d,k-1}; k >= 2.
StepDistribution solvable_srw(int d, int k);

struct LampChange {
  std::uint64_t time = 0;  // step i, 1-based
  BaseElement site;
  BaseElement old_value;
  BaseElement new_value;
  friend bool operator==(const LampChange&, const LampChange&) = default;
};

// One trajectory w_0 = e, w_i = w_{i-1} g_i. Increments are indices into the
// shared atom table; lamp history is kept as a change log.
class SamplePath {
 public:
  SamplePath(WreathGroup group, std::shared_ptr<const std::vector<WreathElement>> atoms, std::uint64_t seed,
             std::uint64_t stream, std::vector<std::uint32_t> increments);

  const WreathGroup& group() const { return group_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t horizon() const { return increments_.size(); }

  // g_i, 1 <= i <= horizon
  const WreathElement& increment(std::uint64_t i) const;
  const std::vector<std::uint32_t>& increment_indices() const { return increments_; }
  const std::vector<WreathElement>& atom_table() const { return *atoms_; }
  // X_i, 0 <= i <= horizon
  const BaseElement& position(std::uint64_t i) const;
  const std::vector<BaseElement>& positions() const { return positions_; }
  // Sorted by (time, site).
  const std::vector<LampChange>& log() const { return log_; }
  const LampConfig& final_lamps() const { return final_lamps_; }

  // phi_i by replaying the log.
  LampConfig lamps_at(std::uint64_t i) const;
  WreathElement prefix(std::uint64_t i) const;

  friend bool operator==(const SamplePath& a, const SamplePath& b);

 private:
  WreathGroup group_;
  std::shared_ptr<const std::vector<WreathElement>> atoms_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::vector<std::uint32_t> increments_;
  std::vector<BaseElement> positions_;
  std::vector<LampChange> log_;
  LampConfig final_lamps_;
};

// Stream `stream` of master seed `seed`.
SamplePath sample_path(const StepDistribution& mu, std::uint64_t n, std::uint64_t seed, std::uint64_t stream = 0);
// Deterministic path through the given increments (fixtures, oracles).
SamplePath path_from_increments(const WreathGroup& group, const std::vector<WreathElement>& increments);

std::vector<std::uint64_t> modification_times(const SamplePath& path, const BaseElement& site);
// |modification_times(site) intersected with [a, b]|
std::uint64_t window_count(const SamplePath& path, const BaseElement& site, std::uint64_t a, std::uint64_t b);

// phi_T for a path of horizon T, standing in for phi_infinity at time n.
// Throws UsageError when T < n.
const LampConfig& limit_config_proxy(const SamplePath& path, std::uint64_t n);

struct Summary {
  std::size_t count = 0;
  double mean = 0;
  double se = 0;  // standard error of the mean
  double median = 0;
  double min = 0;
  double max = 0;
};
Summary summarize(std::vector<double> values);

struct Ensemble {
  std::shared_ptr<const StepDistribution> measure;
  std::uint64_t horizon = 0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Applies fn(path_index, path) to every path of the ensemble, path i drawn
// from stream i of the master seed, and returns the results in path order.
template <class Fn>
auto map_paths(const Ensemble& ens, Fn fn) -> std::vector<decltype(fn(std::uint64_t{}, std::declval<const SamplePath&>()))> {
  using R = decltype(fn(std::uint64_t{}, std::declval<const SamplePath&>()));
  std::vector<R> out(ens.paths);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= ens.paths) return;
      try {
        SamplePath p = sample_path(*ens.measure, ens.horizon, ens.seed, i);
        out[i] = fn(i, p);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = ens.paths;
      }
    }
  };
  unsigned t = std::max(1u, ens.threads);
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct SiteWindowStats {
  BaseElement site;
  std::vector<double> counts;  // per path
  Summary summary;
};

// Modification counts of each site inside [a, b]. Throws ValidationError
// unless 1 <= a <= b <= horizon.
std::vector<SiteWindowStats> stabilization_stats(const Ensemble& ens, const std::vector<BaseElement>& sites,
                                                 std::uint64_t a, std::uint64_t b);
std::vector<SiteWindowStats> stabilization_stats(const std::vector<SamplePath>& paths,
                                                 const std::vector<BaseElement>& sites, std::uint64_t a,
                                                 std::uint64_t b);

// |X_n| / n over the ensemble. Throws UnsupportedError when the base has no word length.
Summary empirical_speed(const Ensemble& ens);
Summary empirical_speed(const std::vector<SamplePath>& paths);

struct ReturnStats {
  Summary returns;           // #{1 <= i <= n : X_i = e} per path
  double fraction_returned;  // paths with at least one return
};
ReturnStats empirical_returns(const Ensemble& ens);
ReturnStats empirical_returns(const std::vector<SamplePath>& paths);

nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const StepDistribution& mu);

}  // namespace wreathlab
