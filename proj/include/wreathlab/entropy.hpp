#pragma once

// Shannon entropy (nats) of finitely supported measures, exact sparse
// convolution powers, plug-in estimates from samples, partition entropies
// on labeled ensembles, and a few closed-form bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "wreathlab/errors.hpp"
#include "wreathlab/group.hpp"
#include "wreathlab/walks.hpp"
#include "wreathlab/wreath.hpp"

namespace wreathlab {

inline constexpr std::size_t kDefaultAtomBudget = 5'000'000;

// kappa(x) = -x log x with kappa(0) = 0.
double kappa(double x);
// -sum p log p over the given weights; zeros are skipped.
double shannon_entropy(const std::vector<double>& probs);

// Atoms sorted by element, probabilities positive and summing to 1.
template <class T>
class FiniteDistribution {
 public:
  using Atom = std::pair<T, double>;

  FiniteDistribution() = default;

  // Merges repeated elements; throws ValidationError on non-positive
  // weights or a total off by more than tol.
  static FiniteDistribution from_atoms(std::vector<Atom> atoms, double tol = 1e-9) {
    if (atoms.empty()) throw ValidationError("distribution has no atoms");
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.first < b.first; });
    FiniteDistribution d;
    double total = 0;
    for (auto& a : atoms) {
      if (!(a.second > 0) || !std::isfinite(a.second))
        throw ValidationError(fmt::format("non-positive probability {}", a.second));
      total += a.second;
      if (!d.atoms_.empty() && d.atoms_.back().first == a.first)
        d.atoms_.back().second += a.second;
      else
        d.atoms_.push_back(std::move(a));
    }
    if (std::abs(total - 1.0) > tol) throw ValidationError(fmt::format("probabilities sum to {:.12g}, not 1", total));
    return d;
  }
  static FiniteDistribution point_mass(T x) {
    FiniteDistribution d;
    d.atoms_.emplace_back(std::move(x), 1.0);
    return d;
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double probability(const T& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [](const Atom& a, const T& k) { return a.first < k; });
    return it != atoms_.end() && it->first == x ? it->second : 0.0;
  }

  // Adopts atoms already sorted, merged and positive.
  static FiniteDistribution adopt_sorted(std::vector<Atom> atoms) {
    FiniteDistribution d;
    d.atoms_ = std::move(atoms);
    return d;
  }

 private:
  std::vector<Atom> atoms_;
};

template <class T>
double shannon_entropy(const FiniteDistribution<T>& p) {
  double h = 0;
  for (const auto& a : p.atoms()) h += kappa(a.second);
  return h;
}

// Exact p * q under `mul`. Throws ResourceError when the product support
// exceeds `budget` atoms. Sums are accumulated in the (sorted p) x (sorted q)
// loop order, so results do not depend on hashing.
template <class T, class Mul>
FiniteDistribution<T> convolve(const FiniteDistribution<T>& p, const FiniteDistribution<T>& q, Mul mul,
                               std::size_t budget = kDefaultAtomBudget) {
  std::unordered_map<T, double> acc;
  acc.reserve(std::min(budget, p.size() * q.size()));
  for (const auto& [x, px] : p.atoms()) {
    for (const auto& [y, qy] : q.atoms()) {
      acc[mul(x, y)] += px * qy;
      if (acc.size() > budget)
        throw ResourceError(fmt::format("convolution support exceeds the budget of {} atoms", budget));
    }
  }
  std::vector<typename FiniteDistribution<T>::Atom> atoms(acc.begin(), acc.end());
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return FiniteDistribution<T>::adopt_sorted(std::move(atoms));
}

FiniteDistribution<WreathElement> to_distribution(const StepDistribution& mu);
FiniteDistribution<BaseElement> uniform_generators(const GroupHandle& g);

struct EntropyPoint {
  std::uint64_t n = 0;
  double entropy = 0;    // H(mu^{*n}), nats; plug-in values include the correction
  double ratio = 0;      // entropy / n
  double increment = 0;  // entropy - previous entropy
  bool exact = true;
  std::size_t support = 0;  // exact support size, or distinct sampled values
  std::size_t samples = 0;  // 0 in exact mode
  double correction = 0;    // Miller-Madow term (K - 1) / (2N)
};

struct EntropyReport {
  std::vector<EntropyPoint> points;
  std::uint64_t exact_through = 0;          // largest n computed exactly
  bool exact_increments_nonincreasing = true;  // within 1e-12
  std::string estimator;                    // "exact" or "exact+plugin-miller-madow"
};

struct EntropyOptions {
  std::size_t budget = kDefaultAtomBudget;
  bool allow_sampling = false;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// H(mu^{*n}) for n = 1..n_max. Exact while the support fits the budget;
// afterwards plug-in with Miller-Madow correction if sampling is allowed,
// otherwise ResourceError.
EntropyReport entropy_sequence(const StepDistribution& mu, std::uint64_t n_max, const EntropyOptions& opts = {});

// Plug-in entropy of sample counts, and its Miller-Madow correction.
double plugin_entropy(const std::vector<std::uint64_t>& counts);
double miller_madow_correction(const std::vector<std::uint64_t>& counts);

// Each sampled path carries one label per registered partition.
class LabeledEnsemble {
 public:
  explicit LabeledEnsemble(std::size_t paths) : paths_(paths) {}
  std::size_t paths() const { return paths_; }
  // Throws ValidationError unless there is one label per path.
  void register_partition(const std::string& name, std::vector<std::string> labels);
  bool has_partition(const std::string& name) const { return partitions_.count(name) != 0; }
  // Throws UsageError for unregistered names.
  const std::vector<std::string>& labels(const std::string& name) const;

 private:
  std::size_t paths_;
  std::map<std::string, std::vector<std::string>> partitions_;
};

// Plug-in entropy of the join of the named partitions (empty join: 0).
double partition_entropy(const LabeledEnsemble& ens, const std::vector<std::string>& join);
double partition_entropy(const LabeledEnsemble& ens, const std::string& name);
// H(rho | gamma) = H(rho v gamma) - H(gamma).
double conditional_entropy(const LabeledEnsemble& ens, const std::vector<std::string>& rho,
                           const std::vector<std::string>& gamma);
double conditional_entropy(const LabeledEnsemble& ens, const std::string& rho, const std::string& gamma);

// h(p) = -p log p - (1-p) log(1-p); DomainError outside [0, 1].
double binary_entropy(double p);
// |D| h(alpha); DomainError unless 0 <= alpha <= 1/2.
double subset_entropy_bound(std::uint64_t d, double alpha);

struct ObscuringThreshold {
  double delta = 0;
  std::size_t q_size = 0;   // |Q|
  double tail_kappa = 0;    // sum of kappa(p) outside Q
};
// delta with: any event E of probability < delta leaves H(X obscured outside E) < eps.
// Q is the shortest prefix of atoms by decreasing probability with tail
// kappa-mass < eps/2 that holds every atom above 1/e; delta < 1/e is then the largest value found by bisection
// with kappa(1 - delta) + |Q| kappa(delta) < eps/2.
ObscuringThreshold obscuring_construction(const std::vector<double>& probs, double eps);
double obscuring_threshold(const std::vector<double>& probs, double eps);
template <class T>
double obscuring_threshold(const FiniteDistribution<T>& p, double eps) {
  std::vector<double> w;
  for (const auto& a : p.atoms()) w.push_back(a.second);
  return obscuring_threshold(w, eps);
}
// Entropy of X~ = X on E, star off E, where in_event[i] <= probs[i] is the
// mass of {X = i} inside E.
double obscured_entropy(const std::vector<double>& probs, const std::vector<double>& in_event);

struct GuivarchReport {
  double h = 0, h_se = 0;
  double speed = 0, speed_se = 0;
  double growth = 0;
  double bound = 0;  // speed * growth
  double slack = 0;  // 3 sqrt(h_se^2 + (growth speed_se)^2)
  double margin = 0; // bound + slack - h
  bool holds = false;
};
GuivarchReport guivarch_check(double h, double h_se, double speed, double speed_se, double growth);

// Exponential growth rate of balls for the standard generators: 0 for Z^d
// and Z/m, log(2d - 1) for F_d. UnsupportedError otherwise.
double growth_rate(const GroupHandle& g);

// Exact H(mu^{*n}) for simple random walk on F_d, from the law of |w_n| and
// uniformity on spheres of size 2d(2d-1)^{k-1}.
double free_group_srw_entropy(int d, std::uint64_t n);

nlohmann::json to_json(const EntropyReport& r);
nlohmann::json to_json(const GuivarchReport& r);

}  // namespace wreathlab
