#pragma once

// Coarse trajectories, (R, L)-good intervals, bad-increment records, coarse
// neighborhoods, unstable points and the exact reconstructions of the lamp
// state at s = floor(n/t0) t0 from those records.
//
// R is the word-metric ball of radius r in B, so R^{t0} is the ball of
// radius r t0. L is the l1 ball of radius lambda for Z^d lamps and the whole
// lamp group when it is finite.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wreathlab/walks.hpp"
#include "wreathlab/wreath.hpp"

namespace wreathlab {

struct GoodnessParams {
  std::uint64_t t0 = 1;
  std::int64_t r = 1;
  std::int64_t lambda = 1;
};

// Throws ValidationError unless t0 >= 1, r >= 0, lambda >= 0.
void validate(const GoodnessParams& params);

// (X_{t0}, X_{2 t0}, ..., X_{m t0}), m = floor(n / t0).
struct CoarseTrajectory {
  std::uint64_t t0 = 1;
  std::uint64_t n = 0;
  BaseElement origin;  // X_0 = e
  std::vector<BaseElement> points;

  std::uint64_t intervals() const { return points.size(); }
  // X_{j t0} for 0 <= j <= m.
  const BaseElement& at(std::uint64_t j) const { return j == 0 ? origin : points.at(j - 1); }
};

CoarseTrajectory coarse_trajectory(const SamplePath& path, std::uint64_t t0, std::uint64_t n);

bool is_good(const WreathElement& g, const GoodnessParams& params, const WreathGroup& group);
// Entry j-1 is true when every increment of I_j = {(j-1)t0+1, ..., j t0} is good.
std::vector<bool> classify_intervals(const SamplePath& path, std::uint64_t n, const GoodnessParams& params);

// Per interval either the full increment list (bad) or nullopt (the star);
// the final interval {m t0 + 1, ..., n} is always listed.
struct BadIncrementRecord {
  std::uint64_t t0 = 1;
  std::uint64_t n = 0;
  std::vector<std::optional<std::vector<WreathElement>>> intervals;
  std::vector<WreathElement> final_increments;

  bool is_bad(std::uint64_t j) const { return intervals.at(j - 1).has_value(); }
  std::uint64_t bad_count() const;
};

BadIncrementRecord bad_increments(const SamplePath& path, std::uint64_t n, const GoodnessParams& params);

// b lies within distance r t0 of X_{j t0} for some 0 <= j <= m - 1.
// With m = 0 the union is empty and nothing is inside.
bool in_coarse_neighborhood(const BaseElement& b, const CoarseTrajectory& p, const GoodnessParams& params);

// Lamp values at s outside the coarse neighborhood, from the coarse
// trajectory and the bad increments only. Throws IntegrityError when a
// replayed bad interval does not end at the next coarse point.
LampConfig reconstruct_outside(const CoarseTrajectory& p, const BadIncrementRecord& beta, const GoodnessParams& params,
                               const WreathGroup& group);

// Delta_s(b, i): change made to the lamp at b by increment g_i, i.e.
// phi_{i-1}(b)^{-1} phi_i(b), for b in U_s and i in a good interval; star on
// bad intervals.
struct UnstableReport {
  std::uint64_t t0 = 1;
  std::uint64_t s = 0;
  std::uint64_t horizon = 0;  // T of the proxy phi_T
  std::vector<BaseElement> unstable;  // U_s, sorted
  std::vector<std::uint64_t> visits;  // V_s, interval indices, sorted
  struct Increment {
    BaseElement site;
    std::uint64_t time;
    BaseElement value;
  };
  std::vector<Increment> increments;     // nonidentity good-interval entries, by (time, site)
  std::vector<std::uint64_t> bad_intervals;  // intervals whose entries are all star

  bool contains_unstable(const BaseElement& b) const;
  // nullopt is the star; identity when nothing changed.
  std::optional<BaseElement> delta(const BaseElement& b, std::uint64_t i, const BaseElement& lamp_identity) const;
};

// U_s with phi_infinity replaced by `proxy`. UsageError when horizon < n.
std::vector<BaseElement> unstable_points(const SamplePath& path, std::uint64_t n, const GoodnessParams& params,
                                         const LampConfig& proxy);
std::vector<std::uint64_t> visit_times(const SamplePath& path, std::uint64_t n, const GoodnessParams& params,
                                       const std::vector<BaseElement>& unstable);
UnstableReport unstable_report(const SamplePath& path, std::uint64_t n, const GoodnessParams& params);

// Lamp values at s inside the coarse neighborhood: sites of U_s from the bad
// increments and Delta_s in time order, all other sites from the proxy.
LampConfig reconstruct_inside(const CoarseTrajectory& p, const BadIncrementRecord& beta, const UnstableReport& report,
                              const LampConfig& proxy, const GoodnessParams& params, const WreathGroup& group);

// (phi_n, X_n) from (phi_s, X_s) and the final increments.
WreathElement reconstruct_state(const CoarseTrajectory& p, const BadIncrementRecord& beta, const LampConfig& phi_s,
                                const WreathGroup& group);

struct DiagnosticsBundle {
  CoarseTrajectory trajectory;
  BadIncrementRecord bad;
  UnstableReport unstable;
};

// Everything for one path, with phi_T of the full path as the proxy.
DiagnosticsBundle diagnose(const SamplePath& path, std::uint64_t n, const GoodnessParams& params);

struct ReconstructionCheck {
  bool outside = false;
  bool inside = false;
  bool state = false;
  bool all() const { return outside && inside && state; }
};
// Compares the three reconstructions against the simulated phi_s, phi_n, X_n.
ReconstructionCheck check_reconstruction(const SamplePath& path, std::uint64_t n, const GoodnessParams& params);

struct DiagnosticsGrid {
  std::vector<std::uint64_t> ns;
  std::vector<std::uint64_t> t0s;
  std::vector<std::int64_t> rs;
  std::vector<std::int64_t> lambdas;
  std::uint64_t t_ratio = 10;
};

struct DiagnosticsRow {
  std::uint64_t n = 0, t0 = 0;
  std::int64_t r = 0, lambda = 0;
  std::uint64_t t_ratio = 0;
  std::uint64_t paths = 0;
  double mean_u = 0, se_u = 0;  // |U_s| / n
  double mean_v = 0, se_v = 0;  // |V_s| / n
  double bad_fraction = 0;      // bad intervals / intervals, pooled
  double h_u = 0, h_v = 0;      // plug-in entropies of U_s and V_s, nats
  std::uint64_t checks_passed = 0, checks_failed = 0;
};

// One ensemble of horizon t_ratio * n per n (path i from stream i of seed).
// Reconstruction self-checks run on every path when `self_check` is set.
std::vector<DiagnosticsRow> diagnostics_report(const StepDistribution& mu, const DiagnosticsGrid& grid,
                                               std::uint64_t paths, std::uint64_t seed, unsigned threads,
                                               bool self_check);

std::string diagnostics_csv_header();
std::string to_csv(const DiagnosticsRow& row);
nlohmann::json to_json(const DiagnosticsRow& row);

}  // namespace wreathlab
