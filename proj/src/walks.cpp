#include "wreathlab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "wreathlab/errors.hpp"
#include "wreathlab/magnus.hpp"

namespace wreathlab {

StepDistribution::StepDistribution(WreathGroup group, std::vector<std::pair<WreathElement, double>> atoms)
    : group_(std::move(group)) {
  if (atoms.empty()) throw ValidationError("step distribution has no atoms");
  double total = 0;
  for (auto& [element, p] : atoms) {
    if (!(p > 0) || !std::isfinite(p))
      throw ValidationError(fmt::format("atom {} has non-positive probability {}", to_text(element), p));
    if (!group_.contains(element))
      throw ValidationError(fmt::format("atom {} is not an element of {}", to_text(element), group_.name()));
    total += p;
    atoms_.push_back(std::move(element));
    probs_.push_back(p);
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError(fmt::format("probabilities sum to {:.12g}, not 1", total));
  std::vector<const WreathElement*> sorted;
  for (const auto& a : atoms_) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return *x < *y; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (*sorted[i] == *sorted[i - 1]) throw ValidationError(fmt::format("atom {} appears twice", to_text(*sorted[i])));
  cumulative_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
}

std::size_t StepDistribution::sample(PhiloxStream& rng) const {
  if (atoms_.size() == 1) {
    rng.next_u64();  // keep stream consumption independent of the measure
    return 0;
  }
  double u = rng.uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

StepDistribution convolve_measures(const StepDistribution& p, const StepDistribution& q) {
  if (!(p.group() == q.group())) throw UsageError("cannot convolve measures on different groups");
  std::map<WreathElement, double> acc;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) acc[wreath_multiply(p.atom(i), q.atom(j))] += p.probability(i) * q.probability(j);
  std::vector<std::pair<WreathElement, double>> atoms(acc.begin(), acc.end());
  return StepDistribution(p.group(), std::move(atoms));
}

namespace {

std::vector<std::pair<WreathElement, double>> uniform_over(std::vector<WreathElement> elements) {
  std::vector<std::pair<WreathElement, double>> atoms;
  const double p = 1.0 / static_cast<double>(elements.size());
  for (auto& e : elements) atoms.emplace_back(std::move(e), p);
  return atoms;
}

}  // namespace

StepDistribution lamp_switch(const WreathGroup& group) {
  const GroupHandle& a = group.lamp();
  std::vector<WreathElement> elements;
  if (a.is_finite()) {
    for (const auto& v : a.elements()) elements.push_back(group.embed_lamp(v));
  } else {
    elements.push_back(group.identity());
    for (const auto& v : a.symmetric_generators()) elements.push_back(group.embed_lamp(v));
  }
  return StepDistribution(group, uniform_over(std::move(elements)));
}

StepDistribution base_step(const WreathGroup& group) {
  std::vector<WreathElement> elements;
  for (const auto& b : group.base().symmetric_generators()) elements.push_back(group.embed_base(b));
  if (elements.empty()) throw ValidationError(fmt::format("base group {} has no nontrivial generators", group.base().name()));
  return StepDistribution(group, uniform_over(std::move(elements)));
}

StepDistribution standard_measure(const WreathGroup& group, const MeasureSpec& spec) {
  const std::string& name = spec.name;
  if (name == "srw") return base_step(group);
  if (name == "switch_walk") return convolve_measures(lamp_switch(group), base_step(group));
  if (name == "sws") return convolve_measures(convolve_measures(lamp_switch(group), base_step(group)), lamp_switch(group));
  if (name == "walk_or_switch") {
    std::vector<WreathElement> elements;
    for (const auto& a : group.lamp().symmetric_generators()) elements.push_back(group.embed_lamp(a));
    for (const auto& b : group.base().symmetric_generators()) elements.push_back(group.embed_base(b));
    if (elements.empty()) throw ValidationError("walk_or_switch needs a nontrivial lamp or base group");
    return StepDistribution(group, uniform_over(std::move(elements)));
  }
  if (name == "example_conjugate") {
    if (group.lamp().family() != Family::Residue || group.lamp().modulus() != 2)
      throw ValidationError("example_conjugate needs lamp group Z/2");
    WreathElement flip = group.embed_lamp(BaseElement(1, 2));
    std::vector<WreathElement> elements;
    for (const auto& x : group.base().symmetric_generators())
      elements.push_back(wreath_multiply(wreath_multiply(flip, group.embed_base(x)), flip));
    if (elements.empty()) throw ValidationError("example_conjugate needs a nontrivial base group");
    return StepDistribution(group, uniform_over(std::move(elements)));
  }
  if (name == "custom") {
    std::vector<std::pair<WreathElement, double>> atoms;
    for (const auto& [text, p] : spec.custom_atoms) {
      try {
        atoms.emplace_back(group.parse(text), p);
      } catch (const std::exception& e) {
        throw ValidationError(fmt::format("custom atom \"{}\": {}", text, e.what()));
      }
    }
    return StepDistribution(group, std::move(atoms));
  }
  throw ValidationError(fmt::format("unknown measure \"{}\"", name));
}

StepDistribution solvable_srw(int d, int k) {
  if (k < 2) throw UsageError("solvable_srw needs k >= 2; use srw on Z^d for k = 1");
  GroupHandle q = GroupHandle::free_solvable(d, k - 1);
  std::vector<WreathElement> elements;
  for (int i = 0; i < d; ++i) {
    elements.push_back(magnus_embed(std::string(1, letter_for(i, false)), q));
    elements.push_back(magnus_embed(std::string(1, letter_for(i, true)), q));
  }
  return StepDistribution(magnus_group(q), uniform_over(std::move(elements)));
}

SamplePath::SamplePath(WreathGroup group, std::shared_ptr<const std::vector<WreathElement>> atoms, std::uint64_t seed,
                       std::uint64_t stream, std::vector<std::uint32_t> increments)
    : group_(std::move(group)), atoms_(std::move(atoms)), seed_(seed), stream_(stream), increments_(std::move(increments)) {
  const BaseElement lamp_e = group_.lamp().identity();
  std::unordered_map<BaseElement, BaseElement> current;
  positions_.reserve(increments_.size() + 1);
  positions_.push_back(group_.base().identity());
  std::vector<LampChange> step;
  for (std::uint64_t i = 1; i <= increments_.size(); ++i) {
    const WreathElement& g = (*atoms_)[increments_[i - 1]];
    const BaseElement& x = positions_.back();
    step.clear();
    for (const auto& [s, a] : g.lamps.entries()) {
      BaseElement site = multiply(x, s);
      auto it = current.find(site);
      BaseElement old_value = it == current.end() ? lamp_e : it->second;
      BaseElement new_value = multiply(old_value, a);
      if (new_value.is_identity()) {
        current.erase(site);
      } else {
        current.insert_or_assign(site, new_value);
      }
      step.push_back({i, std::move(site), std::move(old_value), std::move(new_value)});
    }
    std::sort(step.begin(), step.end(), [](const LampChange& p, const LampChange& q) { return p.site < q.site; });
    for (auto& c : step) log_.push_back(std::move(c));
    positions_.push_back(multiply(x, g.base));
  }
  std::vector<LampConfig::Entry> entries(current.begin(), current.end());
  final_lamps_ = LampConfig::from_entries(std::move(entries));
}

const WreathElement& SamplePath::increment(std::uint64_t i) const {
  if (i < 1 || i > increments_.size()) throw UsageError(fmt::format("increment index {} outside 1..{}", i, increments_.size()));
  return (*atoms_)[increments_[i - 1]];
}

const BaseElement& SamplePath::position(std::uint64_t i) const {
  if (i >= positions_.size()) throw UsageError(fmt::format("time {} beyond horizon {}", i, horizon()));
  return positions_[i];
}

LampConfig SamplePath::lamps_at(std::uint64_t i) const {
  if (i >= horizon()) {
    if (i > horizon()) throw UsageError(fmt::format("time {} beyond horizon {}", i, horizon()));
    return final_lamps_;
  }
  std::map<BaseElement, BaseElement> state;
  for (const auto& c : log_) {
    if (c.time > i) break;
    if (c.new_value.is_identity())
      state.erase(c.site);
    else
      state.insert_or_assign(c.site, c.new_value);
  }
  std::vector<LampConfig::Entry> entries(state.begin(), state.end());
  return LampConfig::from_entries(std::move(entries));
}

WreathElement SamplePath::prefix(std::uint64_t i) const { return {lamps_at(i), position(i)}; }

bool operator==(const SamplePath& a, const SamplePath& b) {
  if (a.seed_ != b.seed_ || a.stream_ != b.stream_ || a.horizon() != b.horizon() || !(a.group_ == b.group_)) return false;
  for (std::uint64_t i = 1; i <= a.horizon(); ++i)
    if (!(a.increment(i) == b.increment(i))) return false;
  return a.positions_ == b.positions_ && a.log_ == b.log_ && a.final_lamps_ == b.final_lamps_;
}

SamplePath sample_path(const StepDistribution& mu, std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 1) throw ValidationError("horizon must be at least 1");
  PhiloxStream rng(seed, stream);
  std::vector<std::uint32_t> inc(n);
  for (auto& x : inc) x = static_cast<std::uint32_t>(mu.sample(rng));
  auto atoms = std::make_shared<const std::vector<WreathElement>>(mu.atoms());
  return SamplePath(mu.group(), std::move(atoms), seed, stream, std::move(inc));
}

SamplePath path_from_increments(const WreathGroup& group, const std::vector<WreathElement>& increments) {
  std::map<WreathElement, std::uint32_t> index;
  std::vector<WreathElement> table;
  std::vector<std::uint32_t> inc;
  for (const auto& g : increments) {
    if (!group.contains(g)) throw UsageError(fmt::format("increment {} is not in {}", to_text(g), group.name()));
    auto [it, inserted] = index.emplace(g, static_cast<std::uint32_t>(table.size()));
    if (inserted) table.push_back(g);
    inc.push_back(it->second);
  }
  return SamplePath(group, std::make_shared<const std::vector<WreathElement>>(std::move(table)), 0, 0, std::move(inc));
}

std::vector<std::uint64_t> modification_times(const SamplePath& path, const BaseElement& site) {
  std::vector<std::uint64_t> out;
  for (const auto& c : path.log())
    if (c.site == site) out.push_back(c.time);
  return out;
}

std::uint64_t window_count(const SamplePath& path, const BaseElement& site, std::uint64_t a, std::uint64_t b) {
  std::uint64_t n = 0;
  for (const auto& c : path.log())
    if (c.time >= a && c.time <= b && c.site == site) ++n;
  return n;
}

const LampConfig& limit_config_proxy(const SamplePath& path, std::uint64_t n) {
  if (path.horizon() < n) throw UsageError(fmt::format("proxy horizon {} is shorter than n = {}", path.horizon(), n));
  return path.final_lamps();
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count));
  }
  std::size_t m = s.count / 2;
  s.median = s.count % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
  s.min = values.front();
  s.max = values.back();
  return s;
}

namespace {

void check_window(std::uint64_t a, std::uint64_t b, std::uint64_t horizon) {
  if (a < 1 || a > b) throw ValidationError(fmt::format("window [{}, {}] is empty or starts before step 1", a, b));
  if (b > horizon) throw ValidationError(fmt::format("window [{}, {}] extends beyond horizon {}", a, b, horizon));
}

std::vector<SiteWindowStats> collect(const std::vector<BaseElement>& sites, const std::vector<std::vector<double>>& per_path) {
  std::vector<SiteWindowStats> out;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    SiteWindowStats st{sites[s], {}, {}};
    for (const auto& row : per_path) st.counts.push_back(row[s]);
    st.summary = summarize(st.counts);
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<double> site_counts(const SamplePath& p, const std::vector<BaseElement>& sites, std::uint64_t a, std::uint64_t b) {
  std::vector<double> row;
  for (const auto& s : sites) row.push_back(static_cast<double>(window_count(p, s, a, b)));
  return row;
}

double speed_of(const SamplePath& p) {
  if (!p.group().base().has_word_length())
    throw UnsupportedError(fmt::format("word length is not available on {}", p.group().base().name()));
  return static_cast<double>(word_length(p.positions().back())) / static_cast<double>(p.horizon());
}

double returns_of(const SamplePath& p) {
  double n = 0;
  for (std::uint64_t i = 1; i <= p.horizon(); ++i)
    if (p.position(i).is_identity()) ++n;
  return n;
}

ReturnStats return_stats(const std::vector<double>& counts) {
  ReturnStats r{summarize(counts), 0};
  if (!counts.empty())
    r.fraction_returned = static_cast<double>(std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; })) /
                          static_cast<double>(counts.size());
  return r;
}

}  // namespace

std::vector<SiteWindowStats> stabilization_stats(const Ensemble& ens, const std::vector<BaseElement>& sites,
                                                 std::uint64_t a, std::uint64_t b) {
  check_window(a, b, ens.horizon);
  auto rows = map_paths(ens, [&](std::uint64_t, const SamplePath& p) { return site_counts(p, sites, a, b); });
  return collect(sites, rows);
}

std::vector<SiteWindowStats> stabilization_stats(const std::vector<SamplePath>& paths,
                                                 const std::vector<BaseElement>& sites, std::uint64_t a,
                                                 std::uint64_t b) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : paths) {
    check_window(a, b, p.horizon());
    rows.push_back(site_counts(p, sites, a, b));
  }
  return collect(sites, rows);
}

Summary empirical_speed(const Ensemble& ens) {
  if (!ens.measure->group().base().has_word_length())
    throw UnsupportedError(fmt::format("word length is not available on {}", ens.measure->group().base().name()));
  return summarize(map_paths(ens, [](std::uint64_t, const SamplePath& p) { return speed_of(p); }));
}

Summary empirical_speed(const std::vector<SamplePath>& paths) {
  std::vector<double> v;
  for (const auto& p : paths) v.push_back(speed_of(p));
  return summarize(std::move(v));
}

ReturnStats empirical_returns(const Ensemble& ens) {
  return return_stats(map_paths(ens, [](std::uint64_t, const SamplePath& p) { return returns_of(p); }));
}

ReturnStats empirical_returns(const std::vector<SamplePath>& paths) {
  std::vector<double> v;
  for (const auto& p : paths) v.push_back(returns_of(p));
  return return_stats(v);
}

nlohmann::json to_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"se", s.se}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json to_json(const StepDistribution& mu) {
  auto atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) atoms.push_back({{"element", to_text(mu.atom(i))}, {"p", mu.probability(i)}});
  return {{"group", mu.group().name()}, {"atoms", atoms}};
}

}  // namespace wreathlab
