#include "wreathlab/magnus.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "wreathlab/errors.hpp"

namespace wreathlab {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

bool entry_less(const Flow::Entry& a, const Flow::Entry& b) { return a.first < b.first; }

// Merge two edge-sorted lists, summing values on shared edges.
std::vector<Flow::Entry> merge_sum(const std::vector<Flow::Entry>& a, const std::vector<Flow::Entry>& b) {
  std::vector<Flow::Entry> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), ie = a.end();
  auto j = b.begin(), je = b.end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == ie || j->first < i->first) {
      out.push_back(*j++);
    } else {
      std::int64_t v = checked::add(i->second, j->second);
      if (v != 0) out.emplace_back(i->first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

struct Trace {
  std::vector<Flow::Entry> raw;
  BaseElement endpoint;
};

Trace trace_word(std::string_view word, const GroupHandle& quotient) {
  validate_word(word, quotient.rank());
  Trace t{{}, quotient.identity()};
  t.raw.reserve(word.size());
  for (char c : word) {
    int i = letter_index(c);
    if (letter_is_inverse(c)) {
      t.endpoint = multiply(t.endpoint, quotient.generator_inverse(i));
      t.raw.push_back({Edge{t.endpoint, i}, -1});
    } else {
      t.raw.push_back({Edge{t.endpoint, i}, 1});
      t.endpoint = multiply(t.endpoint, quotient.generator(i));
    }
  }
  return t;
}

std::vector<Flow::Entry> translate_entries(const BaseElement& b, const std::vector<Flow::Entry>& entries, bool negate) {
  std::vector<Flow::Entry> out;
  out.reserve(entries.size());
  const bool shift = !b.is_identity();
  for (const auto& [edge, value] : entries)
    out.push_back({Edge{shift ? multiply(b, edge.origin) : edge.origin, edge.label}, negate ? checked::neg(value) : value});
  if (shift && b.family() != Family::IntVector) std::sort(out.begin(), out.end(), entry_less);
  return out;
}

}  // namespace

Flow Flow::from_entries(GroupHandle quotient, std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(), entry_less);
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (e.first.label < 0 || e.first.label >= quotient.rank())
      throw UsageError(fmt::format("edge label {} out of range for {}", e.first.label + 1, quotient.name()));
    if (!out.empty() && out.back().first == e.first)
      out.back().second = checked::add(out.back().second, e.second);
    else
      out.push_back(std::move(e));
  }
  std::erase_if(out, [](const Entry& e) { return e.second == 0; });
  return Flow(std::move(quotient), std::move(out));
}

std::int64_t Flow::value(const Edge& e) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), e,
                             [](const Entry& x, const Edge& k) { return x.first < k; });
  if (it == entries_.end() || !(it->first == e)) return 0;
  return it->second;
}

std::strong_ordering operator<=>(const Flow& a, const Flow& b) {
  return std::lexicographical_compare_three_way(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [](const Flow::Entry& x, const Flow::Entry& y) {
        if (auto c = x.first <=> y.first; c != 0) return c;
        return x.second <=> y.second;
      });
}

BaseElement edge_terminus(const Flow& f, const Edge& e) { return multiply(e.origin, f.quotient().generator(e.label)); }

Flow flow_of_word(std::string_view word, const GroupHandle& quotient) {
  return Flow::from_entries(quotient, trace_word(word, quotient).raw);
}

std::int64_t net_flow(const Flow& f, const BaseElement& g) {
  std::int64_t total = 0;
  for (const auto& [edge, value] : f.entries()) {
    if (edge.origin == g) total = checked::add(total, value);
    if (edge_terminus(f, edge) == g) total = checked::sub(total, value);
  }
  return total;
}

std::vector<std::pair<BaseElement, std::int64_t>> net_flows(const Flow& f) {
  std::map<BaseElement, std::int64_t> acc;
  for (const auto& [edge, value] : f.entries()) {
    acc[edge.origin] = checked::add(acc[edge.origin], value);
    BaseElement t = edge_terminus(f, edge);
    acc[t] = checked::sub(acc[t], value);
  }
  std::vector<std::pair<BaseElement, std::int64_t>> out;
  for (auto& [g, v] : acc)
    if (v != 0) out.emplace_back(g, v);
  return out;
}

bool is_geometric(const Flow& f) {
  auto nf = net_flows(f);
  if (nf.empty()) return true;
  if (nf.size() != 2) return false;
  return (nf[0].second == 1 && nf[1].second == -1) || (nf[0].second == -1 && nf[1].second == 1);
}

BaseElement flow_sink(const Flow& f) {
  auto nf = net_flows(f);
  const BaseElement& e = f.quotient().identity();
  if (nf.empty()) return e;
  if (nf.size() == 2) {
    const auto& src = nf[0].second == 1 ? nf[0] : nf[1];
    const auto& snk = nf[0].second == 1 ? nf[1] : nf[0];
    if (src.second == 1 && snk.second == -1 && src.first == e) return snk.first;
  }
  throw IntegrityError("flow is not a geometric flow with source at the identity");
}

Flow flow_multiply_unchecked(const Flow& f, const BaseElement& f_endpoint, const Flow& g) {
  if (g.empty()) return f;
  if (f.empty() && f_endpoint.is_identity()) return g;
  return Flow(f.quotient(), merge_sum(f.entries(), translate_entries(f_endpoint, g.entries(), false)));
}

Flow flow_multiply(const Flow& f, const BaseElement& f_endpoint, const Flow& g) {
  if (!(f.quotient() == g.quotient())) throw UsageError("flows live over different quotients");
  BaseElement sink = flow_sink(f);
  if (!(sink == f_endpoint))
    throw UsageError(fmt::format("endpoint {} is not the sink {} of the flow", to_text(f_endpoint), to_text(sink)));
  return flow_multiply_unchecked(f, f_endpoint, g);
}

Flow flow_inverse(const Flow& f, const BaseElement& endpoint) {
  return Flow(f.quotient(), translate_entries(inverse(endpoint), f.entries(), true));
}

Flow flow_inverse(const Flow& f) { return flow_inverse(f, flow_sink(f)); }

nlohmann::json to_json(const Flow& f) {
  auto arr = nlohmann::json::array();
  for (const auto& [edge, value] : f.entries())
    arr.push_back({{"origin", to_text(edge.origin)}, {"label", edge.label + 1}, {"value", value}});
  return arr;
}

std::string to_text(const Flow& f) {
  std::string out = "{";
  bool first = true;
  for (const auto& [edge, value] : f.entries()) {
    if (!first) out += ';';
    first = false;
    out += fmt::format("{}|{}|{}", to_text(edge.origin), letter_for(edge.label, false), value);
  }
  out += '}';
  return out;
}

GroupRingVector GroupRingVector::from_terms(std::vector<std::pair<BaseElement, std::int64_t>> terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  GroupRingVector out;
  for (auto& t : terms) {
    if (!out.terms.empty() && out.terms.back().first == t.first)
      out.terms.back().second = checked::add(out.terms.back().second, t.second);
    else
      out.terms.push_back(std::move(t));
  }
  std::erase_if(out.terms, [](const auto& t) { return t.second == 0; });
  return out;
}

std::int64_t GroupRingVector::coefficient(const BaseElement& g) const {
  for (const auto& [h, c] : terms)
    if (h == g) return c;
  return 0;
}

GroupRingVector add(const GroupRingVector& a, const GroupRingVector& b) {
  auto terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return GroupRingVector::from_terms(std::move(terms));
}

GroupRingVector left_translate(const BaseElement& g, const GroupRingVector& v) {
  std::vector<std::pair<BaseElement, std::int64_t>> terms;
  terms.reserve(v.terms.size());
  for (const auto& [h, c] : v.terms) terms.emplace_back(multiply(g, h), c);
  return GroupRingVector::from_terms(std::move(terms));
}

GroupRingVector fox_derivative(std::string_view word, int generator, const GroupHandle& quotient) {
  if (generator < 0 || generator >= quotient.rank())
    throw UsageError(fmt::format("generator index {} out of range for {}", generator + 1, quotient.name()));
  Flow f = flow_of_word(word, quotient);
  std::vector<std::pair<BaseElement, std::int64_t>> terms;
  for (const auto& [edge, value] : f.entries())
    if (edge.label == generator) terms.emplace_back(edge.origin, value);
  return GroupRingVector::from_terms(std::move(terms));
}

namespace {

// (pi(u), pi(d_i u)) by splitting u in halves.
std::pair<BaseElement, GroupRingVector> fox_rules(std::string_view word, int generator, const GroupHandle& q) {
  if (word.empty()) return {q.identity(), {}};
  if (word.size() == 1) {
    int j = letter_index(word[0]);
    if (letter_is_inverse(word[0])) {
      const BaseElement& xinv = q.generator_inverse(j);
      GroupRingVector d;
      if (j == generator) d = GroupRingVector::from_terms({{xinv, -1}});
      return {xinv, d};
    }
    GroupRingVector d;
    if (j == generator) d = GroupRingVector::from_terms({{q.identity(), 1}});
    return {q.generator(j), d};
  }
  auto mid = word.size() / 2;
  auto [pu, du] = fox_rules(word.substr(0, mid), generator, q);
  auto [pv, dv] = fox_rules(word.substr(mid), generator, q);
  return {multiply(pu, pv), add(du, left_translate(pu, dv))};
}

}  // namespace

GroupRingVector fox_derivative_by_rules(std::string_view word, int generator, const GroupHandle& quotient) {
  if (generator < 0 || generator >= quotient.rank())
    throw UsageError(fmt::format("generator index {} out of range for {}", generator + 1, quotient.name()));
  validate_word(word, quotient.rank());
  return fox_rules(word, generator, quotient).second;
}

WreathGroup magnus_group(const GroupHandle& quotient) {
  return WreathGroup(GroupHandle::integers(quotient.rank()), quotient);
}

namespace {

LampConfig lamps_of_flow(const Flow& f) {
  const int d = f.quotient().rank();
  // entries are sorted by origin first, so each site's labels are contiguous
  std::vector<std::pair<BaseElement, std::vector<std::int64_t>>> sites;
  for (const auto& [edge, value] : f.entries()) {
    if (sites.empty() || !(sites.back().first == edge.origin)) sites.emplace_back(edge.origin, std::vector<std::int64_t>(d, 0));
    sites.back().second[edge.label] = value;
  }
  std::vector<LampConfig::Entry> entries;
  entries.reserve(sites.size());
  for (auto& [site, coords] : sites) entries.emplace_back(std::move(site), BaseElement::vec(std::move(coords)));
  return LampConfig::from_entries(std::move(entries));
}

}  // namespace

WreathElement magnus_embed(std::string_view word, const GroupHandle& quotient) {
  Trace t = trace_word(word, quotient);
  Flow f = Flow::from_entries(quotient, std::move(t.raw));
  return {lamps_of_flow(f), std::move(t.endpoint)};
}

WreathElement magnus_embed(const BaseElement& solvable) {
  if (solvable.family() != Family::Solvable)
    throw UsageError("Magnus image needs an element of S_{d,k} with k >= 2");
  const SolvableElement& s = solvable.as_solvable();
  return {lamps_of_flow(s.flow()), s.projection()};
}

WreathElement magnus_embed_by_generators(std::string_view word, const GroupHandle& quotient) {
  validate_word(word, quotient.rank());
  WreathGroup w = magnus_group(quotient);
  const int d = quotient.rank();
  std::vector<WreathElement> images, inverses;
  for (int i = 0; i < d; ++i) {
    std::vector<std::int64_t> t(d, 0);
    t[i] = 1;
    WreathElement x = wreath_multiply(w.embed_lamp(BaseElement::vec(std::move(t))), w.embed_base(quotient.generator(i)));
    inverses.push_back(wreath_inverse(x));
    images.push_back(std::move(x));
  }
  WreathElement acc = w.identity();
  for (char c : word) {
    int i = letter_index(c);
    acc = wreath_multiply(acc, letter_is_inverse(c) ? inverses[i] : images[i]);
  }
  return acc;
}

Flow flow_from_magnus(const WreathElement& image, const GroupHandle& quotient) {
  std::vector<Flow::Entry> entries;
  for (const auto& [site, value] : image.lamps.entries()) {
    const auto& coords = value.as_vector().coords;
    if (static_cast<int>(coords.size()) != quotient.rank()) throw UsageError("lamp dimension does not match quotient rank");
    for (int i = 0; i < quotient.rank(); ++i)
      if (coords[i] != 0) entries.push_back({Edge{site, i}, coords[i]});
  }
  return Flow::from_entries(quotient, std::move(entries));
}

bool is_identity(std::string_view word, const GroupHandle& quotient) { return flow_of_word(word, quotient).empty(); }

bool words_equal(std::string_view u, std::string_view v, const GroupHandle& quotient) {
  return flow_of_word(u, quotient) == flow_of_word(v, quotient);
}

SolvableElement::SolvableElement(Flow flow, BaseElement projection, int rank, int level)
    : flow_(std::move(flow)), projection_(std::move(projection)), rank_(rank), level_(level) {
  std::size_t h = mix(static_cast<std::size_t>(rank_) * 131 + level_, 0x51u);
  for (const auto& [edge, value] : flow_.entries()) {
    h = mix(h, edge.origin.hash());
    h = mix(h, static_cast<std::size_t>(edge.label));
    h = mix(h, static_cast<std::size_t>(value));
  }
  hash_ = h;
}

BaseElement SolvableElement::make(Flow flow, BaseElement projection, int rank, int level) {
  if (level < 2) throw UsageError("flow-backed solvable elements need level >= 2");
  return BaseElement(std::make_shared<const SolvableElement>(std::move(flow), std::move(projection), rank, level));
}

std::string SolvableElement::to_text() const { return wreathlab::to_text(flow_); }

std::strong_ordering operator<=>(const SolvableElement& a, const SolvableElement& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  if (auto c = a.level_ <=> b.level_; c != 0) return c;
  return a.flow_ <=> b.flow_;
}

BaseElement solvable_from_word(std::string_view word, int rank, int level) {
  if (level < 1) throw UsageError("S_{d,k} requires k >= 1");
  validate_word(word, rank);
  if (level == 1) {
    std::vector<std::int64_t> coords(rank, 0);
    for (char c : word) coords[letter_index(c)] += letter_is_inverse(c) ? -1 : 1;
    return BaseElement::vec(std::move(coords));
  }
  GroupHandle quotient = GroupHandle::free_solvable(rank, level - 1);
  Trace t = trace_word(word, quotient);
  Flow f = Flow::from_entries(quotient, std::move(t.raw));
  return SolvableElement::make(std::move(f), std::move(t.endpoint), rank, level);
}

BaseElement solvable_multiply(const BaseElement& a, const BaseElement& b) {
  const SolvableElement& x = a.as_solvable();
  const SolvableElement& y = b.as_solvable();
  if (x.rank() != y.rank() || x.level() != y.level())
    throw UsageError(fmt::format("cannot multiply S_{{{},{}}} by S_{{{},{}}}", x.rank(), x.level(), y.rank(), y.level()));
  if (y.flow().empty()) return a;
  if (x.flow().empty()) return b;
  return SolvableElement::make(flow_multiply_unchecked(x.flow(), x.projection(), y.flow()),
                               multiply(x.projection(), y.projection()), x.rank(), x.level());
}

BaseElement solvable_inverse(const BaseElement& a) {
  const SolvableElement& x = a.as_solvable();
  if (x.flow().empty()) return a;
  return SolvableElement::make(flow_inverse(x.flow(), x.projection()), inverse(x.projection()), x.rank(), x.level());
}

}  // namespace wreathlab
