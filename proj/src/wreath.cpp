#include "wreathlab/wreath.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "wreathlab/errors.hpp"

namespace wreathlab {

namespace {

bool site_less(const LampConfig::Entry& a, const LampConfig::Entry& b) { return a.first < b.first; }

// Sorted, duplicate sites combined in order, identities removed.
std::vector<LampConfig::Entry> canonicalize(std::vector<LampConfig::Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(), site_less);
  std::vector<LampConfig::Entry> out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second = multiply(out.back().second, e.second);
    else
      out.push_back(std::move(e));
  }
  std::erase_if(out, [](const LampConfig::Entry& e) { return e.second.is_identity(); });
  return out;
}

}  // namespace

LampConfig LampConfig::from_entries(std::vector<Entry> entries) { return LampConfig(canonicalize(std::move(entries))); }

LampConfig LampConfig::delta(BaseElement site, BaseElement value) {
  std::vector<Entry> e;
  e.emplace_back(std::move(site), std::move(value));
  return from_entries(std::move(e));
}

std::vector<BaseElement> LampConfig::support() const {
  std::vector<BaseElement> out;
  out.reserve(entries_.size());
  for (const auto& [site, value] : entries_) out.push_back(site);
  return out;
}

const BaseElement* LampConfig::find(const BaseElement& site) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), site,
                             [](const Entry& e, const BaseElement& s) { return e.first < s; });
  if (it == entries_.end() || !(it->first == site)) return nullptr;
  return &it->second;
}

BaseElement LampConfig::value_or(const BaseElement& site, const BaseElement& lamp_identity) const {
  const BaseElement* v = find(site);
  return v ? *v : lamp_identity;
}

LampConfig LampConfig::filtered(const std::function<bool(const BaseElement&)>& keep) const {
  std::vector<Entry> out;
  for (const auto& e : entries_)
    if (keep(e.first)) out.push_back(e);
  return LampConfig(std::move(out));
}

std::strong_ordering operator<=>(const LampConfig& a, const LampConfig& b) {
  return std::lexicographical_compare_three_way(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [](const LampConfig::Entry& x, const LampConfig::Entry& y) {
        if (auto c = x.first <=> y.first; c != 0) return c;
        return x.second <=> y.second;
      });
}

LampConfig translate_config(const BaseElement& b, const LampConfig& f) {
  if (b.is_identity()) return f;
  std::vector<LampConfig::Entry> out;
  out.reserve(f.size());
  for (const auto& [site, value] : f.entries()) out.emplace_back(multiply(b, site), value);
  // lexicographic order on Z^d is translation invariant; other families need a re-sort
  if (b.family() != Family::IntVector) std::sort(out.begin(), out.end(), site_less);
  return LampConfig(std::move(out));
}

LampConfig pointwise_multiply(const LampConfig& f, const LampConfig& g) {
  if (g.empty()) return f;
  if (f.empty()) return g;
  std::vector<LampConfig::Entry> out;
  out.reserve(f.size() + g.size());
  auto a = f.entries().begin(), ae = f.entries().end();
  auto b = g.entries().begin(), be = g.entries().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == ae || b->first < a->first) {
      out.push_back(*b++);
    } else {
      BaseElement v = multiply(a->second, b->second);
      if (!v.is_identity()) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  return LampConfig(std::move(out));
}

LampConfig pointwise_inverse(const LampConfig& f) {
  std::vector<LampConfig::Entry> out;
  out.reserve(f.size());
  for (const auto& [site, value] : f.entries()) out.emplace_back(site, inverse(value));
  return LampConfig::from_entries(std::move(out));
}

std::size_t WreathElement::hash() const {
  std::size_t h = base.hash();
  for (const auto& [site, value] : lamps.entries()) {
    h ^= site.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= value.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::strong_ordering operator<=>(const WreathElement& a, const WreathElement& b) {
  if (auto c = a.base <=> b.base; c != 0) return c;
  return a.lamps <=> b.lamps;
}

WreathElement wreath_multiply(const WreathElement& u, const WreathElement& v) {
  return {pointwise_multiply(u.lamps, translate_config(u.base, v.lamps)), multiply(u.base, v.base)};
}

WreathElement wreath_inverse(const WreathElement& u) {
  BaseElement binv = inverse(u.base);
  return {translate_config(binv, pointwise_inverse(u.lamps)), std::move(binv)};
}

bool WreathGroup::contains(const WreathElement& u) const {
  if (!base_.contains(u.base)) return false;
  return std::all_of(u.lamps.entries().begin(), u.lamps.entries().end(), [this](const LampConfig::Entry& e) {
    return base_.contains(e.first) && lamp_.contains(e.second);
  });
}

std::string WreathGroup::name() const { return fmt::format("{} wr {}", lamp_.name(), base_.name()); }

WreathElement WreathGroup::embed_lamp(const BaseElement& a) const {
  if (!lamp_.contains(a)) throw UsageError(fmt::format("element {} is not in lamp group {}", to_text(a), lamp_.name()));
  return {LampConfig::delta(base_.identity(), a), base_.identity()};
}

WreathElement WreathGroup::embed_base(const BaseElement& b) const {
  if (!base_.contains(b)) throw UsageError(fmt::format("element {} is not in base group {}", to_text(b), base_.name()));
  return {LampConfig{}, b};
}

LampConfig WreathGroup::parse_config(std::string_view text) const {
  std::vector<LampConfig::Entry> entries;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ';' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
  };
  skip();
  while (pos < text.size()) {
    if (text.substr(pos, 6) != "delta(") throw ParseError(fmt::format("expected delta(...) at \"{}\"", text.substr(pos)));
    auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated delta(");
    BaseElement site = base_.parse(text.substr(pos + 6, close - pos - 6));
    pos = close + 1;
    if (pos >= text.size() || text[pos] != '=') throw ParseError("expected '=' after delta(...)");
    ++pos;
    auto end = text.find_first_of(" ;\t\n", pos);
    if (end == std::string_view::npos) end = text.size();
    BaseElement value = lamp_.parse(text.substr(pos, end - pos));
    entries.emplace_back(std::move(site), std::move(value));
    pos = end;
    skip();
  }
  return LampConfig::from_entries(std::move(entries));
}

WreathElement WreathGroup::parse(std::string_view text) const {
  auto bar = text.find('|');
  LampConfig lamps = parse_config(text.substr(0, bar));
  BaseElement base = base_.identity();
  if (bar != std::string_view::npos) base = base_.parse(text.substr(bar + 1));
  return {std::move(lamps), std::move(base)};
}

std::string to_text(const LampConfig& f) {
  std::string out;
  for (const auto& [site, value] : f.entries()) {
    if (!out.empty()) out += ' ';
    out += fmt::format("delta({})={}", to_text(site), to_text(value));
  }
  return out;
}

std::string to_text(const WreathElement& u) {
  std::string lamps = to_text(u.lamps);
  return lamps.empty() ? fmt::format("| {}", to_text(u.base)) : fmt::format("{} | {}", lamps, to_text(u.base));
}

nlohmann::json to_json(const LampConfig& f) {
  auto arr = nlohmann::json::array();
  for (const auto& [site, value] : f.entries()) arr.push_back({{"site", to_text(site)}, {"value", to_text(value)}});
  return arr;
}

nlohmann::json to_json(const WreathElement& u) {
  return {{"lamps", to_json(u.lamps)}, {"base", to_text(u.base)}};
}

}  // namespace wreathlab
