#pragma once

// Lamplighter-style wreath products A wr B = (+)_B A x| B with elements (f, b),
// multiplied as (f, b)(f', b') = (f (+) b.f', bb') where (b.f)(x) = f(b^{-1}x).

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreathlab/group.hpp"

namespace wreathlab {

// Finitely supported map B -> A. Entries are kept sorted by site and never
// store the lamp identity, so structural equality is equality of functions.
class LampConfig {
 public:
  using Entry = std::pair<BaseElement, BaseElement>;

  LampConfig() = default;
  // Sorts, multiplies repeated sites in the given order, drops identities.
  static LampConfig from_entries(std::vector<Entry> entries);
  static LampConfig delta(BaseElement site, BaseElement value);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<BaseElement> support() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // nullptr when the lamp at `site` is the identity.
  const BaseElement* find(const BaseElement& site) const;
  BaseElement value_or(const BaseElement& site, const BaseElement& lamp_identity) const;

  LampConfig filtered(const std::function<bool(const BaseElement& site)>& keep) const;

  friend bool operator==(const LampConfig&, const LampConfig&) = default;
  friend std::strong_ordering operator<=>(const LampConfig& a, const LampConfig& b);
  friend LampConfig translate_config(const BaseElement& b, const LampConfig& f);
  friend LampConfig pointwise_multiply(const LampConfig& f, const LampConfig& g);

 private:
  explicit LampConfig(std::vector<Entry> sorted) : entries_(std::move(sorted)) {}
  std::vector<Entry> entries_;
};

// (b.f)(x) = f(b^{-1} x)
LampConfig translate_config(const BaseElement& b, const LampConfig& f);
// Pointwise product f (+) g.
LampConfig pointwise_multiply(const LampConfig& f, const LampConfig& g);
LampConfig pointwise_inverse(const LampConfig& f);

struct WreathElement {
  LampConfig lamps;
  BaseElement base;

  std::size_t hash() const;
  friend bool operator==(const WreathElement&, const WreathElement&) = default;
  friend std::strong_ordering operator<=>(const WreathElement& a, const WreathElement& b);
};

WreathElement wreath_multiply(const WreathElement& u, const WreathElement& v);
WreathElement wreath_inverse(const WreathElement& u);

class WreathGroup {
 public:
  WreathGroup(GroupHandle lamp, GroupHandle base) : lamp_(std::move(lamp)), base_(std::move(base)) {}

  const GroupHandle& lamp() const { return lamp_; }
  const GroupHandle& base() const { return base_; }
  WreathElement identity() const { return {LampConfig{}, base_.identity()}; }
  bool contains(const WreathElement& u) const;
  std::string name() const;

  // a -> (delta_e^a, e)
  WreathElement embed_lamp(const BaseElement& a) const;
  // b -> (1, b)
  WreathElement embed_base(const BaseElement& b) const;

  // Fixture syntax: "delta(pos)=value ... | base", entries separated by
  // blanks or ';'. The "| base" part is optional (defaults to e).
  WreathElement parse(std::string_view text) const;
  LampConfig parse_config(std::string_view text) const;

  friend bool operator==(const WreathGroup&, const WreathGroup&) = default;

 private:
  GroupHandle lamp_;
  GroupHandle base_;
};

std::string to_text(const LampConfig& f);
std::string to_text(const WreathElement& u);
nlohmann::json to_json(const LampConfig& f);
nlohmann::json to_json(const WreathElement& u);

}  // namespace wreathlab

template <>
struct std::hash<wreathlab::WreathElement> {
  std::size_t operator()(const wreathlab::WreathElement& u) const noexcept { return u.hash(); }
};
