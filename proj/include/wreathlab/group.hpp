#pragma once

// Canonical-form group elements for the base and lamp group families:
// Z^d (integer vectors), Z/mZ (residues), F_d (freely reduced words) and
// free solvable groups S_{d,k} (flow-backed, see magnus.hpp).

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wreathlab {

class SolvableElement;

enum class Family { IntVector, Residue, ReducedWord, Solvable };

std::string_view family_name(Family f);

struct IntVector {
  std::vector<std::int64_t> coords;
  friend bool operator==(const IntVector&, const IntVector&) = default;
};

struct Residue {
  std::int64_t value = 0;
  std::int64_t modulus = 1;
  friend bool operator==(const Residue&, const Residue&) = default;
};

// Letters 'a'..'z' are x_1..x_26; uppercase letters are their inverses.
struct ReducedWord {
  std::string letters;
  int rank = 1;
  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
};

struct SolvableRef {
  std::shared_ptr<const SolvableElement> ptr;
};

// An element of one of the supported groups, always held in canonical form,
// so that structural equality is group equality.
class BaseElement {
 public:
  using Payload = std::variant<IntVector, Residue, ReducedWord, SolvableRef>;

  BaseElement();  // the trivial residue 0 mod 1
  explicit BaseElement(IntVector v) : payload_(std::move(v)) {}
  explicit BaseElement(ReducedWord w);
  BaseElement(std::int64_t value, std::int64_t modulus);
  explicit BaseElement(std::shared_ptr<const SolvableElement> s);

  static BaseElement vec(std::vector<std::int64_t> coords) { return BaseElement(IntVector{std::move(coords)}); }
  // Reduces the letter string; throws ParseError on letters outside the rank.
  static BaseElement word(std::string_view letters, int rank);

  Family family() const { return static_cast<Family>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  const IntVector& as_vector() const;
  const Residue& as_residue() const;
  const ReducedWord& as_word() const;
  const SolvableElement& as_solvable() const;
  const std::shared_ptr<const SolvableElement>& solvable_ptr() const;

  bool is_identity() const;
  std::size_t hash() const;

  friend bool operator==(const BaseElement& a, const BaseElement& b);
  friend std::strong_ordering operator<=>(const BaseElement& a, const BaseElement& b);

 private:
  Payload payload_;
};

BaseElement multiply(const BaseElement& g, const BaseElement& h);
BaseElement inverse(const BaseElement& g);

// Word length w.r.t. the standard generators (l1 norm, reduced length,
// cyclic distance). Throws UnsupportedError for solvable elements.
std::int64_t word_length(const BaseElement& g);
bool ball_membership(const BaseElement& g, std::int64_t radius);

// Canonical text: "1,-2,0" for Z^d, "3" for Z/m, "aB" for F_d ("e" when
// empty), and a recursive flow listing for solvable elements.
std::string to_text(const BaseElement& g);

// Free reduction of a letter string (no rank check).
std::string free_reduce(std::string_view letters);
std::string invert_word(std::string_view letters);
// Index 0..25 of a letter and whether it denotes an inverse generator.
int letter_index(char c);
bool letter_is_inverse(char c);
char letter_for(int index, bool inverse);
// Throws ParseError unless every character is a letter of index < rank.
void validate_word(std::string_view letters, int rank);

// Immutable description of one group: family, parameters, identity and the
// standard generators x_1..x_d together with their formal inverses.
class GroupHandle {
 public:
  static GroupHandle integers(int d);
  static GroupHandle cyclic(std::int64_t m);
  static GroupHandle trivial() { return cyclic(1); }
  static GroupHandle free_group(int d);
  // S_{d,k} = F_d / F_d^{(k)}; k == 1 yields integers(d).
  static GroupHandle free_solvable(int d, int k);

  Family family() const;
  // Number of standard generators x_i (d for Z^d, F_d, S_{d,k}; 1 for Z/m).
  int rank() const;
  std::int64_t modulus() const;  // Residue only, else 0
  int level() const;             // Solvable only, else 0
  bool is_finite() const;        // only Z/m
  bool has_word_length() const;

  const BaseElement& identity() const;
  // x_i (0-based index i).
  const BaseElement& generator(int i) const;
  const BaseElement& generator_inverse(int i) const;
  // x_1, x_1^{-1}, x_2, x_2^{-1}, ... with duplicates removed (Z/2).
  const std::vector<BaseElement>& symmetric_generators() const;
  // Every element of a finite group, in canonical order.
  std::vector<BaseElement> elements() const;

  // Handle of the quotient S_{d,k-1} in which level-k flows live.
  GroupHandle solvable_quotient() const;

  bool contains(const BaseElement& g) const;
  std::string name() const;  // "Z^2", "Z/4", "F_2", "S_{2,3}"

  BaseElement parse(std::string_view text) const;
  // Image of a word in this group (letters index the generators).
  BaseElement evaluate_word(std::string_view letters) const;

  friend bool operator==(const GroupHandle& a, const GroupHandle& b);

 private:
  struct Impl;
  static void fill_symmetric(Impl& impl);
  explicit GroupHandle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Parses "Z", "Z3", "Z^3", "Z/4", "1", "F2", "F_2", "S2,3", "S_{2,3}".
GroupHandle parse_group_spec(std::string_view spec);

}  // namespace wreathlab

template <>
struct std::hash<wreathlab::BaseElement> {
  std::size_t operator()(const wreathlab::BaseElement& g) const noexcept { return g.hash(); }
};
