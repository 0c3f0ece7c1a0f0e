#pragma once

// Flows on labeled Cayley graphs of F_d/N, Fox derivatives, the Magnus
// embedding F_d/[N,N] -> Z^d wr F_d/N, and free solvable groups S_{d,k}
// built recursively as flows over S_{d,k-1}.
//
// A word u traces a path from e in Cay(F_d/N); its flow counts the algebraic
// number of crossings of every positively labeled edge (g, g x_i, x_i).
// Two words agree in F_d/[N,N] exactly when their flows agree.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreathlab/group.hpp"
#include "wreathlab/wreath.hpp"

namespace wreathlab {

// Positively labeled edge (origin, origin * x_label); label is 0-based.
struct Edge {
  BaseElement origin;
  int label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.origin <=> b.origin; c != 0) return c;
    return a.label <=> b.label;
  }
};

// Finitely supported Edge -> Z over a quotient group; zero values are never stored.
class Flow {
 public:
  using Entry = std::pair<Edge, std::int64_t>;

  explicit Flow(GroupHandle quotient) : quotient_(std::move(quotient)) {}
  // Sorts, sums repeated edges, drops zeros.
  static Flow from_entries(GroupHandle quotient, std::vector<Entry> entries);

  const GroupHandle& quotient() const { return quotient_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::int64_t value(const Edge& e) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const Flow& a, const Flow& b) { return a.entries_ == b.entries_; }
  friend std::strong_ordering operator<=>(const Flow& a, const Flow& b);

 private:
  friend Flow flow_multiply_unchecked(const Flow& f, const BaseElement& f_endpoint, const Flow& g);
  friend Flow flow_inverse(const Flow& f, const BaseElement& endpoint);
  Flow(GroupHandle quotient, std::vector<Entry> sorted) : quotient_(std::move(quotient)), entries_(std::move(sorted)) {}

  GroupHandle quotient_;
  std::vector<Entry> entries_;
};

// Terminus t(e) = origin * x_label in the flow's quotient.
BaseElement edge_terminus(const Flow& f, const Edge& e);

Flow flow_of_word(std::string_view word, const GroupHandle& quotient);
// Net flow f*(g) = sum over edges leaving g minus sum over edges entering g.
std::int64_t net_flow(const Flow& f, const BaseElement& g);
// All vertices with nonzero net flow, sorted.
std::vector<std::pair<BaseElement, std::int64_t>> net_flows(const Flow& f);
// Either a circulation or unit source/sink; finite support is automatic.
bool is_geometric(const Flow& f);
// Sink of a geometric flow with source e; identity for circulations.
// Throws IntegrityError when the flow is not geometric with source e.
BaseElement flow_sink(const Flow& f);

// Path concatenation: f + (f_endpoint . g). Throws UsageError unless
// f_endpoint is the sink of f.
Flow flow_multiply(const Flow& f, const BaseElement& f_endpoint, const Flow& g);
Flow flow_multiply_unchecked(const Flow& f, const BaseElement& f_endpoint, const Flow& g);
// -(endpoint^{-1} . f), the flow of the reversed path.
Flow flow_inverse(const Flow& f, const BaseElement& endpoint);
Flow flow_inverse(const Flow& f);

nlohmann::json to_json(const Flow& f);
std::string to_text(const Flow& f);

// Finitely supported element of the integral group ring Z(Q); no zero coefficients.
struct GroupRingVector {
  std::vector<std::pair<BaseElement, std::int64_t>> terms;

  static GroupRingVector from_terms(std::vector<std::pair<BaseElement, std::int64_t>> terms);
  std::int64_t coefficient(const BaseElement& g) const;
  friend bool operator==(const GroupRingVector&, const GroupRingVector&) = default;
};

GroupRingVector add(const GroupRingVector& a, const GroupRingVector& b);
// Left multiplication by a group element: g * sum c_h h = sum c_h (gh).
GroupRingVector left_translate(const BaseElement& g, const GroupRingVector& v);

// pi(d_i u) read off the x_i-labeled edges of the flow of u (generator index 0-based).
GroupRingVector fox_derivative(std::string_view word, int generator, const GroupHandle& quotient);
// pi(d_i u) from the derivation rules d(uv) = d(u) + u d(v), d_i(x_j) = [i == j],
// d_i(x_j^{-1}) = -[i == j] x_j^{-1}, evaluated by divide and conquer.
GroupRingVector fox_derivative_by_rules(std::string_view word, int generator, const GroupHandle& quotient);

// Z^d wr Q for the rank-d quotient Q.
WreathGroup magnus_group(const GroupHandle& quotient);
// Lamp at g is (f((g, g x_i, x_i)))_i, base is pi(u).
WreathElement magnus_embed(std::string_view word, const GroupHandle& quotient);
WreathElement magnus_embed(const BaseElement& solvable);
// Product of the generator images (delta_e^{t_i}, pi(x_i)) in Z^d wr Q.
WreathElement magnus_embed_by_generators(std::string_view word, const GroupHandle& quotient);
// Inverse of the lamp read-off: rebuilds the flow from a Magnus image.
Flow flow_from_magnus(const WreathElement& image, const GroupHandle& quotient);

bool is_identity(std::string_view word, const GroupHandle& quotient);
bool words_equal(std::string_view u, std::string_view v, const GroupHandle& quotient);

// Element of S_{d,k}, k >= 2: a geometric flow over S_{d,k-1} with its sink cached.
class SolvableElement {
 public:
  static BaseElement make(Flow flow, BaseElement projection, int rank, int level);

  int rank() const { return rank_; }
  int level() const { return level_; }
  const Flow& flow() const { return flow_; }
  const BaseElement& projection() const { return projection_; }
  std::size_t hash() const { return hash_; }
  std::string to_text() const;

  friend bool operator==(const SolvableElement& a, const SolvableElement& b) {
    return a.rank_ == b.rank_ && a.level_ == b.level_ && a.flow_ == b.flow_;
  }
  friend std::strong_ordering operator<=>(const SolvableElement& a, const SolvableElement& b);

  SolvableElement(Flow flow, BaseElement projection, int rank, int level);

 private:
  Flow flow_;
  BaseElement projection_;
  int rank_;
  int level_;
  std::size_t hash_;
};

// theta(u) in S_{d,k}; an integer vector for k == 1.
BaseElement solvable_from_word(std::string_view word, int rank, int level);
BaseElement solvable_multiply(const BaseElement& a, const BaseElement& b);
BaseElement solvable_inverse(const BaseElement& a);

}  // namespace wreathlab
