#pragma once

#include <vector>

#include "keg/graph.hpp"
#include "keg/rational.hpp"

namespace keg {

enum class WeightMode { Cardinality, Weighted };

// Valuation of one edge. For an international edge `u_side` is what the owner
// of the lower endpoint receives and `v_side` what the owner of the higher
// endpoint receives. An internal edge carries its whole value in `u_side`.
struct EdgeValue {
  Rational u_side;
  Rational v_side;
};

class WeightSystem {
 public:
  WeightSystem() = default;
  static WeightSystem cardinality(const CompatibilityGraph& graph);
  // Throws std::invalid_argument on negative weights, a size mismatch, or a
  // nonzero v_side on an internal edge.
  static WeightSystem weighted(const CompatibilityGraph& graph, std::vector<EdgeValue> values);

  WeightMode mode() const { return mode_; }
  // w^p_e: zero when e is not incident with V^p.
  Rational player_weight(const CompatibilityGraph& graph, PlayerId p, EdgeId e) const;
  // w^I_e for international edges, the player weight for internal ones.
  Rational ia_weight(EdgeId e) const;
  const EdgeValue& value(EdgeId e) const { return values_[e]; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const WeightSystem&, const WeightSystem&) = default;

 private:
  WeightMode mode_ = WeightMode::Cardinality;
  std::vector<EdgeValue> values_;
};

inline bool operator==(const EdgeValue& a, const EdgeValue& b) { return a.u_side == b.u_side && a.v_side == b.v_side; }

}  // namespace keg
