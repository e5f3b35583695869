#include "keg/weights.hpp"

#include <stdexcept>

namespace keg {

WeightSystem WeightSystem::cardinality(const CompatibilityGraph& graph) {
  WeightSystem w;
  w.mode_ = WeightMode::Cardinality;
  for (EdgeId e = 0; e < graph.num_edges(); ++e)
    w.values_.push_back({Rational(1), graph.is_internal(e) ? Rational(0) : Rational(1)});
  return w;
}

WeightSystem WeightSystem::weighted(const CompatibilityGraph& graph, std::vector<EdgeValue> values) {
  if (static_cast<int>(values.size()) != graph.num_edges())
    throw std::invalid_argument("weight list does not match the edge count");
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    if (values[e].u_side < Rational(0) || values[e].v_side < Rational(0))
      throw std::invalid_argument("negative weight on edge " + std::to_string(e));
    if (graph.is_internal(e) && values[e].v_side != Rational(0))
      throw std::invalid_argument("internal edge " + std::to_string(e) + " carries a second weight");
  }
  WeightSystem w;
  w.mode_ = WeightMode::Weighted;
  w.values_ = std::move(values);
  return w;
}

Rational WeightSystem::player_weight(const CompatibilityGraph& graph, PlayerId p, EdgeId e) const {
  const auto& kind = graph.kind(e);
  Rational out(0);
  if (kind.first == p) out += values_[e].u_side;
  if (kind.second == p && !kind.internal()) out += values_[e].v_side;
  return out;
}

Rational WeightSystem::ia_weight(EdgeId e) const { return values_[e].u_side + values_[e].v_side; }

}  // namespace keg
