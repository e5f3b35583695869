#include "keg/game.hpp"

#include <stdexcept>

namespace keg {

Rational edge_value(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p, EdgeId e) {
  if (!graph.touches(e, p)) return Rational(0);
  if (weights.mode() == WeightMode::Cardinality) return Rational(graph.is_internal(e) ? 2 : 1);
  return weights.player_weight(graph, p, e);
}

Rational utility(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p,
                 const StrategyProfile& profile, const Matching& ia_matching) {
  graph.player(p);
  Rational total(0);
  for (EdgeId e : profile.internal.at(p).edges()) total += edge_value(graph, weights, p, e);
  for (EdgeId e : ia_matching.edges()) total += edge_value(graph, weights, p, e);
  return total;
}

Rational utility_of(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p, const Matching& overall) {
  Rational total(0);
  for (EdgeId e : overall.edges()) total += edge_value(graph, weights, p, e);
  return total;
}

Rational social_welfare(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& overall) {
  Rational total(0);
  for (EdgeId e : overall.edges()) {
    if (weights.mode() == WeightMode::Cardinality)
      total += 2;
    else
      total += graph.is_internal(e) ? weights.player_weight(graph, graph.kind(e).first, e) : weights.ia_weight(e);
  }
  return total;
}

GameOutcome evaluate(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                     const Matching& ia_matching) {
  profile.check(graph);
  for (EdgeId e : ia_matching.edges())
    if (!graph.is_international(e)) throw std::invalid_argument("IA matching contains an internal edge");
  GameOutcome out;
  out.profile = profile;
  out.ia_matching = ia_matching;
  out.overall = merge(graph.graph(), profile.combined(graph), ia_matching);
  for (PlayerId p = 0; p < graph.num_players(); ++p) out.utilities.push_back(utility_of(graph, weights, p, out.overall));
  out.social_welfare = social_welfare(graph, weights, out.overall);
  return out;
}

GameOutcome play(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                 const IaPolicy& policy) {
  return evaluate(graph, weights, profile, ia_decide(graph, weights, profile, policy));
}

Matching best_internal_matching(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p) {
  const auto& edges = graph.internal_edges(p);
  if (weights.mode() == WeightMode::Cardinality) {
    EdgeWeights ones(graph.num_edges(), Rational(1));
    return max_weight_matching(graph.graph(), edges, ones);
  }
  EdgeWeights w(graph.num_edges(), Rational(0));
  for (EdgeId e : edges) w[e] = weights.player_weight(graph, p, e);
  return max_weight_matching(graph.graph(), edges, w);
}

Rational solo_baseline(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p) {
  graph.player(p);
  return utility_of(graph, weights, p, best_internal_matching(graph, weights, p));
}

Rational potential_phi(const CompatibilityGraph& graph, const StrategyProfile& profile, const IaPolicy& policy) {
  auto weights = WeightSystem::cardinality(graph);
  Rational total(0);
  for (const auto& m : profile.internal) total += 2 * static_cast<std::int64_t>(m.size());
  total += static_cast<std::int64_t>(ia_decide(graph, weights, profile, policy).size());
  return total;
}

}  // namespace keg
