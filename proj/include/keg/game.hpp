#pragma once

#include <vector>

#include "keg/graph.hpp"
#include "keg/ia.hpp"
#include "keg/weights.hpp"

namespace keg {

struct GameOutcome {
  StrategyProfile profile;
  Matching ia_matching;
  Matching overall;
  std::vector<Rational> utilities;
  Rational social_welfare;
};

// What edge e is worth to player p: in cardinality mode 2 for p's internal
// edges and 1 for international edges touching V^p; w^p_e otherwise.
Rational edge_value(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p, EdgeId e);

Rational utility(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p,
                 const StrategyProfile& profile, const Matching& ia_matching);

// Utility of p for an overall matching (internal and international edges mixed).
Rational utility_of(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p, const Matching& overall);

// Internal edges count w^p_e of their owner, international edges w^I_e; in
// cardinality mode this is the number of transplants.
Rational social_welfare(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& overall);

// Outcome of a profile together with a given international matching.
GameOutcome evaluate(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                     const Matching& ia_matching);

GameOutcome play(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                 const IaPolicy& policy);

// Best utility p can reach alone on G^p.
Rational solo_baseline(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p);

// Maximum weight internal matching of p (maximum cardinality in cardinality mode).
Matching best_internal_matching(const CompatibilityGraph& graph, const WeightSystem& weights, PlayerId p);

// sum_p 2|M^p| + |M^I(M)|. Diagnostic only: it is not a potential of the game.
Rational potential_phi(const CompatibilityGraph& graph, const StrategyProfile& profile, const IaPolicy& policy);

}  // namespace keg
