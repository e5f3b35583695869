#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "keg/graph.hpp"
#include "keg/matching.hpp"
#include "keg/weights.hpp"

namespace keg {

struct CardinalityCanonical {};
// Priority weights (see lexicographic_priority_weights); ties go to the
// matched counts of larger players first, then lower player index.
struct LexicographicPriority {};
struct WeightedCanonical {};
struct Optimistic {
  PlayerId player;
};
struct Pessimistic {
  PlayerId player;
};
// Hard-wired IA choices, keyed by the sorted internal edges of the whole
// profile. Lets a test pin the IA to a particular drawing.
struct TableIa {
  std::map<std::vector<EdgeId>, std::vector<EdgeId>> choices;
};

using IaPolicy = std::variant<CardinalityCanonical, LexicographicPriority, WeightedCanonical, Optimistic, Pessimistic,
                              TableIa>;

// The IA's international matching for a profile.
Matching ia_decide(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                   const IaPolicy& policy);

// Same, given the residual international edges directly. `profile_key` is
// only consulted by TableIa.
Matching ia_decide_residual(const CompatibilityGraph& graph, const WeightSystem& weights,
                            const std::vector<EdgeId>& residual, const IaPolicy& policy,
                            const std::vector<EdgeId>& profile_key = {});

// (|V^1| + |V^2|)|V| + |V^i| + |V^j| for every international edge between i and j,
// where V^1, V^2 are the two largest vertex sets (ties by player index).
std::map<EdgeId, Rational> lexicographic_priority_weights(const CompatibilityGraph& graph);

// "card", "lex", "weighted", "opt:<label>", "pess:<label>".
IaPolicy parse_policy(const CompatibilityGraph& graph, const std::string& text);
std::string policy_name(const CompatibilityGraph& graph, const IaPolicy& policy);

// Default policy for a weight mode.
IaPolicy default_policy(const WeightSystem& weights);

}  // namespace keg
