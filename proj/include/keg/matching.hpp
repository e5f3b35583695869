#pragma once

#include <optional>
#include <span>
#include <vector>

#include "keg/graph.hpp"
#include "keg/rational.hpp"

namespace keg {

// A simple path; edges[i] joins vertices[i] and vertices[i + 1].
struct AlternatingPath {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

// Edge weights indexed by EdgeId over the whole graph.
using EdgeWeights = std::vector<Rational>;

// Augmenting path from an unmatched start vertex using only edges of `view`.
// Throws std::invalid_argument if start is matched.
std::optional<AlternatingPath> find_augmenting_path(const Graph& g, std::span<const EdgeId> view, const Matching& M,
                                                    VertexId start);

// M xor path. Throws std::invalid_argument if the path does not alternate w.r.t. M.
Matching symmetric_difference(const Graph& g, const Matching& M, const AlternatingPath& path);

// Augments from every unmatched vertex in ascending order until no augmenting path remains.
Matching max_cardinality_matching(const Graph& g, std::span<const EdgeId> view, const Matching& seed = {});

// Maximum total weight; among optimal matchings the one with the smallest
// sorted edge-id list (a proper prefix counts as smaller, so the empty matching
// wins whenever it is optimal).
Matching max_weight_matching(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights);

enum class Sense { Minimize, Maximize };

// Maximum cardinality first, then extreme weight, same tie rule.
Matching max_cardinality_then_extreme_weight(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights,
                                             Sense sense);

// Lexicographic objective (primary, then secondary in the given sense)
// folded into one integer weight per edge: w = P * S +/- s with
// S = 1 + sum |s| over the view, all after scaling to a common denominator.
// Any difference in total primary value is then worth at least S, more than
// the secondary terms can ever make up.
std::vector<std::int64_t> dominance_weights(std::span<const EdgeId> view, const EdgeWeights& primary,
                                            const EdgeWeights& secondary, Sense sense);

// Canonical optimum over integer weights (indexed by EdgeId), restricted to
// matchings that contain `forced` and avoid `excluded`. nullopt when the
// constraints are contradictory.
std::optional<Matching> canonical_max_weight(const Graph& g, std::span<const EdgeId> view,
                                             const std::vector<std::int64_t>& weights,
                                             std::span<const EdgeId> forced = {},
                                             std::span<const EdgeId> excluded = {});

// Some maximum weight matching over integer weights; no tie rule, one solver call.
Matching max_weight_any(const Graph& g, std::span<const EdgeId> view, const std::vector<std::int64_t>& weights);

// Value of a maximum weight matching (no tie rule needed).
std::int64_t max_weight_value(const Graph& g, std::span<const EdgeId> view, const std::vector<std::int64_t>& weights);

Rational matching_weight(const Matching& M, const EdgeWeights& weights);

}  // namespace keg
