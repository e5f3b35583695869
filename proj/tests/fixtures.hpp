#pragma once

// Small game graphs used across tests. Vertex numbers in the helper calls are
// 1-based to match the usual drawings; they are converted to 0-based ids.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "keg/graph.hpp"
#include "keg/instance_io.hpp"
#include "keg/weights.hpp"

namespace fixtures {

using keg::CompatibilityGraph;
using keg::EdgeId;
using keg::Matching;
using keg::PlayerId;

inline std::vector<keg::Player> players(int n) {
  std::vector<keg::Player> out;
  for (int p = 0; p < n; ++p) out.push_back({"P" + std::to_string(p + 1)});
  return out;
}

// owners1[i] is the 1-based player of 1-based vertex i+1.
inline CompatibilityGraph build(int num_players, const std::vector<int>& owners1,
                                const std::vector<std::pair<int, int>>& edges1) {
  std::vector<PlayerId> owner;
  for (int o : owners1) owner.push_back(o - 1);
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : edges1) edges.emplace_back(a - 1, b - 1);
  return CompatibilityGraph(players(num_players), owner, edges);
}

inline EdgeId edge(const CompatibilityGraph& g, int a1, int b1) { return g.edge_id(a1 - 1, b1 - 1); }

inline Matching matching(const CompatibilityGraph& g, const std::vector<std::pair<int, int>>& edges1) {
  std::vector<EdgeId> ids;
  for (auto [a, b] : edges1) ids.push_back(edge(g, a, b));
  return Matching::from_edges(g.graph(), ids);
}

// Path 1-...-7; player 1 owns {1,4,5,6}, player 2 owns {2,3,7}.
inline CompatibilityGraph path_game() {
  return build(2, {1, 2, 2, 1, 1, 1, 2}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
}

// Three players, 14 vertices, 13 edges.
inline CompatibilityGraph three_player_game() {
  return build(3, {1, 2, 3, 1, 1, 2, 3, 1, 1, 1, 3, 3, 1, 1},
               {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}, {10, 11}, {4, 12}, {5, 13},
                {13, 14}});
}

// Weighted 4-path: player 1 owns {1,3}, player 2 owns {2,4}.
inline CompatibilityGraph weighted_path_graph() { return build(2, {1, 2, 1, 2}, {{1, 2}, {2, 3}, {3, 4}}); }

inline keg::WeightSystem weighted_path_weights(const CompatibilityGraph& g) {
  // (1,2): player1 1, player2 5. (2,3): player2 1, player1 10. (3,4): player1 1, player2 5.
  std::vector<keg::EdgeValue> values(3);
  values[edge(g, 1, 2)] = {1, 5};
  values[edge(g, 2, 3)] = {1, 10};
  values[edge(g, 3, 4)] = {1, 5};
  return keg::WeightSystem::weighted(g, values);
}

// Star around vertex 1 (player 1); vertices 2,3 belong to player 3, vertex 4 to player 2.
inline CompatibilityGraph star_game() { return build(3, {1, 3, 3, 2}, {{1, 2}, {1, 3}, {1, 4}}); }

// Path 1..7 with player 1 {1,4,5,6}, player 3 {2}, player 2 {3,7}.
inline CompatibilityGraph deviation_path_game() {
  return build(3, {1, 3, 2, 1, 1, 1, 2}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
}

// Path 1..9 with player 1 {1,4,5,8}, player 3 {2,6}, player 2 {3,7,9}.
inline CompatibilityGraph long_deviation_path_game() {
  return build(3, {1, 3, 2, 1, 1, 3, 2, 1, 2}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}});
}

// Random game graph: n vertices spread over `num_players`, each pair an edge with probability `density`.
inline CompatibilityGraph random_game(std::mt19937_64& rng, int n, int num_players, double density) {
  std::vector<PlayerId> owner(n);
  for (int v = 0; v < n; ++v) owner[v] = static_cast<PlayerId>(rng() % num_players);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng) < density) edges.emplace_back(a, b);
  return CompatibilityGraph(players(num_players), owner, edges);
}

// Random game graph with at most max_edges edges.
inline CompatibilityGraph random_small_game(std::mt19937_64& rng, int n, int num_players, int max_edges) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  int m = static_cast<int>(rng() % (max_edges + 1));
  pairs.resize(std::min<std::size_t>(pairs.size(), m));
  std::vector<PlayerId> owner(n);
  for (int v = 0; v < n; ++v) owner[v] = static_cast<PlayerId>(rng() % num_players);
  return CompatibilityGraph(players(num_players), owner, pairs);
}

inline keg::WeightSystem random_weights(std::mt19937_64& rng, const CompatibilityGraph& g, int max_value) {
  std::vector<keg::EdgeValue> values;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    keg::Rational a(static_cast<std::int64_t>(rng() % (max_value + 1)), 1 + static_cast<std::int64_t>(rng() % 2));
    keg::Rational b = g.is_internal(e) ? keg::Rational(0)
                                       : keg::Rational(static_cast<std::int64_t>(rng() % (max_value + 1)));
    values.push_back({a, b});
  }
  return keg::WeightSystem::weighted(g, values);
}

}  // namespace fixtures
