#pragma once

#include <cstdint>
#include <vector>

namespace keg::detail {

struct WeightedEdge {
  int u;
  int v;
  std::int64_t w;
};

// Primal-dual blossom algorithm for maximum weight matching on a general
// graph with integer weights. Returns, for each edge, whether it is matched.
// O(n^3). Edges with nonpositive weight are never selected.
std::vector<char> solve_max_weight(int num_vertices, const std::vector<WeightedEdge>& edges);

}  // namespace keg::detail
