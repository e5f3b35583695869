#include "keg/matching.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "weighted_blossom.hpp"

namespace keg {

namespace {

// Edmonds' blossom search for one augmenting path (BFS with base contraction).
class AugmentingSearch {
 public:
  AugmentingSearch(const Graph& g, std::span<const EdgeId> view) : g_(g), adj_(g.num_vertices()) {
    for (EdgeId e : view) {
      auto [u, v] = g.endpoints(e);
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
    const int n = g.num_vertices();
    parent_.resize(n);
    base_.resize(n);
    used_.resize(n);
    blossom_.resize(n);
  }

  bool has_edges(VertexId v) const { return !adj_[v].empty(); }

  // Returns the vertex sequence root ... free end, or empty.
  std::vector<VertexId> search(const std::vector<VertexId>& mate, VertexId root) {
    const int n = g_.num_vertices();
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    std::iota(base_.begin(), base_.end(), 0);
    used_[root] = 1;
    std::deque<VertexId> queue{root};
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (VertexId to : adj_[v]) {
        if (base_[v] == base_[to] || mate[v] == to) continue;
        if (to == root || (mate[to] != -1 && parent_[mate[to]] != -1)) {
          VertexId cur = lca(mate, v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(mate, v, cur, to);
          mark_path(mate, to, cur, v);
          for (VertexId i = 0; i < n; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                queue.push_back(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (mate[to] == -1) return trace(mate, to);
          used_[mate[to]] = 1;
          queue.push_back(mate[to]);
        }
      }
    }
    return {};
  }

 private:
  VertexId lca(const std::vector<VertexId>& mate, VertexId a, VertexId b) {
    std::vector<char> seen(g_.num_vertices(), 0);
    while (true) {
      a = base_[a];
      seen[a] = 1;
      if (mate[a] == -1) break;
      a = parent_[mate[a]];
    }
    while (true) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[mate[b]];
    }
  }

  void mark_path(const std::vector<VertexId>& mate, VertexId v, VertexId b, VertexId child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[mate[v]]] = 1;
      parent_[v] = child;
      child = mate[v];
      v = parent_[mate[v]];
    }
  }

  std::vector<VertexId> trace(const std::vector<VertexId>& mate, VertexId end) const {
    std::vector<VertexId> out;
    VertexId v = end;
    while (v != -1) {
      VertexId pv = parent_[v];
      out.push_back(v);
      out.push_back(pv);
      v = mate[pv];
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  const Graph& g_;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<VertexId> parent_, base_;
  std::vector<char> used_, blossom_;
};

std::vector<VertexId> mate_vertices(const Graph& g, const Matching& M) {
  std::vector<VertexId> mate(g.num_vertices(), -1);
  for (EdgeId e : M.edges()) {
    auto [u, v] = g.endpoints(e);
    mate[u] = v;
    mate[v] = u;
  }
  return mate;
}

AlternatingPath path_from_vertices(const Graph& g, std::vector<VertexId> vertices) {
  AlternatingPath path;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) path.edges.push_back(*g.find_edge(vertices[i], vertices[i + 1]));
  path.vertices = std::move(vertices);
  return path;
}

std::vector<EdgeId> sorted_unique(std::span<const EdgeId> edges) {
  std::vector<EdgeId> out(edges.begin(), edges.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Maximum weight over a subset of edges, on compacted vertex ids.
struct SubSolution {
  std::int64_t value = 0;
  std::vector<EdgeId> edges;
};

SubSolution solve_subset(const Graph& g, const std::vector<EdgeId>& edges, const std::vector<std::int64_t>& w) {
  std::vector<int> local(g.num_vertices(), -1);
  int n = 0;
  std::vector<detail::WeightedEdge> list;
  std::vector<EdgeId> ids;
  for (EdgeId e : edges) {
    if (w[e] <= 0) continue;
    auto [u, v] = g.endpoints(e);
    if (local[u] < 0) local[u] = n++;
    if (local[v] < 0) local[v] = n++;
    list.push_back({local[u], local[v], w[e]});
    ids.push_back(e);
  }
  SubSolution out;
  auto chosen = detail::solve_max_weight(n, list);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (chosen[k]) {
      out.value += list[k].w;
      out.edges.push_back(ids[k]);
    }
  }
  return out;
}

}  // namespace

std::optional<AlternatingPath> find_augmenting_path(const Graph& g, std::span<const EdgeId> view, const Matching& M,
                                                    VertexId start) {
  if (M.is_matched(start)) throw std::invalid_argument("augmenting path search must start at an unmatched vertex");
  AugmentingSearch search(g, view);
  auto vertices = search.search(mate_vertices(g, M), start);
  if (vertices.empty()) return std::nullopt;
  return path_from_vertices(g, std::move(vertices));
}

Matching symmetric_difference(const Graph& g, const Matching& M, const AlternatingPath& path) {
  if (!path.edges.empty() && path.vertices.size() != path.edges.size() + 1)
    throw std::invalid_argument("path vertex and edge lists disagree");
  for (std::size_t i = 0; i + 1 < path.edges.size(); ++i)
    if (M.contains(path.edges[i]) == M.contains(path.edges[i + 1]))
      throw std::invalid_argument("path does not alternate with respect to the matching");
  std::vector<EdgeId> edges(M.edges().begin(), M.edges().end());
  for (EdgeId e : path.edges) {
    auto it = std::find(edges.begin(), edges.end(), e);
    if (it == edges.end())
      edges.push_back(e);
    else
      edges.erase(it);
  }
  return Matching::from_edges(g, std::move(edges));
}

Matching max_cardinality_matching(const Graph& g, std::span<const EdgeId> view, const Matching& seed) {
  AugmentingSearch search(g, view);
  auto mate = mate_vertices(g, seed);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (mate[v] != -1 || !search.has_edges(v)) continue;
    auto path = search.search(mate, v);
    for (std::size_t i = 0; i + 1 < path.size(); i += 2) {
      mate[path[i]] = path[i + 1];
      mate[path[i + 1]] = path[i];
    }
  }
  std::vector<EdgeId> edges;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (mate[v] > v) edges.push_back(*g.find_edge(v, mate[v]));
  return Matching::from_edges(g, std::move(edges));
}

Matching max_weight_any(const Graph& g, std::span<const EdgeId> view, const std::vector<std::int64_t>& weights) {
  return Matching::from_edges(g, solve_subset(g, sorted_unique(view), weights).edges);
}

std::int64_t max_weight_value(const Graph& g, std::span<const EdgeId> view, const std::vector<std::int64_t>& weights) {
  return solve_subset(g, sorted_unique(view), weights).value;
}

std::optional<Matching> canonical_max_weight(const Graph& g, std::span<const EdgeId> view,
                                             const std::vector<std::int64_t>& w, std::span<const EdgeId> forced,
                                             std::span<const EdgeId> excluded) {
  auto order = sorted_unique(view);
  std::vector<char> in_view(g.num_edges(), 0), is_forced(g.num_edges(), 0), is_excluded(g.num_edges(), 0);
  for (EdgeId e : order) in_view[e] = 1;
  for (EdgeId e : excluded) is_excluded[e] = 1;
  std::vector<char> blocked(g.num_vertices(), 0);
  std::int64_t forced_weight = 0;
  int forced_count = 0;
  for (EdgeId e : sorted_unique(forced)) {
    if (!in_view[e] || is_excluded[e]) return std::nullopt;
    auto [u, v] = g.endpoints(e);
    if (blocked[u] || blocked[v]) return std::nullopt;
    blocked[u] = blocked[v] = 1;
    is_forced[e] = 1;
    forced_weight += w[e];
    ++forced_count;
  }
  auto free_edges_after = [&](std::size_t from, VertexId a, VertexId b) {
    std::vector<EdgeId> out;
    for (std::size_t i = from; i < order.size(); ++i) {
      EdgeId e = order[i];
      if (is_forced[e] || is_excluded[e]) continue;
      auto [u, v] = g.endpoints(e);
      if (blocked[u] || blocked[v] || u == a || u == b || v == a || v == b) continue;
      out.push_back(e);
    }
    return out;
  };

  auto base = solve_subset(g, free_edges_after(0, -1, -1), w);
  const std::int64_t target = forced_weight + base.value;
  std::vector<char> witness(g.num_edges(), 0);
  for (EdgeId e : base.edges) witness[e] = 1;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (is_forced[e]) witness[e] = 1;

  std::vector<EdgeId> chosen;
  std::int64_t chosen_weight = 0, forced_pending = forced_weight;
  int forced_taken = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (forced_taken == forced_count && chosen_weight == target) break;
    EdgeId e = order[i];
    if (is_excluded[e]) continue;
    if (is_forced[e]) {
      chosen.push_back(e);
      chosen_weight += w[e];
      forced_pending -= w[e];
      ++forced_taken;
      continue;
    }
    auto [u, v] = g.endpoints(e);
    if (blocked[u] || blocked[v]) continue;
    if (!witness[e]) {
      auto rest = solve_subset(g, free_edges_after(i + 1, u, v), w);
      if (chosen_weight + w[e] + forced_pending + rest.value != target) continue;
      std::fill(witness.begin(), witness.end(), 0);
      for (EdgeId x : chosen) witness[x] = 1;
      for (EdgeId x : rest.edges) witness[x] = 1;
      for (EdgeId x = 0; x < g.num_edges(); ++x)
        if (is_forced[x]) witness[x] = 1;
      witness[e] = 1;
    }
    chosen.push_back(e);
    chosen_weight += w[e];
    blocked[u] = blocked[v] = 1;
  }
  return Matching::from_edges(g, std::move(chosen));
}

Matching max_weight_matching(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights) {
  auto order = sorted_unique(view);
  std::vector<Rational> values;
  for (EdgeId e : order) {
    if (weights.at(e) < Rational(0)) throw std::invalid_argument("negative edge weight");
    values.push_back(weights[e]);
  }
  auto scaled = scale_to_integers(values);
  std::vector<std::int64_t> w(g.num_edges(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) w[order[i]] = scaled[i];
  return *canonical_max_weight(g, order, w);
}

std::vector<std::int64_t> dominance_weights(std::span<const EdgeId> view, const EdgeWeights& primary,
                                            const EdgeWeights& secondary, Sense sense) {
  auto order = sorted_unique(view);
  std::vector<Rational> p, s;
  for (EdgeId e : order) {
    p.push_back(primary.at(e));
    s.push_back(secondary.at(e));
  }
  auto pi = scale_to_integers(p);
  auto si = scale_to_integers(s);
  __int128 shift = 1;
  for (auto x : si) shift += x < 0 ? -x : x;
  const std::size_t size = primary.size();
  std::vector<std::int64_t> out(size, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    __int128 value = static_cast<__int128>(pi[i]) * shift + (sense == Sense::Maximize ? si[i] : -si[i]);
    if (value > (static_cast<__int128>(1) << 60) || value < -(static_cast<__int128>(1) << 60))
      throw std::overflow_error("combined weight too large");
    out[order[i]] = static_cast<std::int64_t>(value);
  }
  return out;
}

Matching max_cardinality_then_extreme_weight(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights,
                                             Sense sense) {
  EdgeWeights ones(g.num_edges(), Rational(1));
  for (EdgeId e : view)
    if (weights.at(e) < Rational(0)) throw std::invalid_argument("negative edge weight");
  auto w = dominance_weights(view, ones, weights, sense);
  return *canonical_max_weight(g, view, w);
}

Rational matching_weight(const Matching& M, const EdgeWeights& weights) {
  Rational total(0);
  for (EdgeId e : M.edges()) total += weights.at(e);
  return total;
}

}  // namespace keg
