#include "keg/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace keg {

Graph::Graph(int num_vertices) : adjacency_(num_vertices) {}

VertexId Graph::add_vertex() {
  adjacency_.emplace_back();
  return num_vertices() - 1;
}

EdgeId Graph::add_edge(VertexId a, VertexId b) {
  if (a < 0 || b < 0 || a >= num_vertices() || b >= num_vertices())
    throw std::invalid_argument("edge endpoint out of range");
  if (a == b) throw std::invalid_argument("self-loop");
  if (find_edge(a, b)) throw std::invalid_argument("parallel edge");
  EdgeId id = num_edges();
  edges_.push_back({std::min(a, b), std::max(a, b)});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  return id;
}

std::optional<EdgeId> Graph::find_edge(VertexId a, VertexId b) const {
  if (a < 0 || a >= num_vertices()) return std::nullopt;
  for (EdgeId e : adjacency_[a])
    if (opposite(e, a) == b) return e;
  return std::nullopt;
}

std::vector<EdgeId> all_edges(const Graph& g) {
  std::vector<EdgeId> out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) out[e] = e;
  return out;
}

Matching Matching::from_edges(const Graph& g, std::vector<EdgeId> edges) {
  Matching m;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  m.mate_.assign(g.num_vertices(), kNoEdge);
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.num_edges()) throw std::invalid_argument("matching edge id out of range");
    auto [u, v] = g.endpoints(e);
    if (m.mate_[u] != kNoEdge || m.mate_[v] != kNoEdge)
      throw std::invalid_argument("edges " + std::to_string(e) + " and " +
                                  std::to_string(m.mate_[u] != kNoEdge ? m.mate_[u] : m.mate_[v]) +
                                  " share a vertex");
    m.mate_[u] = m.mate_[v] = e;
  }
  m.edges_ = std::move(edges);
  return m;
}

bool Matching::contains(EdgeId e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

EdgeId Matching::mate_edge(VertexId x) const {
  if (x < 0 || x >= static_cast<int>(mate_.size())) return kNoEdge;
  return mate_[x];
}

EdgeRecord make_edge(const std::vector<PlayerId>& owner, VertexId a, VertexId b) {
  auto side = [&](VertexId x) {
    return x >= 0 && x < static_cast<int>(owner.size()) ? owner[x] : -1;
  };
  return {a, b, {side(a), side(b)}};
}

std::vector<Violation> validate(const GraphParts& parts) {
  std::vector<Violation> out;
  const int n = static_cast<int>(parts.owner.size());
  const int np = static_cast<int>(parts.players.size());
  std::set<std::string> labels;
  for (int p = 0; p < np; ++p) {
    const auto& label = parts.players[p].label;
    if (label.empty()) out.push_back({"player " + std::to_string(p), "empty label"});
    if (!labels.insert(label).second) out.push_back({"player " + std::to_string(p), "duplicate label " + label});
  }
  for (int x = 0; x < n; ++x)
    if (parts.owner[x] < 0 || parts.owner[x] >= np)
      out.push_back({"vertex " + std::to_string(x), "owner out of range"});
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < parts.edges.size(); ++i) {
    const auto& e = parts.edges[i];
    std::string where = "edge " + std::to_string(i);
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      out.push_back({where, "endpoint out of range"});
      continue;
    }
    if (e.u == e.v) {
      out.push_back({where, "self-loop"});
      continue;
    }
    if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second) out.push_back({where, "parallel edge"});
    PlayerId a = parts.owner[e.u], b = parts.owner[e.v];
    bool consistent = (e.kind.first == a && e.kind.second == b) || (e.kind.first == b && e.kind.second == a);
    if (!consistent) out.push_back({where, "kind/owner mismatch"});
  }
  return out;
}

CompatibilityGraph::CompatibilityGraph(GraphParts parts) {
  auto violations = validate(parts);
  if (!violations.empty()) {
    std::string msg = "invalid compatibility graph:";
    for (const auto& v : violations) msg += " [" + v.location + ": " + v.message + "]";
    throw std::invalid_argument(msg);
  }
  players_ = std::move(parts.players);
  owner_ = std::move(parts.owner);
  auto& edges = parts.edges;
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  graph_ = Graph(static_cast<int>(owner_.size()));
  vertices_of_.assign(players_.size(), {});
  internal_.assign(players_.size(), {});
  international_of_.assign(players_.size(), {});
  for (VertexId x = 0; x < num_vertices(); ++x) vertices_of_[owner_[x]].push_back(x);
  for (const auto& r : edges) {
    EdgeId id = graph_.add_edge(r.u, r.v);
    EdgeKind kind{owner_[r.u], owner_[r.v]};
    kinds_.push_back(kind);
    if (kind.internal()) {
      internal_[kind.first].push_back(id);
    } else {
      international_.push_back(id);
      international_of_[kind.first].push_back(id);
      international_of_[kind.second].push_back(id);
    }
  }
}

CompatibilityGraph::CompatibilityGraph(std::vector<Player> players, std::vector<PlayerId> owner,
                                       const std::vector<std::pair<VertexId, VertexId>>& edges) {
  GraphParts parts{std::move(players), std::move(owner), {}};
  for (auto [a, b] : edges) parts.edges.push_back(make_edge(parts.owner, a, b));
  *this = CompatibilityGraph(std::move(parts));
}

const Player& CompatibilityGraph::player(PlayerId p) const {
  if (p < 0 || p >= num_players()) throw std::out_of_range("unknown player id " + std::to_string(p));
  return players_[p];
}

std::optional<PlayerId> CompatibilityGraph::find_player(const std::string& label) const {
  for (PlayerId p = 0; p < num_players(); ++p)
    if (players_[p].label == label) return p;
  return std::nullopt;
}

EdgeId CompatibilityGraph::edge_id(VertexId a, VertexId b) const {
  auto e = graph_.find_edge(a, b);
  if (!e) throw std::out_of_range("no edge between " + std::to_string(a) + " and " + std::to_string(b));
  return *e;
}

GraphParts CompatibilityGraph::parts() const {
  GraphParts out{players_, owner_, {}};
  for (EdgeId e = 0; e < num_edges(); ++e) out.edges.push_back({endpoints(e).u, endpoints(e).v, kinds_[e]});
  return out;
}

std::vector<Violation> validate(const CompatibilityGraph& graph) { return validate(graph.parts()); }

StrategyProfile StrategyProfile::empty(const CompatibilityGraph& graph) {
  return StrategyProfile{std::vector<Matching>(graph.num_players())};
}

StrategyProfile StrategyProfile::from_matching(const CompatibilityGraph& graph, const Matching& M) {
  std::vector<std::vector<EdgeId>> parts(graph.num_players());
  for (EdgeId e : M.edges())
    if (graph.is_internal(e)) parts[graph.kind(e).first].push_back(e);
  StrategyProfile out;
  for (auto& edges : parts) out.internal.push_back(Matching::from_edges(graph.graph(), std::move(edges)));
  return out;
}

void StrategyProfile::check(const CompatibilityGraph& graph) const {
  if (static_cast<int>(internal.size()) != graph.num_players())
    throw std::invalid_argument("profile has wrong number of players");
  for (PlayerId p = 0; p < graph.num_players(); ++p)
    for (EdgeId e : internal[p].edges())
      if (e < 0 || e >= graph.num_edges() || !graph.is_internal(e) || graph.kind(e).first != p)
        throw std::invalid_argument("profile of player " + std::to_string(p) + " uses edge " + std::to_string(e) +
                                    " outside its internal edges");
}

Matching StrategyProfile::combined(const CompatibilityGraph& graph) const {
  std::vector<EdgeId> edges;
  for (const auto& m : internal) edges.insert(edges.end(), m.edges().begin(), m.edges().end());
  return Matching::from_edges(graph.graph(), std::move(edges));
}

namespace {

template <class Pred>
Matching filter(const CompatibilityGraph& graph, const Matching& M, Pred keep) {
  std::vector<EdgeId> out;
  for (EdgeId e : M.edges())
    if (keep(e)) out.push_back(e);
  return Matching::from_edges(graph.graph(), std::move(out));
}

}  // namespace

Matching restrict(const CompatibilityGraph& graph, const Matching& M, InternalScope scope) {
  graph.player(scope.player);
  return filter(graph, M, [&](EdgeId e) { return graph.is_internal(e) && graph.kind(e).first == scope.player; });
}

Matching restrict(const CompatibilityGraph& graph, const Matching& M, InternationalScope) {
  return filter(graph, M, [&](EdgeId e) { return graph.is_international(e); });
}

Matching restrict(const CompatibilityGraph& graph, const Matching& M, PlayerScope scope) {
  graph.player(scope.player);
  return filter(graph, M, [&](EdgeId e) { return graph.touches(e, scope.player); });
}

std::vector<EdgeId> residual_international(const CompatibilityGraph& graph, const StrategyProfile& profile) {
  std::vector<char> matched(graph.num_vertices(), 0);
  for (const auto& m : profile.internal)
    for (EdgeId e : m.edges()) matched[graph.endpoints(e).u] = matched[graph.endpoints(e).v] = 1;
  std::vector<EdgeId> out;
  for (EdgeId e : graph.international_edges())
    if (!matched[graph.endpoints(e).u] && !matched[graph.endpoints(e).v]) out.push_back(e);
  return out;
}

Matching merge(const Graph& g, const Matching& a, const Matching& b) {
  std::vector<EdgeId> edges(a.edges().begin(), a.edges().end());
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());
  return Matching::from_edges(g, std::move(edges));
}

}  // namespace keg
