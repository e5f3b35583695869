#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace keg {

using VertexId = int;
using EdgeId = int;
using PlayerId = int;

inline constexpr EdgeId kNoEdge = -1;

struct Endpoints {
  VertexId u;
  VertexId v;
};

// Plain undirected simple graph. Edge ids are assigned in insertion order and
// every endpoint pair is stored with u < v.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_vertices);

  VertexId add_vertex();
  EdgeId add_edge(VertexId a, VertexId b);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Endpoints& endpoints(EdgeId e) const { return edges_[e]; }
  VertexId opposite(EdgeId e, VertexId x) const { return edges_[e].u == x ? edges_[e].v : edges_[e].u; }
  std::span<const EdgeId> incident(VertexId x) const { return adjacency_[x]; }
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

 private:
  std::vector<Endpoints> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
};

// Every edge id of g in ascending order.
std::vector<EdgeId> all_edges(const Graph& g);

// A set of pairwise disjoint edges of some Graph. Immutable once built.
class Matching {
 public:
  Matching() = default;

  // Throws std::invalid_argument if two edges share a vertex or an id is out of range.
  static Matching from_edges(const Graph& g, std::vector<EdgeId> edges);

  std::span<const EdgeId> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool contains(EdgeId e) const;
  // kNoEdge when x is unmatched (or beyond the graph this matching was built on).
  EdgeId mate_edge(VertexId x) const;
  bool is_matched(VertexId x) const { return mate_edge(x) != kNoEdge; }

  friend bool operator==(const Matching& a, const Matching& b) { return a.edges_ == b.edges_; }
  friend bool operator<(const Matching& a, const Matching& b) { return a.edges_ < b.edges_; }

 private:
  std::vector<EdgeId> edges_;
  std::vector<EdgeId> mate_;
};

struct Player {
  std::string label;
};

// Declared kind of an edge: Internal(p) when first == second, International otherwise.
struct EdgeKind {
  PlayerId first;
  PlayerId second;
  bool internal() const { return first == second; }
};

struct EdgeRecord {
  VertexId u;
  VertexId v;
  EdgeKind kind;
};

// Raw description of a game graph, possibly invalid.
struct GraphParts {
  std::vector<Player> players;
  std::vector<PlayerId> owner;  // indexed by vertex
  std::vector<EdgeRecord> edges;
};

struct Violation {
  std::string location;  // e.g. "edge 3", "vertex 5", "player 1"
  std::string message;
};

std::vector<Violation> validate(const GraphParts& parts);

// Builds an edge list whose kinds are derived from the owner map.
EdgeRecord make_edge(const std::vector<PlayerId>& owner, VertexId a, VertexId b);

class CompatibilityGraph {
 public:
  CompatibilityGraph() = default;
  // Validates, then stores edges in canonical (min endpoint, max endpoint)
  // order so that edge ids are the canonical ranks. Throws std::invalid_argument
  // listing every violation.
  explicit CompatibilityGraph(GraphParts parts);
  // Convenience: kinds derived from owners.
  CompatibilityGraph(std::vector<Player> players, std::vector<PlayerId> owner,
                     const std::vector<std::pair<VertexId, VertexId>>& edges);

  int num_players() const { return static_cast<int>(players_.size()); }
  int num_vertices() const { return graph_.num_vertices(); }
  int num_edges() const { return graph_.num_edges(); }
  const std::vector<Player>& players() const { return players_; }
  const Player& player(PlayerId p) const;
  std::optional<PlayerId> find_player(const std::string& label) const;
  PlayerId owner(VertexId x) const { return owner_[x]; }
  const std::vector<PlayerId>& owners() const { return owner_; }
  const Graph& graph() const { return graph_; }
  const Endpoints& endpoints(EdgeId e) const { return graph_.endpoints(e); }
  const EdgeKind& kind(EdgeId e) const { return kinds_[e]; }
  bool is_internal(EdgeId e) const { return kinds_[e].internal(); }
  bool is_international(EdgeId e) const { return !kinds_[e].internal(); }
  bool touches(EdgeId e, PlayerId p) const { return kinds_[e].first == p || kinds_[e].second == p; }
  // Edge id of {a, b}; throws std::out_of_range if absent.
  EdgeId edge_id(VertexId a, VertexId b) const;

  const std::vector<VertexId>& vertices_of(PlayerId p) const { return vertices_of_.at(p); }
  const std::vector<EdgeId>& internal_edges(PlayerId p) const { return internal_.at(p); }
  const std::vector<EdgeId>& international_edges() const { return international_; }
  // International edges incident with V^p.
  const std::vector<EdgeId>& international_edges(PlayerId p) const { return international_of_.at(p); }

  GraphParts parts() const;

 private:
  std::vector<Player> players_;
  std::vector<PlayerId> owner_;
  std::vector<EdgeKind> kinds_;
  Graph graph_;
  std::vector<std::vector<VertexId>> vertices_of_;
  std::vector<std::vector<EdgeId>> internal_;
  std::vector<EdgeId> international_;
  std::vector<std::vector<EdgeId>> international_of_;
};

std::vector<Violation> validate(const CompatibilityGraph& graph);

// One internal matching per player.
struct StrategyProfile {
  std::vector<Matching> internal;

  static StrategyProfile empty(const CompatibilityGraph& graph);
  // Keeps the internal edges of M, split by owner.
  static StrategyProfile from_matching(const CompatibilityGraph& graph, const Matching& M);
  // Throws std::invalid_argument if a matching uses edges outside its player's internal set.
  void check(const CompatibilityGraph& graph) const;
  // Union of all internal matchings.
  Matching combined(const CompatibilityGraph& graph) const;
  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

struct InternalScope {
  PlayerId player;
};
struct InternationalScope {};
struct PlayerScope {
  PlayerId player;
};

Matching restrict(const CompatibilityGraph& graph, const Matching& M, InternalScope scope);
Matching restrict(const CompatibilityGraph& graph, const Matching& M, InternationalScope scope);
Matching restrict(const CompatibilityGraph& graph, const Matching& M, PlayerScope scope);

// International edges with neither endpoint matched by the profile.
std::vector<EdgeId> residual_international(const CompatibilityGraph& graph, const StrategyProfile& profile);

// Builds a matching from the union of edge lists (throws on conflicts).
Matching merge(const Graph& g, const Matching& a, const Matching& b);

}  // namespace keg
