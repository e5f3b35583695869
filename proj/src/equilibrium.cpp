#include "keg/equilibrium.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "keg/instance_io.hpp"

namespace keg {

namespace {

std::int64_t common_denominator(const std::vector<Rational>& values) {
  std::int64_t l = 1;
  for (const auto& v : values) l = std::lcm(l, v.denominator());
  return l;
}

StrategyProfile with_internal(const StrategyProfile& profile, PlayerId p, const Matching& x) {
  StrategyProfile out = profile;
  out.internal[p] = x;
  return out;
}

// Best (internal matching x, international edges y) for p under no-good cuts,
// by depth-first branch and bound over p's internal edges.
class DeviationSearch {
 public:
  DeviationSearch(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                  PlayerId p)
      : g_(graph.graph()), internal_(graph.internal_edges(p)) {
    std::vector<char> opponent_matched(graph.num_vertices(), 0);
    for (PlayerId q = 0; q < graph.num_players(); ++q) {
      if (q == p) continue;
      for (EdgeId e : profile.internal[q].edges())
        opponent_matched[graph.endpoints(e).u] = opponent_matched[graph.endpoints(e).v] = 1;
    }
    for (EdgeId e : graph.international_edges(p))
      if (!opponent_matched[graph.endpoints(e).u] && !opponent_matched[graph.endpoints(e).v]) external_.push_back(e);
    std::vector<Rational> values;
    for (EdgeId e : internal_) values.push_back(edge_value(graph, weights, p, e));
    for (EdgeId e : external_) values.push_back(edge_value(graph, weights, p, e));
    scale_ = common_denominator(values);
    auto scaled = scale_to_integers(values);
    weight_.assign(graph.num_edges(), 0);
    for (std::size_t i = 0; i < internal_.size(); ++i) weight_[internal_[i]] = scaled[i];
    for (std::size_t i = 0; i < external_.size(); ++i) weight_[external_[i]] = scaled[internal_.size() + i];
    is_internal_.assign(graph.num_edges(), 0);
    for (EdgeId e : internal_) is_internal_[e] = 1;
  }

  struct Result {
    std::vector<EdgeId> x;
    Rational bound;
  };

  std::optional<Result> solve(const std::set<std::vector<EdgeId>>& cuts) {
    cuts_ = &cuts;
    best_value_ = -1;
    best_x_.clear();
    std::vector<EdgeId> chosen;
    std::vector<char> blocked(g_.num_vertices(), 0);
    branch(0, chosen, 0, blocked);
    if (best_value_ < 0) return std::nullopt;
    return Result{best_x_, Rational(best_value_, scale_)};
  }

 private:
  void branch(std::size_t i, std::vector<EdgeId>& chosen, std::int64_t chosen_value, std::vector<char>& blocked) {
    std::vector<EdgeId> view;
    for (std::size_t j = i; j < internal_.size(); ++j) {
      auto [u, v] = g_.endpoints(internal_[j]);
      if (!blocked[u] && !blocked[v]) view.push_back(internal_[j]);
    }
    for (EdgeId e : external_) {
      auto [u, v] = g_.endpoints(e);
      if (!blocked[u] && !blocked[v]) view.push_back(e);
    }
    auto relaxed = max_weight_any(g_, view, weight_);
    std::int64_t bound = chosen_value;
    std::vector<EdgeId> x = chosen;
    for (EdgeId e : relaxed.edges()) {
      bound += weight_[e];
      if (is_internal_[e]) x.push_back(e);
    }
    if (bound <= best_value_) return;
    std::sort(x.begin(), x.end());
    if (!cuts_->count(x)) {
      best_value_ = bound;
      best_x_ = x;
      return;
    }
    if (i == internal_.size()) return;
    EdgeId e = internal_[i];
    auto [u, v] = g_.endpoints(e);
    if (!blocked[u] && !blocked[v]) {
      blocked[u] = blocked[v] = 1;
      chosen.push_back(e);
      branch(i + 1, chosen, chosen_value + weight_[e], blocked);
      chosen.pop_back();
      blocked[u] = blocked[v] = 0;
    }
    branch(i + 1, chosen, chosen_value, blocked);
  }

  const Graph& g_;
  const std::vector<EdgeId>& internal_;
  std::vector<EdgeId> external_;
  std::vector<std::int64_t> weight_;
  std::vector<char> is_internal_;
  std::int64_t scale_ = 1;
  const std::set<std::vector<EdgeId>>* cuts_ = nullptr;
  std::int64_t best_value_ = -1;
  std::vector<EdgeId> best_x_;
};

// Optimal value of the IA's primary objective on a residual edge set.
Rational ia_primary_optimum(const CompatibilityGraph& graph, const WeightSystem& weights,
                            const std::vector<EdgeId>& residual) {
  std::vector<Rational> values;
  for (EdgeId e : residual) values.push_back(weights.mode() == WeightMode::Cardinality ? Rational(1) : weights.ia_weight(e));
  std::int64_t scale = common_denominator(values);
  auto scaled = scale_to_integers(values);
  std::vector<std::int64_t> w(graph.num_edges(), 0);
  for (std::size_t i = 0; i < residual.size(); ++i) w[residual[i]] = scaled[i];
  return Rational(max_weight_value(graph.graph(), residual, w), scale);
}

Rational ia_primary_value(const WeightSystem& weights, const Matching& M) {
  Rational total(0);
  for (EdgeId e : M.edges()) total += weights.mode() == WeightMode::Cardinality ? Rational(1) : weights.ia_weight(e);
  return total;
}

}  // namespace

Matching pessimistic_ia_response(const CompatibilityGraph& graph, const WeightSystem& weights,
                                 const StrategyProfile& profile, PlayerId p) {
  return ia_decide(graph, weights, profile, Pessimistic{p});
}

BestResponseResult best_response_exists(const CompatibilityGraph& graph, const WeightSystem& weights,
                                        const StrategyProfile& profile, const Matching& ia_matching, PlayerId p,
                                        const VerifyOptions& options) {
  graph.player(p);
  if (options.assumption == IaAssumption::Strict && !options.strict_policy)
    throw std::invalid_argument("strict verification needs an IA policy");
  const Rational lower = utility(graph, weights, p, profile, ia_matching);
  DeviationSearch search(graph, weights, profile, p);
  std::set<std::vector<EdgeId>> cuts;
  BestResponseResult result;
  while (true) {
    if (cuts.size() >= options.max_cuts) {
      result.status = BestResponseStatus::Unresolved;
      return result;
    }
    ++result.iterations;
    auto best = search.solve(cuts);
    if (!best) return result;
    result.upper_bounds.push_back(best->bound);
    if (best->bound <= lower) return result;
    auto x = Matching::from_edges(graph.graph(), best->x);
    auto deviated = with_internal(profile, p, x);
    auto response = options.assumption == IaAssumption::Strict ? ia_decide(graph, weights, deviated, *options.strict_policy)
                                                               : pessimistic_ia_response(graph, weights, deviated, p);
    Rational gained = utility(graph, weights, p, deviated, response);
    if (gained > lower) {
      result.status = BestResponseStatus::Deviation;
      result.certificate = DeviationCertificate{p, x, lower, gained, response};
      return result;
    }
    cuts.insert(best->x);
  }
}

std::optional<DeviationCertificate> hiding_deviation(const CompatibilityGraph& graph, const Matching& M, PlayerId p) {
  graph.player(p);
  auto w = WeightSystem::cardinality(graph);
  const Rational base = utility_of(graph, w, p, M);
  const auto& internal = graph.internal_edges(p);
  std::optional<DeviationCertificate> found;
  std::vector<EdgeId> x;
  std::vector<char> used(graph.num_vertices(), 0);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (found) return;
    if (i == internal.size()) {
      std::vector<EdgeId> view;
      EdgeWeights value(graph.num_edges(), Rational(0));
      for (EdgeId e = 0; e < graph.num_edges(); ++e) {
        if (used[graph.endpoints(e).u] || used[graph.endpoints(e).v]) continue;
        view.push_back(e);
        value[e] = edge_value(graph, w, p, e);
      }
      auto response = max_cardinality_then_extreme_weight(graph.graph(), view, value, Sense::Minimize);
      auto hidden = Matching::from_edges(graph.graph(), x);
      Rational gained = utility_of(graph, w, p, merge(graph.graph(), hidden, response));
      if (gained > base) found = DeviationCertificate{p, hidden, base, gained, response};
      return;
    }
    auto [u, v] = graph.endpoints(internal[i]);
    visit(i + 1);
    if (used[u] || used[v]) return;
    used[u] = used[v] = 1;
    x.push_back(internal[i]);
    visit(i + 1);
    x.pop_back();
    used[u] = used[v] = 0;
  };
  visit(0);
  return found;
}

EquilibriumReport verify_ne(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& candidate,
                            const VerifyOptions& options) {
  auto profile = StrategyProfile::from_matching(graph, candidate);
  auto ia = restrict(graph, candidate, InternationalScope{});
  EquilibriumReport report;
  report.international_edges = ia.size();
  for (PlayerId p = 0; p < graph.num_players(); ++p) {
    PlayerReport pr;
    pr.utility = utility(graph, weights, p, profile, ia);
    pr.solo_baseline = solo_baseline(graph, weights, p);
    pr.improvement = pr.utility - pr.solo_baseline;
    report.per_player.push_back(pr);
  }

  if (options.assumption == IaAssumption::Strict) {
    if (!options.strict_policy) throw std::invalid_argument("strict verification needs an IA policy");
    if (!(ia_decide(graph, weights, profile, *options.strict_policy) == ia)) {
      report.verdict = Verdict::IaInconsistent;
      return report;
    }
  } else if (ia_primary_value(weights, ia) != ia_primary_optimum(graph, weights, residual_international(graph, profile))) {
    report.verdict = Verdict::IaInconsistent;
    return report;
  }

  bool unresolved = false;
  for (PlayerId p = 0; p < graph.num_players(); ++p) {
    auto r = best_response_exists(graph, weights, profile, ia, p, options);
    if (r.status == BestResponseStatus::Deviation) {
      report.verdict = Verdict::NotEquilibrium;
      report.certificate = r.certificate;
      return report;
    }
    if (r.status == BestResponseStatus::Unresolved) unresolved = true;
  }
  report.verdict = unresolved ? Verdict::Unresolved : Verdict::Equilibrium;
  return report;
}

nlohmann::json report_to_json(const CompatibilityGraph& graph, const EquilibriumReport& report) {
  nlohmann::json out;
  out["is_ne"] = report.is_ne();
  const char* names[] = {"equilibrium", "not_equilibrium", "unresolved", "ia_inconsistent"};
  out["verdict"] = names[static_cast<int>(report.verdict)];
  out["per_player"] = nlohmann::json::array();
  for (PlayerId p = 0; p < static_cast<PlayerId>(report.per_player.size()); ++p) {
    const auto& pr = report.per_player[p];
    out["per_player"].push_back({{"player", graph.player(p).label},
                                 {"utility", format_rational(pr.utility)},
                                 {"solo_baseline", format_rational(pr.solo_baseline)},
                                 {"improvement", format_rational(pr.improvement)}});
  }
  out["international_edges"] = report.international_edges;
  if (report.certificate) {
    const auto& c = *report.certificate;
    out["certificate"] = {{"player", graph.player(c.player).label},
                          {"new_internal", matching_to_json(graph, c.new_internal)},
                          {"old_utility", format_rational(c.old_utility)},
                          {"new_utility", format_rational(c.new_utility)},
                          {"ia_response", matching_to_json(graph, c.ia_response)}};
  }
  return out;
}

namespace {

void require_maximum(const CompatibilityGraph& graph, const Matching& M) {
  auto all = all_edges(graph.graph());
  if (max_cardinality_matching(graph.graph(), all, M).size() != M.size())
    throw std::invalid_argument("matching is not of maximum cardinality");
}

// Longest alternating path (by edges) from `start`, first edge unmatched,
// ending with an unmatched edge into an unmatched vertex accepted by `is_end`.
// Ties keep the first path found; neighbours are explored in edge-id order.
class LongestPathSearch {
 public:
  LongestPathSearch(const Graph& g, const std::vector<EdgeId>& mate, std::function<bool(VertexId)> is_end,
                    std::size_t budget)
      : g_(g), mate_(mate), is_end_(std::move(is_end)), budget_(budget), on_path_(g.num_vertices(), 0) {}

  std::optional<AlternatingPath> run(VertexId start) {
    AlternatingPath current{{start}, {}};
    on_path_[start] = 1;
    extend(current);
    on_path_[start] = 0;
    return best_;
  }

 private:
  void extend(AlternatingPath& path) {
    if (spent_++ >= budget_) return;
    VertexId x = path.vertices.back();
    for (EdgeId e : g_.incident(x)) {
      if (mate_[x] == e) continue;
      VertexId y = g_.opposite(e, x);
      if (on_path_[y]) continue;
      if (mate_[y] == kNoEdge) {
        if (is_end_(y) && (!best_ || path.edges.size() + 1 > best_->edges.size())) {
          best_ = path;
          best_->vertices.push_back(y);
          best_->edges.push_back(e);
        }
        continue;
      }
      VertexId z = g_.opposite(mate_[y], y);
      if (on_path_[z]) continue;
      on_path_[y] = on_path_[z] = 1;
      path.vertices.push_back(y);
      path.edges.push_back(e);
      path.vertices.push_back(z);
      path.edges.push_back(mate_[y]);
      extend(path);
      path.vertices.resize(path.vertices.size() - 2);
      path.edges.resize(path.edges.size() - 2);
      on_path_[y] = on_path_[z] = 0;
    }
  }

  const Graph& g_;
  const std::vector<EdgeId>& mate_;
  std::function<bool(VertexId)> is_end_;
  std::size_t budget_;
  std::size_t spent_ = 0;
  std::vector<char> on_path_;
  std::optional<AlternatingPath> best_;
};

}  // namespace

Matching compute_swe(const CompatibilityGraph& graph, const Matching& seed, std::size_t search_budget) {
  require_maximum(graph, seed);
  const int n = graph.num_vertices();
  Graph extended(n);
  for (EdgeId e = 0; e < graph.num_edges(); ++e) extended.add_edge(graph.endpoints(e).u, graph.endpoints(e).v);
  for (EdgeId e : seed.edges()) {
    if (!graph.is_international(e)) continue;
    for (VertexId x : {graph.endpoints(e).u, graph.endpoints(e).v}) extended.add_edge(extended.add_vertex(), x);
  }
  std::vector<EdgeId> mate(extended.num_vertices(), kNoEdge);
  for (EdgeId e : seed.edges()) mate[graph.endpoints(e).u] = mate[graph.endpoints(e).v] = e;

  auto is_dummy = [n](VertexId x) { return x >= n; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v = 0; v < n; ++v) {
      if (mate[v] != kNoEdge) continue;
      LongestPathSearch search(extended, mate, is_dummy, search_budget);
      auto path = search.run(v);
      if (!path) continue;
      for (std::size_t i = 0; i < path->edges.size(); i += 2) {
        EdgeId e = path->edges[i];
        mate[extended.endpoints(e).u] = mate[extended.endpoints(e).v] = e;
      }
      changed = true;
    }
  }
  std::vector<EdgeId> edges;
  for (VertexId x = 0; x < n; ++x)
    if (mate[x] != kNoEdge && mate[x] < graph.num_edges()) edges.push_back(mate[x]);
  return Matching::from_edges(graph.graph(), std::move(edges));
}

Matching compute_swe(const CompatibilityGraph& graph) {
  return compute_swe(graph, max_cardinality_matching(graph.graph(), all_edges(graph.graph())));
}

bool ia_agrees(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& M, const IaPolicy& policy) {
  auto profile = StrategyProfile::from_matching(graph, M);
  return ia_decide(graph, weights, profile, policy) == restrict(graph, M, InternationalScope{});
}

namespace {

std::optional<AlternatingPath> find_deviation_path(const CompatibilityGraph& graph, const Matching& M, PlayerId p,
                                                   std::size_t search_budget,
                                                   const std::function<bool(const AlternatingPath&)>& accept);

// Splits a path (edges alternately added and removed, starting with an added
// edge) into runs whose internal edges belong to one player. A run may only
// end after a removed edge so that every prefix stays a matching.
std::vector<std::vector<EdgeId>> player_segments(const CompatibilityGraph& graph, const std::vector<EdgeId>& edges) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> current;
  PlayerId owner = -1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EdgeId e = edges[i];
    if (graph.is_internal(e)) {
      PlayerId q = graph.kind(e).first;
      bool can_cut = !current.empty() && i % 2 == 0;
      if (owner != -1 && q != owner && can_cut) {
        out.push_back(std::move(current));
        current.clear();
        owner = -1;
      }
      if (owner == -1) owner = q;
    }
    current.push_back(e);
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace

Matching swe_relaxation(const CompatibilityGraph& graph, const Matching& tilde_M, const IaPolicy& policy) {
  require_maximum(graph, tilde_M);
  auto weights = WeightSystem::cardinality(graph);
  auto profile = StrategyProfile::from_matching(graph, tilde_M);
  Matching M = merge(graph.graph(), profile.combined(graph), ia_decide(graph, weights, profile, policy));
  Matching target = compute_swe(graph, M);

  // Components of M xor target; cycles are skipped.
  std::vector<std::vector<EdgeId>> incident(graph.num_vertices());
  std::vector<char> in_diff(graph.num_edges(), 0);
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    if (M.contains(e) != target.contains(e)) {
      in_diff[e] = 1;
      incident[graph.endpoints(e).u].push_back(e);
      incident[graph.endpoints(e).v].push_back(e);
    }
  }
  std::vector<char> seen(graph.num_edges(), 0);
  std::vector<std::vector<EdgeId>> paths;
  for (VertexId start = 0; start < graph.num_vertices(); ++start) {
    // Path ends have one difference edge; start from the end left unmatched by M.
    if (incident[start].size() != 1 || M.is_matched(start) || seen[incident[start][0]]) continue;
    std::vector<EdgeId> path;
    VertexId x = start;
    EdgeId e = incident[start][0];
    while (e != kNoEdge && !seen[e]) {
      seen[e] = 1;
      path.push_back(e);
      x = graph.graph().opposite(e, x);
      EdgeId next = kNoEdge;
      for (EdgeId f : incident[x])
        if (!seen[f]) next = f;
      e = next;
    }
    paths.push_back(std::move(path));
  }

  for (const auto& path : paths) {
    for (const auto& segment : player_segments(graph, path)) {
      std::vector<EdgeId> edges(M.edges().begin(), M.edges().end());
      for (EdgeId e : segment) {
        auto it = std::find(edges.begin(), edges.end(), e);
        if (it == edges.end())
          edges.push_back(e);
        else
          edges.erase(it);
      }
      auto next = Matching::from_edges(graph.graph(), std::move(edges));
      if (!ia_agrees(graph, weights, next, policy)) break;
      M = std::move(next);
    }
  }

  // Tied longest paths can leave a player a deviation path. Apply the IA's
  // outcome of such a path while it stays maximum and pays the player.
  const std::size_t max_rounds = 4 * graph.num_vertices() * graph.num_vertices() + 16;
  const std::size_t maximum = M.size();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::optional<Matching> improved;
    for (PlayerId p = 0; p < graph.num_players() && !improved; ++p) {
      Rational current = utility_of(graph, weights, p, M);
      find_deviation_path(graph, M, p, 2000000, [&](const AlternatingPath& path) {
        auto profile = StrategyProfile::from_matching(graph, symmetric_difference(graph.graph(), M, path));
        Matching next = merge(graph.graph(), profile.combined(graph), ia_decide(graph, weights, profile, policy));
        if (next.size() != maximum || !(utility_of(graph, weights, p, next) > current)) return false;
        improved = std::move(next);
        return true;
      });
    }
    // Deviations that only pay through the IA's re-choice.
    for (PlayerId p = 0; p < graph.num_players() && !improved; ++p) {
      auto profile = StrategyProfile::from_matching(graph, M);
      auto ia = restrict(graph, M, InternationalScope{});
      auto response = best_response_exists(graph, weights, profile, ia, p, {IaAssumption::Strict, policy});
      if (response.status != BestResponseStatus::Deviation) continue;
      profile.internal[p] = response.certificate->new_internal;
      Matching next = merge(graph.graph(), profile.combined(graph), response.certificate->ia_response);
      if (next.size() == maximum) improved = std::move(next);
    }
    if (!improved) break;
    M = std::move(*improved);
  }
  return M;
}

namespace {

std::optional<AlternatingPath> find_deviation_path(const CompatibilityGraph& graph, const Matching& M, PlayerId p,
                                                   std::size_t search_budget,
                                                   const std::function<bool(const AlternatingPath&)>& accept) {
  std::vector<char> opponent_internal(graph.num_vertices(), 0);
  for (EdgeId e : M.edges())
    if (graph.is_internal(e) && graph.kind(e).first != p)
      opponent_internal[graph.endpoints(e).u] = opponent_internal[graph.endpoints(e).v] = 1;
  auto usable = [&](EdgeId e) {
    if (graph.is_internal(e)) return graph.kind(e).first == p;
    return !opponent_internal[graph.endpoints(e).u] && !opponent_internal[graph.endpoints(e).v];
  };

  std::vector<char> on_path(graph.num_vertices(), 0);
  std::size_t spent = 0;
  AlternatingPath path;
  std::function<bool()> extend = [&]() -> bool {
    if (spent++ >= search_budget) return false;
    VertexId x = path.vertices.back();
    for (EdgeId e : graph.graph().incident(x)) {
      if (M.contains(e) || !usable(e)) continue;
      VertexId y = graph.graph().opposite(e, x);
      EdgeId back = M.mate_edge(y);
      if (on_path[y] || back == kNoEdge || !usable(back)) continue;
      VertexId z = graph.graph().opposite(back, y);
      if (on_path[z]) continue;
      path.vertices.insert(path.vertices.end(), {y, z});
      path.edges.insert(path.edges.end(), {e, back});
      if (graph.is_international(back) && graph.owner(y) == p && graph.owner(z) != p && (!accept || accept(path)))
        return true;
      on_path[y] = on_path[z] = 1;
      if (extend()) return true;
      on_path[y] = on_path[z] = 0;
      path.vertices.resize(path.vertices.size() - 2);
      path.edges.resize(path.edges.size() - 2);
    }
    return false;
  };
  for (VertexId start : graph.vertices_of(p)) {
    if (M.is_matched(start)) continue;
    path = AlternatingPath{{start}, {}};
    on_path[start] = 1;
    bool found = extend();
    on_path[start] = 0;
    if (found) return path;
  }
  return std::nullopt;
}

}  // namespace

std::optional<AlternatingPath> detect_deviation_path(const CompatibilityGraph& graph, const Matching& M, PlayerId p,
                                                     std::size_t search_budget) {
  graph.player(p);
  require_maximum(graph, M);
  return find_deviation_path(graph, M, p, search_budget, {});
}

}  // namespace keg
