#include "keg/ia.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace keg {

namespace {

void check_player(const CompatibilityGraph& graph, PlayerId p) {
  if (p < 0 || p >= graph.num_players()) throw std::invalid_argument("IA policy names unknown player " + std::to_string(p));
}

void reject_cardinality_policy(const WeightSystem& weights, const char* name) {
  if (weights.mode() == WeightMode::Weighted)
    throw std::invalid_argument(std::string(name) + " IA policy needs a cardinality weight system");
}

Matching extreme_for_player(const CompatibilityGraph& graph, const WeightSystem& weights,
                            const std::vector<EdgeId>& residual, PlayerId p, Sense sense) {
  check_player(graph, p);
  EdgeWeights primary(graph.num_edges(), Rational(0)), secondary(graph.num_edges(), Rational(0));
  for (EdgeId e : residual) {
    primary[e] = weights.mode() == WeightMode::Cardinality ? Rational(1) : weights.ia_weight(e);
    secondary[e] = weights.player_weight(graph, p, e);
  }
  auto w = dominance_weights(residual, primary, secondary, sense);
  return *canonical_max_weight(graph.graph(), residual, w);
}

// Ties of the priority weights go to the matched-vertex counts compared
// player by player (larger players first, then lower index). The digits use
// base |V|+1; when that would overflow, a plain rank bonus is used instead.
EdgeWeights lexicographic_tie_weights(const CompatibilityGraph& graph, const std::vector<EdgeId>& residual) {
  const int n = graph.num_players();
  std::vector<PlayerId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](PlayerId a, PlayerId b) {
    return graph.vertices_of(a).size() > graph.vertices_of(b).size();
  });
  const double base = static_cast<double>(graph.num_vertices()) + 1;
  const double edges = static_cast<double>(std::max<std::size_t>(residual.size(), 1));
  const bool digits = 8 * base * base * base * edges * std::pow(base, n - 1) < 1e17;
  std::vector<std::int64_t> bonus(n, 0);
  std::int64_t digit = 1;
  for (int rank = n - 1; rank >= 0; --rank) {
    bonus[order[rank]] = digits ? digit : n - rank;
    digit *= static_cast<std::int64_t>(base);
    if (!digits) digit = 1;
  }
  EdgeWeights out(graph.num_edges(), Rational(0));
  for (EdgeId e : residual) {
    const auto& kind = graph.kind(e);
    out[e] = Rational(bonus[kind.first] + bonus[kind.second]);
  }
  return out;
}

}  // namespace

Matching ia_decide_residual(const CompatibilityGraph& graph, const WeightSystem& weights,
                            const std::vector<EdgeId>& residual, const IaPolicy& policy,
                            const std::vector<EdgeId>& profile_key) {
  const Graph& g = graph.graph();
  return std::visit(
      [&](const auto& pol) -> Matching {
        using T = std::decay_t<decltype(pol)>;
        if constexpr (std::is_same_v<T, CardinalityCanonical>) {
          reject_cardinality_policy(weights, "cardinality");
          EdgeWeights ones(graph.num_edges(), Rational(1));
          return max_weight_matching(g, residual, ones);
        } else if constexpr (std::is_same_v<T, LexicographicPriority>) {
          reject_cardinality_policy(weights, "lexicographic");
          EdgeWeights w(graph.num_edges(), Rational(0));
          for (const auto& [e, value] : lexicographic_priority_weights(graph)) w[e] = value;
          auto ties = lexicographic_tie_weights(graph, residual);
          return *canonical_max_weight(g, residual, dominance_weights(residual, w, ties, Sense::Maximize));
        } else if constexpr (std::is_same_v<T, WeightedCanonical>) {
          EdgeWeights w(graph.num_edges(), Rational(0));
          for (EdgeId e : residual) w[e] = weights.mode() == WeightMode::Cardinality ? Rational(1) : weights.ia_weight(e);
          return max_weight_matching(g, residual, w);
        } else if constexpr (std::is_same_v<T, Optimistic>) {
          return extreme_for_player(graph, weights, residual, pol.player, Sense::Maximize);
        } else if constexpr (std::is_same_v<T, Pessimistic>) {
          return extreme_for_player(graph, weights, residual, pol.player, Sense::Minimize);
        } else {
          auto it = pol.choices.find(profile_key);
          if (it == pol.choices.end()) throw std::out_of_range("IA table has no entry for this profile");
          for (EdgeId e : it->second)
            if (std::find(residual.begin(), residual.end(), e) == residual.end())
              throw std::invalid_argument("IA table picks an edge outside the residual international graph");
          return Matching::from_edges(g, it->second);
        }
      },
      policy);
}

Matching ia_decide(const CompatibilityGraph& graph, const WeightSystem& weights, const StrategyProfile& profile,
                   const IaPolicy& policy) {
  profile.check(graph);
  auto internal = profile.combined(graph);
  std::vector<EdgeId> key(internal.edges().begin(), internal.edges().end());
  return ia_decide_residual(graph, weights, residual_international(graph, profile), policy, key);
}

std::map<EdgeId, Rational> lexicographic_priority_weights(const CompatibilityGraph& graph) {
  if (graph.num_players() < 2) throw std::invalid_argument("lexicographic priority needs at least two players");
  std::vector<PlayerId> order(graph.num_players());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](PlayerId a, PlayerId b) {
    return graph.vertices_of(a).size() > graph.vertices_of(b).size();
  });
  const std::int64_t top = static_cast<std::int64_t>(graph.vertices_of(order[0]).size() + graph.vertices_of(order[1]).size());
  const std::int64_t n = graph.num_vertices();
  std::map<EdgeId, Rational> out;
  for (EdgeId e : graph.international_edges()) {
    const auto& kind = graph.kind(e);
    out[e] = Rational(top * n + static_cast<std::int64_t>(graph.vertices_of(kind.first).size() +
                                                          graph.vertices_of(kind.second).size()));
  }
  return out;
}

IaPolicy parse_policy(const CompatibilityGraph& graph, const std::string& text) {
  if (text == "card") return CardinalityCanonical{};
  if (text == "lex") return LexicographicPriority{};
  if (text == "weighted") return WeightedCanonical{};
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    std::string kind = text.substr(0, colon), label = text.substr(colon + 1);
    auto p = graph.find_player(label);
    if (!p) throw std::invalid_argument("unknown player in IA policy: " + label);
    if (kind == "opt") return Optimistic{*p};
    if (kind == "pess") return Pessimistic{*p};
  }
  throw std::invalid_argument("unknown IA policy: " + text);
}

std::string policy_name(const CompatibilityGraph& graph, const IaPolicy& policy) {
  return std::visit(
      [&](const auto& pol) -> std::string {
        using T = std::decay_t<decltype(pol)>;
        if constexpr (std::is_same_v<T, CardinalityCanonical>) return "card";
        else if constexpr (std::is_same_v<T, LexicographicPriority>) return "lex";
        else if constexpr (std::is_same_v<T, WeightedCanonical>) return "weighted";
        else if constexpr (std::is_same_v<T, Optimistic>) return "opt:" + graph.player(pol.player).label;
        else if constexpr (std::is_same_v<T, Pessimistic>) return "pess:" + graph.player(pol.player).label;
        else return "table";
      },
      policy);
}

IaPolicy default_policy(const WeightSystem& weights) {
  if (weights.mode() == WeightMode::Weighted) return WeightedCanonical{};
  return CardinalityCanonical{};
}

}  // namespace keg
