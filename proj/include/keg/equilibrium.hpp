#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "keg/game.hpp"
#include "keg/graph.hpp"
#include "keg/ia.hpp"
#include "keg/matching.hpp"
#include "keg/weights.hpp"

namespace keg {

struct DeviationCertificate {
  PlayerId player;
  Matching new_internal;
  Rational old_utility;
  Rational new_utility;
  Matching ia_response;
};

// ExistsFriendly: the candidate's own IA part is taken as the IA's choice
// (some deterministic IA picks it), while deviations are scored against the
// IA choice worst for the deviator. Strict: a fixed policy decides both.
enum class IaAssumption { ExistsFriendly, Strict };

struct VerifyOptions {
  IaAssumption assumption = IaAssumption::ExistsFriendly;
  // Only used in Strict mode.
  std::optional<IaPolicy> strict_policy;
  std::size_t max_cuts = 10000;
};

enum class BestResponseStatus { NoIncentive, Deviation, Unresolved };

struct BestResponseResult {
  BestResponseStatus status = BestResponseStatus::NoIncentive;
  std::optional<DeviationCertificate> certificate;
  std::size_t iterations = 0;
  std::vector<Rational> upper_bounds;  // one per iteration, non-increasing
};

// Does player p gain by replacing its internal matching, given the outcome
// (profile, ia_matching)? Iterates: best (internal, international) pair for p
// under no-good cuts as an upper bound, then scores the internal part under
// the adversarial (or strict) IA.
BestResponseResult best_response_exists(const CompatibilityGraph& graph, const WeightSystem& weights,
                                        const StrategyProfile& profile, const Matching& ia_matching, PlayerId p,
                                        const VerifyOptions& options = {});

// Among IA-optimal matchings for the profile, one minimizing p's utility.
Matching pessimistic_ia_response(const CompatibilityGraph& graph, const WeightSystem& weights,
                                 const StrategyProfile& profile, PlayerId p);

// Central mechanism view: a mechanism picks a maximum matching M over the
// whole graph (internal edges included). Player p may hide vertices and match
// them internally (x); the mechanism then picks a maximum matching of the
// remaining graph, the one worst for p. Returns the first x (in enumeration
// order) strictly better for p than M, cardinality utilities.
std::optional<DeviationCertificate> hiding_deviation(const CompatibilityGraph& graph, const Matching& M, PlayerId p);

enum class Verdict { Equilibrium, NotEquilibrium, Unresolved, IaInconsistent };

struct PlayerReport {
  Rational utility;
  Rational solo_baseline;
  Rational improvement;
};

struct EquilibriumReport {
  Verdict verdict = Verdict::Equilibrium;
  std::vector<PlayerReport> per_player;
  std::size_t international_edges = 0;
  std::optional<DeviationCertificate> certificate;
  bool is_ne() const { return verdict == Verdict::Equilibrium; }
};

// Splits the candidate into internal parts (the profile) and its
// international part (the IA choice) and checks every player in index order.
// A candidate whose international part is not IA-optimal for its own profile
// cannot be an outcome of the game and is reported as IaInconsistent.
EquilibriumReport verify_ne(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& candidate,
                            const VerifyOptions& options = {});

nlohmann::json report_to_json(const CompatibilityGraph& graph, const EquilibriumReport& report);

// Algorithm on the graph extended by one dummy neighbour per endpoint of each
// international edge of the seed: repeatedly flips the longest alternating
// path from an unmatched real vertex to a dummy edge. Returns a maximum
// matching of the original graph. Throws std::invalid_argument if the seed is
// not maximum. `search_budget` bounds the DFS nodes per path search.
Matching compute_swe(const CompatibilityGraph& graph, const Matching& seed, std::size_t search_budget = 2000000);
Matching compute_swe(const CompatibilityGraph& graph);

// Replaces the international part of tilde_M by the IA's choice, runs
// compute_swe, then walks the difference paths segment by segment, keeping a
// segment only while the IA's choice agrees with the resulting international
// edges. Finally applies deviations whose outcome under the policy stays
// maximum until no player has one.
Matching swe_relaxation(const CompatibilityGraph& graph, const Matching& tilde_M, const IaPolicy& policy);

// An alternating path in p's view of M from an unmatched vertex of V^p to a
// vertex of another player matched to V^p by an international edge of M.
// Throws std::invalid_argument if M is not maximum.
std::optional<AlternatingPath> detect_deviation_path(const CompatibilityGraph& graph, const Matching& M, PlayerId p,
                                                     std::size_t search_budget = 2000000);

// True when the IA's choice after flipping the path equals the flipped
// matching's international edges.
bool ia_agrees(const CompatibilityGraph& graph, const WeightSystem& weights, const Matching& M, const IaPolicy& policy);

}  // namespace keg
