#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "keg/instance_io.hpp"

namespace keg {

enum class BloodType { O, A, B, AB };

BloodType parse_blood(const std::string& text);
std::string blood_name(BloodType t);
// ABO rule: O gives to all, A to A/AB, B to B/AB, AB to AB.
bool abo_compatible(BloodType donor, BloodType patient);

struct BloodPairShare {
  BloodType patient;
  BloodType donor;
  Rational probability;
};

// Integer percent band [low, high], cPRA drawn uniformly in basis points.
struct CpraBand {
  int low;
  int high;
  Rational probability;
};

struct GeneratorConfig {
  int n_vertices = 0;
  int year = 2009;
  std::vector<std::pair<std::string, Rational>> provinces;
  // "default" plus optional per-province tables.
  std::map<std::string, std::vector<BloodPairShare>> blood_types;
  std::map<int, std::vector<CpraBand>> cpra_bands;
  std::vector<std::string> player_subset;  // empty: every province
  std::uint64_t seed = 0;
};

// Reads the distribution file; n_vertices, year, players and seed may also be
// given there. Throws std::invalid_argument with the offending field.
GeneratorConfig generator_config_from_json(const nlohmann::json& doc);
GeneratorConfig load_generator_config(const std::filesystem::path& path);
void validate(const GeneratorConfig& config);

struct GeneratedPair {
  PlayerId owner;
  BloodType patient_blood;
  BloodType donor_blood;
  int cpra_bp;  // cPRA in basis points, 0..10000
  Rational cpra() const { return Rational(cpra_bp, 10000); }
};

// Uniform integer in [0, n) by rejection; identical on every platform.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);
// Index drawn with probability proportional to the given exact shares.
std::size_t draw_share(std::mt19937_64& rng, const std::vector<Rational>& shares);

// Players of the generated game in order (subset or all provinces).
std::vector<std::string> generator_players(const GeneratorConfig& config);

// Steps 1 and 2: province, blood groups and cPRA per pair.
std::vector<GeneratedPair> generate_pairs(const GeneratorConfig& config, std::mt19937_64& rng);

// Step 3: one draw per vertex pair (a < b, ascending); an edge when both
// donors suit the other patient and the draw falls under
// (1 - cpra_a)(1 - cpra_b).
std::vector<std::pair<int, int>> compatibility_edges(const std::vector<GeneratedPair>& pairs, std::mt19937_64& rng);

// Full pipeline from config.seed; cardinality weights.
Instance generate_instance(const GeneratorConfig& config);

struct AgeWeights {
  std::vector<Rational> donor_weight;  // (max - x_u) / max per vertex
  WeightSystem weights;
};

// Bootstraps one donor age per vertex. A player values each of its patients
// receiving a kidney by the giving donor's weight: an international edge is
// worth the partner's donor weight to each side, an internal edge the sum of
// both donor weights to its owner.
AgeWeights generate_weights(const CompatibilityGraph& graph, const std::vector<Rational>& ages, std::uint64_t seed);

std::vector<Rational> load_ages(const std::filesystem::path& path);

}  // namespace keg
