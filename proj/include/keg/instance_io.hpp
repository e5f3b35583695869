#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "keg/graph.hpp"
#include "keg/weights.hpp"

namespace keg {

// Biological attributes carried through files untouched by the game logic.
struct VertexInfo {
  std::optional<std::string> patient_blood;
  std::optional<std::string> donor_blood;
  std::optional<Rational> cpra;
};

struct Instance {
  CompatibilityGraph graph;
  WeightSystem weights;
  std::vector<VertexInfo> vertices;  // empty or one per vertex
  nlohmann::json meta = nlohmann::json::object();
};

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& instance);

// Matchings are written as [[u, v], ...] pairs in edge-id order.
nlohmann::json matching_to_json(const CompatibilityGraph& graph, const Matching& M);
Matching matching_from_json(const CompatibilityGraph& graph, const nlohmann::json& doc);

// Profiles are written as {label: [[u, v], ...]}.
nlohmann::json profile_to_json(const CompatibilityGraph& graph, const StrategyProfile& profile);
StrategyProfile profile_from_json(const CompatibilityGraph& graph, const nlohmann::json& doc);

}  // namespace keg
