#include "keg/instance_io.hpp"

#include <fstream>
#include <stdexcept>

namespace keg {

using nlohmann::json;

namespace {

Rational read_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw std::invalid_argument("weights must be decimal strings or integers");
}

}  // namespace

Instance instance_from_json(const json& doc) {
  GraphParts parts;
  for (const auto& p : doc.at("players")) parts.players.push_back({p.at("label").get<std::string>()});
  std::vector<VertexInfo> info;
  bool any_info = false;
  for (const auto& v : doc.at("vertices")) {
    parts.owner.push_back(v.at("owner").get<PlayerId>());
    VertexInfo vi;
    if (v.contains("patient_blood")) vi.patient_blood = v["patient_blood"].get<std::string>();
    if (v.contains("donor_blood")) vi.donor_blood = v["donor_blood"].get<std::string>();
    if (v.contains("cpra")) vi.cpra = read_rational(v["cpra"]);
    any_info = any_info || vi.patient_blood || vi.donor_blood || vi.cpra;
    info.push_back(std::move(vi));
  }
  for (const auto& e : doc.at("edges"))
    parts.edges.push_back(make_edge(parts.owner, e.at("u").get<VertexId>(), e.at("v").get<VertexId>()));

  std::string mode = doc.value("mode", "cardinality");
  if (mode != "cardinality" && mode != "weighted") throw std::invalid_argument("unknown mode " + mode);
  Instance out;
  out.graph = CompatibilityGraph(parts);
  const auto& g = out.graph;
  if (any_info) out.vertices = std::move(info);
  if (doc.contains("meta")) out.meta = doc["meta"];

  std::vector<EdgeValue> values(g.num_edges(), EdgeValue{Rational(0), Rational(0)});
  for (const auto& e : doc.at("edges")) {
    EdgeId id = g.edge_id(e.at("u").get<VertexId>(), e.at("v").get<VertexId>());
    const auto& kind = g.kind(id);
    const std::string& first = g.player(kind.first).label;
    const std::string& second = g.player(kind.second).label;
    json weights = e.value("weights", json::object());
    for (const auto& [label, _] : weights.items())
      if (label != first && label != second)
        throw std::invalid_argument("edge weight for player " + label + " not incident with the edge");
    if (mode == "cardinality") {
      for (const auto& [label, w] : weights.items())
        if (read_rational(w) != Rational(1)) throw std::invalid_argument("cardinality instances carry unit weights only");
      continue;
    }
    if (!weights.contains(first) || (!kind.internal() && !weights.contains(second)))
      throw std::invalid_argument("weighted edge (" + std::to_string(g.endpoints(id).u) + "," +
                                  std::to_string(g.endpoints(id).v) + ") lacks a player weight");
    values[id].u_side = read_rational(weights[first]);
    if (!kind.internal()) values[id].v_side = read_rational(weights[second]);
    if (e.contains("ia_weight") && read_rational(e["ia_weight"]) != values[id].u_side + values[id].v_side)
      throw std::invalid_argument("ia_weight differs from the sum of the player weights");
  }
  out.weights = mode == "cardinality" ? WeightSystem::cardinality(g) : WeightSystem::weighted(g, std::move(values));
  return out;
}

json instance_to_json(const Instance& instance) {
  const auto& g = instance.graph;
  json doc;
  doc["mode"] = instance.weights.mode() == WeightMode::Weighted ? "weighted" : "cardinality";
  doc["players"] = json::array();
  for (const auto& p : g.players()) doc["players"].push_back({{"label", p.label}});
  doc["vertices"] = json::array();
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    json v = {{"owner", g.owner(x)}};
    if (!instance.vertices.empty()) {
      const auto& vi = instance.vertices.at(x);
      if (vi.patient_blood) v["patient_blood"] = *vi.patient_blood;
      if (vi.donor_blood) v["donor_blood"] = *vi.donor_blood;
      if (vi.cpra) v["cpra"] = format_rational(*vi.cpra);
    }
    doc["vertices"].push_back(v);
  }
  doc["edges"] = json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    json edge = {{"u", g.endpoints(e).u}, {"v", g.endpoints(e).v}};
    if (instance.weights.mode() == WeightMode::Weighted) {
      const auto& kind = g.kind(e);
      const auto& value = instance.weights.value(e);
      edge["weights"][g.player(kind.first).label] = format_rational(value.u_side);
      if (!kind.internal()) {
        edge["weights"][g.player(kind.second).label] = format_rational(value.v_side);
        edge["ia_weight"] = format_rational(instance.weights.ia_weight(e));
      }
    }
    doc["edges"].push_back(edge);
  }
  if (!instance.meta.empty()) doc["meta"] = instance.meta;
  return doc;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return instance_from_json(json::parse(in));
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << instance_to_json(instance).dump(1) << "\n";
}

json matching_to_json(const CompatibilityGraph& graph, const Matching& M) {
  json out = json::array();
  for (EdgeId e : M.edges()) out.push_back({graph.endpoints(e).u, graph.endpoints(e).v});
  return out;
}

Matching matching_from_json(const CompatibilityGraph& graph, const json& doc) {
  std::vector<EdgeId> edges;
  for (const auto& pair : doc) edges.push_back(graph.edge_id(pair.at(0).get<VertexId>(), pair.at(1).get<VertexId>()));
  return Matching::from_edges(graph.graph(), std::move(edges));
}

json profile_to_json(const CompatibilityGraph& graph, const StrategyProfile& profile) {
  json out = json::object();
  for (PlayerId p = 0; p < graph.num_players(); ++p)
    out[graph.player(p).label] = matching_to_json(graph, profile.internal.at(p));
  return out;
}

StrategyProfile profile_from_json(const CompatibilityGraph& graph, const json& doc) {
  auto profile = StrategyProfile::empty(graph);
  for (const auto& [label, edges] : doc.items()) {
    auto p = graph.find_player(label);
    if (!p) throw std::invalid_argument("unknown player " + label);
    profile.internal[*p] = matching_from_json(graph, edges);
  }
  profile.check(graph);
  return profile;
}

}  // namespace keg
