#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "keg/enumeration.hpp"
#include "keg/equilibrium.hpp"
#include "keg/experiment.hpp"
#include "keg/generator.hpp"
#include "keg/ia.hpp"
#include "keg/instance_io.hpp"

namespace py = pybind11;
using namespace keg;

namespace {

Instance parse(const std::string& text) { return instance_from_json(nlohmann::json::parse(text)); }

EdgeWeights welfare_weights(const Instance& inst) {
  const auto& g = inst.graph;
  EdgeWeights welfare(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    welfare[e] = g.is_internal(e) ? inst.weights.player_weight(g, g.kind(e).first, e) : inst.weights.ia_weight(e);
  return welfare;
}

}  // namespace

PYBIND11_MODULE(_keg, m) {
  m.doc() = "Kidney exchange game core (JSON in, JSON out)";

  m.def("max_matching", [](const std::string& instance) {
    auto inst = parse(instance);
    auto all = all_edges(inst.graph.graph());
    return matching_to_json(inst.graph, max_cardinality_matching(inst.graph.graph(), all)).dump();
  });

  m.def("count_matchings", [](const std::string& instance, int k, int cap) {
    auto inst = parse(instance);
    auto all = all_edges(inst.graph.graph());
    return count_matchings(inst.graph.graph(), all, k, cap).str();
  }, py::arg("instance"), py::arg("k"), py::arg("cap") = kDefaultVertexCap);

  m.def("sample", [](const std::string& instance, std::size_t n, std::uint64_t seed, int cap) {
    auto inst = parse(instance);
    auto all = all_edges(inst.graph.graph());
    nlohmann::json out = nlohmann::json::array();
    for (const auto& M : uniform_samples(inst.graph.graph(), all, n, seed, cap))
      out.push_back(matching_to_json(inst.graph, M));
    return out.dump();
  }, py::arg("instance"), py::arg("n"), py::arg("seed"), py::arg("cap") = kDefaultVertexCap);

  m.def("k_best", [](const std::string& instance, std::size_t k) {
    auto inst = parse(instance);
    auto all = all_edges(inst.graph.graph());
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : k_best_weighted(inst.graph.graph(), all, welfare_weights(inst), k))
      out.push_back({{"value", format_rational(r.value)}, {"matching", matching_to_json(inst.graph, r.matching)}});
    return out.dump();
  });

  m.def("verify", [](const std::string& instance, const std::string& matching, const std::string& strict) {
    auto inst = parse(instance);
    auto M = matching_from_json(inst.graph, nlohmann::json::parse(matching));
    VerifyOptions options;
    if (!strict.empty()) {
      options.assumption = IaAssumption::Strict;
      options.strict_policy = parse_policy(inst.graph, strict);
    }
    return report_to_json(inst.graph, verify_ne(inst.graph, inst.weights, M, options)).dump();
  }, py::arg("instance"), py::arg("matching"), py::arg("strict") = "");

  m.def("swe", [](const std::string& instance, const std::string& ia) {
    auto inst = parse(instance);
    auto M = swe_relaxation(inst.graph, compute_swe(inst.graph), parse_policy(inst.graph, ia));
    return matching_to_json(inst.graph, M).dump();
  }, py::arg("instance"), py::arg("ia") = "card");

  m.def("generate", [](const std::string& dist, int n, int year, std::uint64_t seed, const std::vector<std::string>& players) {
    auto config = generator_config_from_json(nlohmann::json::parse(dist));
    config.n_vertices = n;
    config.year = year;
    config.seed = seed;
    if (!players.empty()) config.player_subset = players;
    return instance_to_json(generate_instance(config)).dump();
  }, py::arg("dist"), py::arg("n"), py::arg("year"), py::arg("seed"), py::arg("players") = std::vector<std::string>{});

  m.def("experiment_row", [](const std::string& instance, const std::string& mode, std::size_t budget, std::uint64_t seed) {
    auto inst = parse(instance);
    ExperimentOptions options;
    options.sample_budget = budget;
    options.seed = seed;
    options.timings = false;
    auto row = mode == "weighted" ? run_weighted_experiment(inst, options) : run_cardinality_experiment(inst, options);
    return rows_to_json({row}).at(0).dump();
  }, py::arg("instance"), py::arg("mode") = "card", py::arg("budget") = 1000, py::arg("seed") = 7);
}
