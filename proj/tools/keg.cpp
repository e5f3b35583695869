#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "keg/enumeration.hpp"
#include "keg/equilibrium.hpp"
#include "keg/experiment.hpp"
#include "keg/generator.hpp"
#include "keg/ia.hpp"
#include "keg/instance_io.hpp"

using namespace keg;

namespace {

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-player kidney exchange game tools"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Draw a random instance");
  int gen_n = 0, gen_year = 0, gen_ins = 0;
  std::string gen_players, gen_dist, gen_out = "-", gen_ages;
  std::uint64_t gen_seed = 0, weight_seed = 0;
  gen->add_option("--n", gen_n, "Number of pairs")->required();
  gen->add_option("--year", gen_year, "Year of the cPRA table")->required();
  gen->add_option("--players", gen_players, "Comma separated provinces (default: all)");
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--dist", gen_dist, "Distribution file")->required()->check(CLI::ExistingFile);
  gen->add_option("-o,--out", gen_out, "Output instance file");
  gen->add_option("--ages", gen_ages, "Donor age file; makes a weighted instance")->check(CLI::ExistingFile);
  auto* weight_seed_opt = gen->add_option("--weight-seed", weight_seed, "Seed of the age bootstrap (default: --seed)");
  gen->add_option("--ins", gen_ins, "Instance number stored in meta.ins");

  // sample
  auto* smp = app.add_subcommand("sample", "Uniform maximum matchings, one JSON edge list per line");
  std::string smp_instance;
  std::size_t smp_n = 1;
  std::uint64_t smp_seed = 0;
  int smp_cap = kDefaultVertexCap;
  smp->add_option("--instance", smp_instance)->required()->check(CLI::ExistingFile);
  smp->add_option("--n", smp_n, "Number of draws");
  smp->add_option("--seed", smp_seed);
  smp->add_option("--cap", smp_cap, "Vertex cap of the counting table (at most 64)");

  // kbest
  auto* kb = app.add_subcommand("kbest", "K best matchings by social welfare");
  std::string kb_instance;
  std::size_t kb_k = 10;
  kb->add_option("--instance", kb_instance)->required()->check(CLI::ExistingFile);
  kb->add_option("--k", kb_k);

  // verify
  auto* ver = app.add_subcommand("verify", "Check whether a matching is a Nash equilibrium");
  std::string ver_instance, ver_matching, ver_strict;
  std::size_t ver_cuts = 10000;
  ver->add_option("--instance", ver_instance)->required()->check(CLI::ExistingFile);
  ver->add_option("--matching", ver_matching, "File with [[u, v], ...]")->required()->check(CLI::ExistingFile);
  ver->add_option("--strict", ver_strict, "Score with a fixed IA: card|lex|weighted|opt:<player>|pess:<player>");
  ver->add_option("--max-cuts", ver_cuts);

  // swe
  auto* swe = app.add_subcommand("swe", "Maximum matching that is an equilibrium (cardinality)");
  std::string swe_instance, swe_ia = "card";
  swe->add_option("--instance", swe_instance)->required()->check(CLI::ExistingFile);
  swe->add_option("--ia", swe_ia, "IA policy: card|lex|weighted|opt:<player>|pess:<player>");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run the experiment protocol over a directory of instances");
  std::string exp_mode = "card", exp_dir, exp_out = "-", exp_format = "csv", exp_plot, exp_plot_out, exp_ages;
  ExperimentOptions options;
  bool no_timings = false;
  int jobs = 1;
  exp->add_option("--mode", exp_mode)->check(CLI::IsMember({"card", "weighted"}));
  exp->add_option("--instances", exp_dir, "Directory of *.json instances")->check(CLI::ExistingDirectory);
  exp->add_option("--budget", options.sample_budget, "Draws (card) or K (weighted)");
  exp->add_option("--seed", options.seed);
  exp->add_option("--time-limit-gen", options.time_limit_gen, "Seconds");
  exp->add_option("--time-limit-ne", options.time_limit_ne, "Seconds");
  exp->add_option("--cap", options.vertex_cap, "Vertex cap of the sampler");
  exp->add_option("--out", exp_out);
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_flag("--no-timings", no_timings, "Write na in the time columns");
  exp->add_option("--jobs", jobs);
  exp->add_option("--plot", exp_plot)->check(CLI::IsMember({"pct-ne", "hist-age"}));
  exp->add_option("--plot-out", exp_plot_out, "SVG file (default: stdout)");
  exp->add_option("--ages", exp_ages, "Donor age file for hist-age")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorConfig config = load_generator_config(gen_dist);
      config.n_vertices = gen_n;
      config.year = gen_year;
      config.seed = gen_seed;
      if (!gen_players.empty()) config.player_subset = split_labels(gen_players);
      Instance inst = generate_instance(config);
      if (!gen_ages.empty()) {
        auto aw = generate_weights(inst.graph, load_ages(gen_ages), *weight_seed_opt ? weight_seed : gen_seed);
        inst.weights = aw.weights;
        inst.meta["weight_seed"] = *weight_seed_opt ? weight_seed : gen_seed;
      }
      if (gen_ins > 0) inst.meta["ins"] = gen_ins;
      write_text(gen_out, instance_to_json(inst).dump(2) + "\n");
    } else if (*smp) {
      Instance inst = load_instance(smp_instance);
      auto all = all_edges(inst.graph.graph());
      for (const auto& M : uniform_samples(inst.graph.graph(), all, smp_n, smp_seed, smp_cap))
        std::cout << matching_to_json(inst.graph, M).dump() << "\n";
    } else if (*kb) {
      Instance inst = load_instance(kb_instance);
      const auto& g = inst.graph;
      EdgeWeights welfare(g.num_edges());
      for (EdgeId e = 0; e < g.num_edges(); ++e)
        welfare[e] = g.is_internal(e) ? inst.weights.player_weight(g, g.kind(e).first, e) : inst.weights.ia_weight(e);
      auto all = all_edges(g.graph());
      for (const auto& r : k_best_weighted(g.graph(), all, welfare, kb_k))
        std::cout << nlohmann::json{{"value", format_rational(r.value)}, {"matching", matching_to_json(g, r.matching)}}.dump()
                  << "\n";
    } else if (*ver) {
      Instance inst = load_instance(ver_instance);
      Matching M = matching_from_json(inst.graph, read_json(ver_matching));
      VerifyOptions vo;
      vo.max_cuts = ver_cuts;
      if (!ver_strict.empty()) {
        vo.assumption = IaAssumption::Strict;
        vo.strict_policy = parse_policy(inst.graph, ver_strict);
      }
      auto report = verify_ne(inst.graph, inst.weights, M, vo);
      std::cout << report_to_json(inst.graph, report).dump(2) << "\n";
      return report.is_ne() ? 0 : 1;
    } else if (*swe) {
      Instance inst = load_instance(swe_instance);
      IaPolicy policy = parse_policy(inst.graph, swe_ia);
      Matching M = swe_relaxation(inst.graph, compute_swe(inst.graph), policy);
      std::cout << matching_to_json(inst.graph, M).dump() << "\n";
    } else if (*exp) {
      options.timings = !no_timings;
      auto mode = exp_mode == "card" ? ExperimentMode::Cardinality : ExperimentMode::Weighted;
      if (exp_plot == "hist-age") {
        if (exp_ages.empty()) throw std::invalid_argument("--plot hist-age needs --ages");
        std::vector<double> ages;
        for (const auto& a : load_ages(exp_ages)) ages.push_back(boost::rational_cast<double>(a));
        write_text(exp_plot_out, histogram_svg(ages, 20, "donor age"));
        if (exp_dir.empty()) return 0;
      }
      if (exp_dir.empty()) throw std::invalid_argument("--instances is required");
      auto rows = run_campaign(mode, list_instances(exp_dir), options, jobs);
      auto format = exp_format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
      if (exp_out.empty() || exp_out == "-")
        std::cout << (format == OutputFormat::Csv ? rows_to_csv(mode, rows) : rows_to_json(rows).dump(2) + "\n");
      else
        emit_results(mode, rows, format, exp_out);
      if (exp_plot == "pct-ne") write_text(exp_plot_out, pct_ne_svg(rows));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
