#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "keg/enumeration.hpp"
#include "keg/instance_io.hpp"

namespace keg {

enum class ExperimentMode { Cardinality, Weighted };

struct ExperimentOptions {
  std::size_t sample_budget = 1000;  // draws (cardinality) or K (weighted)
  std::uint64_t seed = 7;
  double time_limit_gen = 7200;  // seconds
  double time_limit_ne = 600;    // seconds, whole verification phase
  bool timings = true;           // false: time columns read "na"
  int vertex_cap = kDefaultVertexCap;
};

// One table row. Text cells are already formatted; empty cells stay empty
// and cells cut by a time limit read "tl".
struct ExperimentRow {
  ExperimentMode mode = ExperimentMode::Cardinality;
  int year = 0;
  int vertices = 0;
  int ins = 0;
  int edges = 0;
  std::string best;   // |M|_max or W(M)_max
  std::string count;  // #|M|_max or K
  std::string pct_ne;
  std::string pct_ne_draws;  // cardinality only: over raw draws
  std::string epsilon;
  std::string iter;
  std::string imp_max;
  std::string players_max;
  std::string imp_min;
  std::string players_min;
  std::string ia_high;
  std::string ia_low;
  std::string time_gen;
  std::string time_ne;
  bool time_limited = false;
  std::size_t candidates = 0;
  std::size_t equilibria = 0;
  std::size_t unresolved = 0;
};

ExperimentRow run_cardinality_experiment(const Instance& instance, const ExperimentOptions& options, int ins = 1);
ExperimentRow run_weighted_experiment(const Instance& instance, const ExperimentOptions& options, int ins = 1);

std::vector<std::string> csv_header(ExperimentMode mode);
std::vector<std::string> csv_cells(const ExperimentRow& row);
std::string rows_to_csv(ExperimentMode mode, const std::vector<ExperimentRow>& rows);
nlohmann::json rows_to_json(const std::vector<ExperimentRow>& rows);

enum class OutputFormat { Csv, Json };
void emit_results(ExperimentMode mode, const std::vector<ExperimentRow>& rows, OutputFormat format,
                  const std::filesystem::path& path);

// Runs every *.json instance of a directory (name order) on `jobs` threads;
// rows are sorted by (year, |V|, ins). ins comes from meta.ins, else the
// 1-based position in the directory. Cardinality mode ignores stored weights.
std::vector<ExperimentRow> run_campaign(ExperimentMode mode, const std::vector<std::filesystem::path>& instances,
                                        const ExperimentOptions& options, int jobs = 1);
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

// Simple SVG summaries.
std::string pct_ne_svg(const std::vector<ExperimentRow>& rows);
std::string histogram_svg(const std::vector<double>& values, int bins, const std::string& title);

}  // namespace keg
