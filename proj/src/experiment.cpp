#include "keg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "keg/equilibrium.hpp"
#include "keg/game.hpp"

namespace keg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string seconds_cell(const ExperimentOptions& options, double seconds) {
  if (!options.timings) return "na";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", seconds);
  return buf;
}

std::uint64_t row_seed(std::uint64_t seed, const ExperimentRow& row) {
  return seed + 1000003ULL * static_cast<std::uint64_t>(row.ins) + 7919ULL * static_cast<std::uint64_t>(row.vertices) +
         static_cast<std::uint64_t>(row.year);
}

ExperimentRow base_row(const Instance& instance, ExperimentMode mode, int ins) {
  ExperimentRow row;
  row.mode = mode;
  row.year = instance.meta.value("year", 0);
  row.vertices = instance.graph.num_vertices();
  row.ins = ins;
  row.edges = instance.graph.num_edges();
  return row;
}

void mark_time_limited(ExperimentRow& row) {
  row.time_limited = true;
  for (auto* cell : {&row.pct_ne, &row.pct_ne_draws, &row.epsilon, &row.iter, &row.imp_max, &row.players_max,
                     &row.imp_min, &row.players_min, &row.ia_high, &row.ia_low})
    *cell = "tl";
  if (row.mode == ExperimentMode::Cardinality) row.epsilon = row.iter = "";
}

std::string percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return "";
  return format_fixed(Rational(static_cast<std::int64_t>(part) * 100, static_cast<std::int64_t>(whole)), 2);
}

// Extremes of per-player improvements over the equilibria.
struct Extremes {
  std::optional<Rational> max, min;
  std::set<PlayerId> at_max, at_min;

  void add(PlayerId p, const Rational& v) {
    if (!max || v > *max) {
      max = v;
      at_max.clear();
    }
    if (v == *max) at_max.insert(p);
    if (!min || v < *min) {
      min = v;
      at_min.clear();
    }
    if (v == *min) at_min.insert(p);
  }
};

std::string player_list(const CompatibilityGraph& graph, const std::set<PlayerId>& players) {
  std::string out;
  for (PlayerId p : players) {
    if (!out.empty()) out += ' ';
    out += graph.player(p).label;
  }
  return out;
}

}  // namespace

ExperimentRow run_cardinality_experiment(const Instance& instance, const ExperimentOptions& options, int ins) {
  if (instance.weights.mode() != WeightMode::Cardinality)
    throw std::invalid_argument("cardinality experiment needs a cardinality instance");
  const auto& g = instance.graph;
  ExperimentRow row = base_row(instance, ExperimentMode::Cardinality, ins);

  const auto gen_start = Clock::now();
  auto all = all_edges(g.graph());
  std::optional<MatchingCounter> table;
  try {
    table.emplace(g.graph(), all, options.vertex_cap);
  } catch (const std::invalid_argument&) {
    // Beyond the sampler's vertex cap: reported like a generation time-out.
    row.best = std::to_string(max_cardinality_matching(g.graph(), all).size());
    mark_time_limited(row);
    row.count = row.time_gen = "tl";
    return row;
  }
  MatchingCounter& counter = *table;
  row.best = std::to_string(counter.max_cardinality());
  row.count = counter.count_maximum().str();
  std::mt19937_64 rng(row_seed(options.seed, row));
  std::vector<Matching> draws;
  for (std::size_t i = 0; i < options.sample_budget; ++i) {
    if (seconds_since(gen_start) > options.time_limit_gen) {
      mark_time_limited(row);
      row.time_gen = "tl";
      return row;
    }
    draws.push_back(counter.sample(rng));
  }
  row.time_gen = seconds_cell(options, seconds_since(gen_start));

  std::map<std::vector<EdgeId>, bool> unique;
  for (const auto& m : draws) unique.emplace(std::vector<EdgeId>(m.edges().begin(), m.edges().end()), false);
  row.candidates = unique.size();

  const auto ne_start = Clock::now();
  Extremes imp;
  std::optional<std::size_t> ia_high, ia_low;
  for (auto& [edges, is_ne] : unique) {
    if (seconds_since(ne_start) > options.time_limit_ne) {
      mark_time_limited(row);
      row.time_ne = "tl";
      return row;
    }
    auto report = verify_ne(g, instance.weights, Matching::from_edges(g.graph(), edges));
    if (report.verdict == Verdict::Unresolved) ++row.unresolved;
    if (!report.is_ne()) continue;
    is_ne = true;
    ++row.equilibria;
    for (PlayerId p = 0; p < g.num_players(); ++p) imp.add(p, report.per_player[p].improvement);
    const std::size_t transplants = 2 * report.international_edges;
    ia_high = std::max(ia_high.value_or(0), transplants);
    ia_low = std::min(ia_low.value_or(transplants), transplants);
  }
  row.time_ne = seconds_cell(options, row.candidates ? seconds_since(ne_start) / row.candidates : 0.0);

  std::size_t ne_draws = 0;
  for (const auto& m : draws) ne_draws += unique.at(std::vector<EdgeId>(m.edges().begin(), m.edges().end()));
  row.pct_ne = percent(row.equilibria, row.candidates);
  row.pct_ne_draws = percent(ne_draws, draws.size());
  if (imp.max) {
    row.imp_max = format_rational(*imp.max);
    row.players_max = player_list(g, imp.at_max);
    row.imp_min = format_rational(*imp.min);
    row.players_min = player_list(g, imp.at_min);
    row.ia_high = std::to_string(*ia_high);
    row.ia_low = std::to_string(*ia_low);
  }
  return row;
}

ExperimentRow run_weighted_experiment(const Instance& instance, const ExperimentOptions& options, int ins) {
  if (instance.weights.mode() != WeightMode::Weighted)
    throw std::invalid_argument("weighted experiment needs a weighted instance");
  const auto& g = instance.graph;
  const auto& w = instance.weights;
  ExperimentRow row = base_row(instance, ExperimentMode::Weighted, ins);

  EdgeWeights welfare(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    welfare[e] = g.is_internal(e) ? w.player_weight(g, g.kind(e).first, e) : w.ia_weight(e);

  const auto gen_start = Clock::now();
  bool gen_limited = false;
  auto all = all_edges(g.graph());
  auto ranked = k_best_weighted(g.graph(), all, welfare, options.sample_budget, [&] {
    gen_limited = seconds_since(gen_start) > options.time_limit_gen;
    return gen_limited;
  });
  row.best = format_fixed(ranked.front().value, 2);
  row.count = std::to_string(ranked.size());
  if (gen_limited) {
    mark_time_limited(row);
    row.time_gen = "tl";
    return row;
  }
  row.time_gen = seconds_cell(options, seconds_since(gen_start));
  row.candidates = ranked.size();

  const auto ne_start = Clock::now();
  std::optional<std::size_t> first;
  std::vector<EquilibriumReport> reports;
  std::vector<std::size_t> ne_index;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (seconds_since(ne_start) > options.time_limit_ne) {
      mark_time_limited(row);
      row.time_ne = "tl";
      return row;
    }
    auto report = verify_ne(g, w, ranked[i].matching);
    if (report.verdict == Verdict::Unresolved) ++row.unresolved;
    if (!report.is_ne()) continue;
    if (!first) first = i;
    ne_index.push_back(i);
    reports.push_back(std::move(report));
  }
  row.equilibria = reports.size();
  row.time_ne = seconds_cell(options, seconds_since(ne_start) / ranked.size());
  row.pct_ne = percent(row.equilibria, row.candidates);

  const Rational best = ranked.front().value;
  auto ratio = [&](const Rational& v) { return best == Rational(0) ? Rational(1) : v / best; };
  if (!first) {
    row.epsilon = "< " + format_fixed(ratio(ranked.back().value), 2);
    return row;
  }
  row.epsilon = format_fixed(ratio(ranked[*first].value), 2);
  row.iter = std::to_string(*first);
  const Rational scale = ranked[*first].value;
  Extremes imp;
  std::optional<Rational> ia_high, ia_low;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      Rational v = reports[j].per_player[p].improvement;
      imp.add(p, scale == Rational(0) ? v : v / scale);
    }
    const auto& m = ranked[ne_index[j]].matching;
    Rational fraction = m.size() == 0 ? Rational(0)
                                      : Rational(static_cast<std::int64_t>(reports[j].international_edges),
                                                 static_cast<std::int64_t>(m.size()));
    ia_high = ia_high ? std::max(*ia_high, fraction) : fraction;
    ia_low = ia_low ? std::min(*ia_low, fraction) : fraction;
  }
  row.imp_max = format_fixed(*imp.max, 2);
  row.players_max = player_list(g, imp.at_max);
  row.imp_min = format_fixed(*imp.min, 2);
  row.players_min = player_list(g, imp.at_min);
  row.ia_high = format_fixed(*ia_high, 2);
  row.ia_low = format_fixed(*ia_low, 2);
  return row;
}

std::vector<std::string> csv_header(ExperimentMode mode) {
  if (mode == ExperimentMode::Cardinality)
    return {"year",    "|V|",         "ins",     "|E|",         "|M|_max", "#|M|_max", "%#-NE",   "IMP_max",
            "Players_max", "IMP_min", "Players_min", "IA_high", "IA_low",   "time_gen", "time_NE"};
  return {"year",    "|V|",         "ins",     "|E|",     "W(M)_max", "K",        "%W-NE",  "epsilon", "iter",
          "IMP_max", "Players_max", "IMP_min", "Players_min", "IA_high", "IA_low", "time_gen", "time_NE"};
}

std::vector<std::string> csv_cells(const ExperimentRow& row) {
  std::vector<std::string> cells = {std::to_string(row.year), std::to_string(row.vertices), std::to_string(row.ins),
                                    std::to_string(row.edges), row.best, row.count, row.pct_ne};
  if (row.mode == ExperimentMode::Weighted) {
    cells.push_back(row.epsilon);
    cells.push_back(row.iter);
  }
  for (const auto* cell : {&row.imp_max, &row.players_max, &row.imp_min, &row.players_min, &row.ia_high, &row.ia_low,
                           &row.time_gen, &row.time_ne})
    cells.push_back(*cell);
  return cells;
}

std::string rows_to_csv(ExperimentMode mode, const std::vector<ExperimentRow>& rows) {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    return line + "\n";
  };
  std::string out = join(csv_header(mode));
  for (const auto& row : rows) {
    if (row.mode != mode) throw std::invalid_argument("row mode does not match the table");
    out += join(csv_cells(row));
  }
  return out;
}

nlohmann::json rows_to_json(const std::vector<ExperimentRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"mode", r.mode == ExperimentMode::Cardinality ? "card" : "weighted"},
                        {"year", r.year},
                        {"vertices", r.vertices},
                        {"ins", r.ins},
                        {"edges", r.edges},
                        {"best", r.best},
                        {"count", r.count},
                        {"pct_ne", r.pct_ne},
                        {"imp_max", r.imp_max},
                        {"players_max", r.players_max},
                        {"imp_min", r.imp_min},
                        {"players_min", r.players_min},
                        {"ia_high", r.ia_high},
                        {"ia_low", r.ia_low},
                        {"time_gen", r.time_gen},
                        {"time_ne", r.time_ne},
                        {"time_limited", r.time_limited},
                        {"candidates", r.candidates},
                        {"equilibria", r.equilibria},
                        {"unresolved", r.unresolved}};
    if (r.mode == ExperimentMode::Cardinality) {
      j["pct_ne_draws"] = r.pct_ne_draws;
    } else {
      j["epsilon"] = r.epsilon;
      j["iter"] = r.iter;
    }
    out.push_back(std::move(j));
  }
  return out;
}

void emit_results(ExperimentMode mode, const std::vector<ExperimentRow>& rows, OutputFormat format,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == OutputFormat::Csv)
    out << rows_to_csv(mode, rows);
  else
    out << rows_to_json(rows).dump(1) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExperimentRow> run_campaign(ExperimentMode mode, const std::vector<std::filesystem::path>& instances,
                                        const ExperimentOptions& options, int jobs) {
  std::vector<ExperimentRow> rows(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        auto inst = load_instance(instances[i]);
        int ins = inst.meta.value("ins", static_cast<int>(i) + 1);
        // A weighted file still defines the cardinality game on its graph.
        if (mode == ExperimentMode::Cardinality) inst.weights = WeightSystem::cardinality(inst.graph);
        rows[i] = mode == ExperimentMode::Cardinality ? run_cardinality_experiment(inst, options, ins)
                                                      : run_weighted_experiment(inst, options, ins);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.vertices, a.ins) < std::tie(b.year, b.vertices, b.ins);
  });
  return rows;
}

std::string pct_ne_svg(const std::vector<ExperimentRow>& rows) {
  const int bar = 28, gap = 8, height = 220, left = 50, top = 20;
  const int width = left + static_cast<int>(rows.size()) * (bar + gap) + 20;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + 80 << "\">\n";
  s << "<text x=\"" << left << "\" y=\"14\" font-size=\"12\">% NE per instance</text>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top + height << "\" x2=\"" << width - 10 << "\" y2=\"" << top + height
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 100; t += 25) {
    int y = top + height - t * height / 100;
    s << "<text x=\"" << left - 30 << "\" y=\"" << y + 4 << "\" font-size=\"10\">" << t << "</text>\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double pct = 0;
    try {
      pct = rows[i].pct_ne.empty() || rows[i].pct_ne == "tl" ? 0 : std::stod(rows[i].pct_ne);
    } catch (...) {
    }
    int h = static_cast<int>(pct * height / 100);
    int x = left + static_cast<int>(i) * (bar + gap) + gap;
    s << "<rect x=\"" << x << "\" y=\"" << top + height - h << "\" width=\"" << bar << "\" height=\"" << h
      << "\" fill=\"steelblue\"/>\n";
    s << "<text x=\"" << x << "\" y=\"" << top + height + 14 << "\" font-size=\"9\" transform=\"rotate(45 " << x << ","
      << top + height + 14 << ")\">" << rows[i].year << "/" << rows[i].vertices << "/" << rows[i].ins << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string histogram_svg(const std::vector<double>& values, int bins, const std::string& title) {
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  const int width = 420, height = 220, left = 40, top = 24;
  double lo = values.empty() ? 0 : *std::min_element(values.begin(), values.end());
  double hi = values.empty() ? 1 : *std::max_element(values.begin(), values.end());
  if (hi <= lo) hi = lo + 1;
  std::vector<int> counts(bins, 0);
  for (double v : values) ++counts[std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins))];
  int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + left + 20 << "\" height=\"" << height + 60
    << "\">\n";
  s << "<text x=\"" << left << "\" y=\"16\" font-size=\"12\">" << title << "</text>\n";
  const double bw = static_cast<double>(width) / bins;
  for (int b = 0; b < bins; ++b) {
    int h = counts[b] * height / peak;
    s << "<rect x=\"" << left + b * bw << "\" y=\"" << top + height - h << "\" width=\"" << bw - 1 << "\" height=\"" << h
      << "\" fill=\"gray\"/>\n";
  }
  s << "<text x=\"" << left << "\" y=\"" << top + height + 16 << "\" font-size=\"10\">" << lo << "</text>\n";
  s << "<text x=\"" << left + width - 20 << "\" y=\"" << top + height + 16 << "\" font-size=\"10\">" << hi
    << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace keg
