// Acceptance run: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "keg/enumeration.hpp"
#include "keg/equilibrium.hpp"
#include "keg/experiment.hpp"
#include "keg/game.hpp"
#include "keg/generator.hpp"
#include "keg/ia.hpp"
#include "oracle.hpp"

using namespace keg;
using fixtures::matching;

namespace {

// Collects failed checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

std::vector<EdgeId> ids(const Matching& m) { return {m.edges().begin(), m.edges().end()}; }

// path_game: max size 3, the four size-3 matchings, and the deviations
// against each of them.
void path_golden(Check& check) {
  auto g = fixtures::path_game();
  auto w = WeightSystem::cardinality(g);
  auto edges = all_edges(g.graph());
  check(max_cardinality_matching(g.graph(), edges).size() == 3, "maximum size is 3");
  check(count_matchings(g.graph(), edges, 3) == 4, "count of size-3 matchings is 4");
  std::set<std::vector<EdgeId>> enumerated, oracle_set;
  for (const auto& m : enumerate_all_matchings(g.graph(), edges))
    if (m.size() == 3) enumerated.insert(ids(m));
  for (const auto& m : oracle::all_matchings(g.graph(), edges))
    if (m.size() == 3) oracle_set.insert(m);
  auto M = matching(g, {{2, 3}, {4, 5}, {6, 7}});
  auto R = matching(g, {{1, 2}, {3, 4}, {5, 6}});
  auto S = matching(g, {{1, 2}, {4, 5}, {6, 7}});
  auto T = matching(g, {{1, 2}, {3, 4}, {6, 7}});
  std::set<std::vector<EdgeId>> expected = {ids(M), ids(R), ids(S), ids(T)};
  check(enumerated == expected, "enumeration gives exactly M, R, S, T");
  check(oracle_set == expected, "oracle gives exactly M, R, S, T");

  struct Named {
    const Matching* outcome;
    PlayerId player;
    std::pair<int, int> edge;
    const char* name;
  };
  for (const auto& c : {Named{&M, 0, {5, 6}, "M"}, Named{&T, 0, {5, 6}, "T"}, Named{&R, 1, {2, 3}, "R"},
                        Named{&S, 1, {2, 3}, "S"}}) {
    auto cert = hiding_deviation(g, *c.outcome, c.player);
    check(cert && cert->player == c.player && cert->new_internal == matching(g, {c.edge}) &&
              cert->new_utility > cert->old_utility,
          std::string("deviation certificate against ") + c.name);
  }
  auto t = verify_ne(g, w, T);
  check(t.certificate && t.certificate->player == 0 && t.certificate->new_utility > t.certificate->old_utility,
        "decomposed game: player 1 deviates against T");
  auto s = verify_ne(g, w, S);
  check(s.certificate && s.certificate->player == 1 && s.certificate->new_internal == matching(g, {{2, 3}}),
        "decomposed game: player 2 deviates via (2,3) against S");
}

// three_player_game with the IA pinned per panel.
void three_player_golden(Check& check) {
  auto g = fixtures::three_player_game();
  auto cw = WeightSystem::cardinality(g);
  auto key = [&](std::vector<std::pair<int, int>> e) { return ids(matching(g, e)); };
  TableIa table;
  table.choices[key({{5, 13}, {8, 9}})] = key({{2, 3}, {4, 12}, {6, 7}, {10, 11}});
  table.choices[key({{4, 5}, {13, 14}, {8, 9}})] = key({{2, 3}, {6, 7}, {10, 11}});
  table.choices[key({{13, 14}, {9, 10}})] = key({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  std::vector<std::vector<std::pair<int, int>>> panels = {
      {{5, 13}, {8, 9}}, {{4, 5}, {13, 14}, {8, 9}}, {{13, 14}, {9, 10}}};
  std::vector<Rational> utilities, phis;
  for (const auto& panel : panels) {
    auto profile = StrategyProfile::empty(g);
    profile.internal[0] = matching(g, panel);
    utilities.push_back(play(g, cw, profile, table).utilities[0]);
    phis.push_back(potential_phi(g, profile, table));
  }
  check(utilities == std::vector<Rational>{Rational(6), Rational(7), Rational(8)}, "player-1 utilities 6, 7, 8");
  check(phis == std::vector<Rational>{Rational(8), Rational(9), Rational(8)}, "potential values 8, 9, 8");
}

// weighted_path: the IA optimum and the effect of hiding vertex 1.
void weighted_path_golden(Check& check) {
  auto g = fixtures::weighted_path_graph();
  auto w = fixtures::weighted_path_weights(g);
  auto out = play(g, w, StrategyProfile::empty(g), WeightedCanonical{});
  check(out.ia_matching == matching(g, {{1, 2}, {3, 4}}), "IA optimum {(1,2),(3,4)}");
  Rational value(0);
  for (EdgeId e : out.ia_matching.edges()) value += w.ia_weight(e);
  check(value == Rational(12), "IA optimum value 12");
  check(out.utilities == std::vector<Rational>{Rational(2), Rational(10)}, "utilities (2, 10)");

  // Vertices 2, 3, 4 renumbered 0, 1, 2.
  CompatibilityGraph hidden(fixtures::players(2), {1, 0, 1}, {{0, 1}, {1, 2}});
  std::vector<EdgeValue> values(2);
  values[hidden.edge_id(0, 1)] = {Rational(1), Rational(10)};
  values[hidden.edge_id(1, 2)] = {Rational(1), Rational(5)};
  auto hw = WeightSystem::weighted(hidden, values);
  auto hout = play(hidden, hw, StrategyProfile::empty(hidden), WeightedCanonical{});
  check(hout.ia_matching == Matching::from_edges(hidden.graph(), {hidden.edge_id(0, 1)}), "IA picks (2,3) after hiding");
  check(hout.utilities[0] == Rational(10), "player 1 gets 10 after hiding");
}

void swe_property(Check& check) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 500; ++round) {
    int n = 4 + static_cast<int>(rng() % 9);
    int np = 2 + static_cast<int>(rng() % 3);
    double density = 0.2 + 0.4 * static_cast<double>(rng() % 1000) / 1000.0;
    auto g = fixtures::random_game(rng, n, np, density);
    auto w = WeightSystem::cardinality(g);
    std::size_t best = 0;
    for (const auto& m : oracle::all_matchings(g.graph(), all_edges(g.graph()))) best = std::max(best, m.size());
    for (IaPolicy policy : {IaPolicy{CardinalityCanonical{}}, IaPolicy{LexicographicPriority{}}}) {
      auto relaxed = swe_relaxation(g, compute_swe(g), policy);
      std::string tag = "instance " + std::to_string(round) + " policy " + policy_name(g, policy);
      check(relaxed.size() == best, tag + ": maximum");
      check(verify_ne(g, w, relaxed, {IaAssumption::Strict, policy}).is_ne(), tag + ": equilibrium (strict)");
      check(verify_ne(g, w, relaxed).is_ne(), tag + ": equilibrium");
    }
  }
}

void oracle_equivalence(Check& check) {
  std::mt19937_64 rng(41);
  int deviations = 0, cases = 0;
  for (int round = 0; round < 300; ++round) {
    auto g = fixtures::random_small_game(rng, 3 + static_cast<int>(rng() % 10), 2 + static_cast<int>(rng() % 3), 14);
    bool weighted = round % 2 == 1;
    auto w = weighted ? fixtures::random_weights(rng, g, 4) : WeightSystem::cardinality(g);
    auto profile = StrategyProfile::empty(g);
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      auto all = oracle::all_matchings(g.graph(), g.internal_edges(p));
      profile.internal[p] = Matching::from_edges(g.graph(), all[rng() % all.size()]);
    }
    auto ia = ia_decide(g, w, profile, default_policy(w));
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      auto r = best_response_exists(g, w, profile, ia, p);
      bool expected = oracle::has_deviation(g, w, profile, ia, p);
      check(r.status != BestResponseStatus::Unresolved && (r.status == BestResponseStatus::Deviation) == expected,
            "instance " + std::to_string(round) + " player " + std::to_string(p));
      deviations += expected;
      ++cases;
    }
  }
  check(deviations > 0 && deviations < cases, "corpus mixes deviations and non-deviations");
}

void lexicographic_priority(Check& check) {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 300; ++round) {
    int n = 4 + static_cast<int>(rng() % 9);
    auto g = fixtures::random_game(rng, n, 2 + static_cast<int>(rng() % 3),
                                   0.2 + 0.4 * static_cast<double>(rng() % 1000) / 1000.0);
    auto w = WeightSystem::cardinality(g);
    auto profile = StrategyProfile::empty(g);
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      auto all = oracle::all_matchings(g.graph(), g.internal_edges(p));
      profile.internal[p] = Matching::from_edges(g.graph(), all[rng() % all.size()]);
    }
    auto chosen = ia_decide(g, w, profile, LexicographicPriority{});
    auto options = oracle::all_matchings(g.graph(), residual_international(g, profile));
    std::size_t best = 0;
    for (const auto& m : options) best = std::max(best, m.size());
    std::string tag = "instance " + std::to_string(round);
    check(chosen.size() == best, tag + ": maximum cardinality");

    const int np = g.num_players();
    std::vector<std::size_t> size(np);
    for (PlayerId p = 0; p < np; ++p) size[p] = g.vertices_of(p).size();
    auto counts = [&](const std::vector<EdgeId>& m) {
      std::vector<int> c(np, 0);
      for (EdgeId e : m) {
        ++c[g.owner(g.endpoints(e).u)];
        ++c[g.owner(g.endpoints(e).v)];
      }
      return c;
    };
    auto mine = counts(ids(chosen));
    for (const auto& m : options) {
      if (m.size() != best) continue;
      auto other = counts(m);
      for (PlayerId q = 0; q < np; ++q) {
        if (other[q] <= mine[q]) continue;
        bool unharmed = true, same_before = true;
        for (PlayerId r = 0; r < np; ++r) {
          if (r == q) continue;
          if (size[r] >= size[q] && other[r] < mine[r]) unharmed = false;
          bool before = size[r] > size[q] || (size[r] == size[q] && r < q);
          if (before && other[r] != mine[r]) same_before = false;
        }
        check(!unharmed, tag + ": an alternative improves a player without harming a weakly larger one");
        check(!same_before, tag + ": an alternative is lexicographically better");
      }
    }
  }
}

void sampler_statistics(Check& check) {
  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  std::map<std::vector<EdgeId>, int> freq;
  for (const auto& m : uniform_samples(g.graph(), edges, 4000, 2024)) ++freq[ids(m)];
  check(freq.size() == 4, "four distinct maximum matchings drawn");
  for (const auto& [m, n] : freq)
    check(m.size() == 3 && std::abs(n / 4000.0 - 0.25) <= 0.035, "frequency within 0.25 +/- 0.035");

  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    auto cg = fixtures::random_small_game(rng, 2 + static_cast<int>(rng() % 11), 2, 14);
    auto view = all_edges(cg.graph());
    std::map<int, int> by_size;
    for (const auto& m : oracle::all_matchings(cg.graph(), view)) ++by_size[static_cast<int>(m.size())];
    MatchingCounter counter(cg.graph(), view);
    check(counter.max_cardinality() == by_size.rbegin()->first, "maximum cardinality agrees");
    for (int k = 0; k <= 8; ++k)
      check(counter.count(k) == by_size[k], "count agrees for round " + std::to_string(round) + " k " + std::to_string(k));
  }
}

void generator_statistics(Check& check) {
  auto base = load_generator_config(std::string(KEG_DATA_DIR) + "/generator_default.json");
  for (auto [year, target] : {std::pair{2009, 0.14}, std::pair{2013, 0.53}}) {
    auto c = base;
    c.n_vertices = 10000;
    c.year = year;
    c.seed = 11;
    std::mt19937_64 rng(c.seed);
    int high = 0;
    for (const auto& p : generate_pairs(c, rng)) high += p.cpra_bp >= 9700;
    double share = high / 10000.0;
    std::ostringstream what;
    what << year << ": share of cPRA >= 0.97 is " << share << ", target " << target;
    check(std::abs(share - target) <= 0.02, what.str());
  }

  auto ages = load_ages(std::string(KEG_DATA_DIR) + "/donor_ages.json");
  for (int seed = 1; seed <= 20; ++seed) {
    auto c = base;
    c.n_vertices = 30;
    c.year = seed % 2 ? 2009 : 2013;
    c.seed = static_cast<std::uint64_t>(seed);
    auto inst = generate_instance(c);
    auto aw = generate_weights(inst.graph, ages, static_cast<std::uint64_t>(seed) + 100);
    for (const auto& d : aw.donor_weight) check(d >= Rational(0) && d <= Rational(1), "donor weight in [0,1]");
    for (EdgeId e : inst.graph.international_edges()) {
      const auto& v = aw.weights.value(e);
      check(v.u_side >= Rational(0) && v.u_side <= Rational(1) && v.v_side >= Rational(0) && v.v_side <= Rational(1),
            "international edge weights in [0,1]");
    }
  }
}

void k_best_contract(Check& check) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    auto cg = fixtures::random_small_game(rng, 2 + static_cast<int>(rng() % 9), 2, 12);
    const auto& g = cg.graph();
    auto view = all_edges(g);
    EdgeWeights w(g.num_edges());
    for (auto& x : w) x = Rational(static_cast<std::int64_t>(rng() % 5), 1 + static_cast<std::int64_t>(rng() % 3));
    std::vector<std::pair<Rational, std::vector<EdgeId>>> sorted;
    for (const auto& m : oracle::all_matchings(g, view)) {
      Rational v(0);
      for (EdgeId e : m) v += w[e];
      sorted.emplace_back(v, m);
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    auto ranked = k_best_weighted(g, view, w, sorted.size());
    auto again = k_best_weighted(g, view, w, sorted.size());
    std::string tag = "round " + std::to_string(round);
    check(ranked.size() == sorted.size(), tag + ": full K returns every matching");
    bool same = ranked.size() == again.size();
    for (std::size_t i = 0; i < ranked.size() && i < sorted.size(); ++i) {
      check(ranked[i].value == sorted[i].first && ids(ranked[i].matching) == sorted[i].second,
            tag + ": position " + std::to_string(i) + " matches the sorted enumeration");
      if (i > 0) check(!(ranked[i - 1].value < ranked[i].value), tag + ": values non-increasing");
      if (i < again.size()) same = same && again[i].matching == ranked[i].matching && again[i].value == ranked[i].value;
    }
    check(same, tag + ": deterministic");
  }
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    out.push_back(cells);
  }
  return out;
}

void mini_campaign(Check& check) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("keg_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir / "card");
  fs::create_directories(dir / "weighted");
  auto base = load_generator_config(std::string(KEG_DATA_DIR) + "/generator_default.json");
  base.player_subset = {"ON", "BCYT", "AB"};
  auto ages = load_ages(std::string(KEG_DATA_DIR) + "/donor_ages.json");
  struct Cell {
    int year, n, ins;
  };
  std::vector<Cell> cells = {{2009, 10, 1}, {2009, 10, 2}, {2009, 14, 1}, {2013, 10, 1}, {2013, 10, 2}, {2013, 14, 1}};
  for (const auto& s : cells) {
    auto c = base;
    c.year = s.year;
    c.n_vertices = s.n;
    c.seed = static_cast<std::uint64_t>(1000 * s.year + 10 * s.n + s.ins);
    auto inst = generate_instance(c);
    inst.meta["ins"] = s.ins;
    std::string name = std::to_string(s.year) + "_" + std::to_string(s.n) + "_" + std::to_string(s.ins) + ".json";
    save_instance(dir / "card" / name, inst);
    inst.weights = generate_weights(inst.graph, ages, c.seed + 7).weights;
    save_instance(dir / "weighted" / name, inst);
  }

  ExperimentOptions options;
  options.sample_budget = 200;
  options.seed = 7;
  options.timings = false;
  const std::string card_header =
      "year,|V|,ins,|E|,|M|_max,#|M|_max,%#-NE,IMP_max,Players_max,IMP_min,Players_min,IA_high,IA_low,time_gen,time_NE";
  const std::string weighted_header =
      "year,|V|,ins,|E|,W(M)_max,K,%W-NE,epsilon,iter,IMP_max,Players_max,IMP_min,Players_min,IA_high,IA_low,time_gen,"
      "time_NE";
  for (auto mode : {ExperimentMode::Cardinality, ExperimentMode::Weighted}) {
    bool card = mode == ExperimentMode::Cardinality;
    auto files = list_instances(dir / (card ? "card" : "weighted"));
    check(files.size() == 6, "six instances");
    auto first = rows_to_csv(mode, run_campaign(mode, files, options, 2));
    auto second = rows_to_csv(mode, run_campaign(mode, files, options, 1));
    check(first == second, std::string(card ? "cardinality" : "weighted") + " CSV is byte-identical across runs");
    auto table = parse_csv(first);
    check(table.size() == 7, "header plus six rows");
    if (table.empty()) continue;
    std::string header = first.substr(0, first.find('\n'));
    check(header == (card ? card_header : weighted_header), "column layout");
    const auto& cols = table[0];
    int ne_rows = 0;
    auto col = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
    };
    for (std::size_t i = 1; i < table.size(); ++i) {
      const auto& row = table[i];
      check(row.size() == cols.size(), "row width");
      if (row.size() != cols.size()) continue;
      const std::string& pct = row[col(card ? "%#-NE" : "%W-NE")];
      double pct_value = std::stod(pct);
      ne_rows += pct_value > 0;
      check(std::stoi(row[col("|E|")]) > 0, "instance has edges");
      check(pct_value >= 0 && pct_value <= 100, "NE percentage in [0,100]");
      if (pct_value > 0) {
        const std::string& imp_min = row[col("IMP_min")];
        check(!imp_min.empty() && std::stod(imp_min) >= 0, "IMP_min non-negative on NE rows");
      }
      if (!card) {
        std::string eps = row[col("epsilon")];
        if (!eps.empty() && eps[0] == '<') eps = eps.substr(1);
        check(!eps.empty() && std::stod(eps) <= 1.0 + 1e-12, "epsilon at most 1");
      }
      check(row[col("time_gen")] == "na" && row[col("time_NE")] == "na", "timings off");
    }
    check(ne_rows > 0, "some row has an equilibrium");
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {"path_game golden suite", 1, path_golden},
      {"three_player_game golden suite", 1, three_player_golden},
      {"weighted_path golden suite", 1, weighted_path_golden},
      {"SWE construction property", 300, swe_property},
      {"best response vs exhaustive oracle", 300, oracle_equivalence},
      {"lexicographic IA priority", 180, lexicographic_priority},
      {"sampler statistics and counts", 60, sampler_statistics},
      {"generator statistics", 60, generator_statistics},
      {"K-best contract", 120, k_best_contract},
      {"mini-campaign protocol", 600, mini_campaign},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(seconds <= criteria[i].budget_seconds, "over the time budget");
    bool ok = check.failed == 0;
    failed += !ok;
    std::cout << "criterion " << std::setw(2) << i + 1 << ": " << (ok ? "PASS" : "FAIL") << "  " << criteria[i].name
              << "  (" << std::fixed << std::setprecision(2) << seconds << " s)\n";
    for (const auto& f : check.failures) std::cout << "    " << f << "\n";
    if (check.failed > check.failures.size())
      std::cout << "    ... " << check.failed - check.failures.size() << " more\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
