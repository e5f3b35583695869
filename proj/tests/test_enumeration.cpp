#include <doctest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "keg/enumeration.hpp"
#include "keg/game.hpp"
#include "oracle.hpp"

using namespace keg;
using fixtures::matching;

namespace {

Graph triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

Graph random_graph(std::mt19937_64& rng, int n, int max_edges) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(std::min<std::size_t>(pairs.size(), rng() % (max_edges + 1)));
  Graph g(n);
  for (auto [a, b] : pairs) g.add_edge(a, b);
  return g;
}

}  // namespace

TEST_CASE("counting matchings by size") {
  auto tri = triangle();
  auto tri_edges = all_edges(tri);
  CHECK(count_matchings(tri, tri_edges, 0) == 1);
  CHECK(count_matchings(tri, tri_edges, 1) == 3);
  CHECK(count_matchings(tri, tri_edges, 2) == 0);

  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  MatchingCounter counter(g.graph(), edges);
  CHECK(counter.max_cardinality() == 3);
  CHECK(counter.count_maximum() == 4);
  CHECK(counter.count(1) == 6);

  Graph empty(4);
  MatchingCounter none(empty, {});
  CHECK(none.count_maximum() == 1);
  std::mt19937_64 rng(1);
  CHECK(none.sample(rng).size() == 0);
  CHECK_THROWS_AS(none.count(-1), std::invalid_argument);
}

TEST_CASE("vertex cap") {
  Graph g(40);
  for (int v = 0; v + 1 < 40; v += 2) g.add_edge(v, v + 1);
  auto edges = all_edges(g);
  CHECK_THROWS_AS(MatchingCounter(g, edges), std::invalid_argument);
  MatchingCounter wide(g, edges, 64);
  CHECK(wide.count_maximum() == 1);
  CHECK(wide.max_cardinality() == 20);
  CHECK_THROWS_AS(MatchingCounter(g, edges, 65), std::invalid_argument);
}

TEST_CASE("unranking lists every maximum matching once") {
  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  MatchingCounter counter(g.graph(), edges);
  std::set<std::vector<EdgeId>> seen;
  for (int i = 0; i < 4; ++i) {
    auto m = counter.unrank(3, i);
    seen.insert(std::vector<EdgeId>(m.edges().begin(), m.edges().end()));
  }
  std::set<std::vector<EdgeId>> expected;
  for (auto m : {matching(g, {{2, 3}, {4, 5}, {6, 7}}), matching(g, {{1, 2}, {3, 4}, {5, 6}}),
                 matching(g, {{1, 2}, {4, 5}, {6, 7}}), matching(g, {{1, 2}, {3, 4}, {6, 7}})})
    expected.insert(std::vector<EdgeId>(m.edges().begin(), m.edges().end()));
  CHECK(seen == expected);
  CHECK_THROWS_AS(counter.unrank(3, 4), std::out_of_range);
}

TEST_CASE("sampling small graphs") {
  Graph one(2);
  one.add_edge(0, 1);
  auto e1 = all_edges(one);
  CHECK(uniform_sample(one, e1, 3).size() == 1);
  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  auto e2 = all_edges(two);
  CHECK(uniform_sample(two, e2, 3).size() == 2);
  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  CHECK(uniform_samples(g.graph(), edges, 20, 9) == uniform_samples(g.graph(), edges, 20, 9));
}

TEST_CASE("uniform draws over the four maximum matchings of path_game") {
  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  std::map<std::vector<EdgeId>, int> freq;
  for (const auto& m : uniform_samples(g.graph(), edges, 4000, 2024))
    ++freq[std::vector<EdgeId>(m.edges().begin(), m.edges().end())];
  CHECK(freq.size() == 4);
  for (const auto& [m, n] : freq) {
    CHECK(m.size() == 3);
    CHECK(std::abs(n / 4000.0 - 0.25) <= 0.035);
  }
}

TEST_CASE("uniform_below stays in range and covers it") {
  std::mt19937_64 rng(5);
  BigInt bound = BigInt(1) << 70;
  bound += 3;
  for (int i = 0; i < 200; ++i) {
    auto x = uniform_below(rng, bound);
    CHECK(x >= 0);
    CHECK(x < bound);
  }
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 3000; ++i) ++hits[static_cast<int>(uniform_below(rng, 3))];
  for (int h : hits) CHECK(std::abs(h - 1000) < 120);
  CHECK_THROWS_AS(uniform_below(rng, 0), std::invalid_argument);
}

TEST_CASE("enumeration") {
  Graph one(2);
  one.add_edge(0, 1);
  auto e1 = all_edges(one);
  auto all1 = enumerate_all_matchings(one, e1);
  REQUIRE(all1.size() == 2);
  CHECK(all1[0].size() == 0);
  CHECK(all1[1].size() == 1);
  auto tri = triangle();
  auto et = all_edges(tri);
  CHECK(enumerate_all_matchings(tri, et).size() == 4);
  auto g = fixtures::path_game();
  auto edges = all_edges(g.graph());
  int size3 = 0;
  for (const auto& m : enumerate_all_matchings(g.graph(), edges)) size3 += m.size() == 3;
  CHECK(size3 == 4);
  Graph big(40);
  for (int v = 0; v + 1 < 40; ++v) big.add_edge(v, v + 1);
  auto eb = all_edges(big);
  CHECK_THROWS_AS(enumerate_all_matchings(big, eb), std::invalid_argument);
}

TEST_CASE("k-best on the weighted path") {
  auto g = fixtures::weighted_path_graph();
  auto w = fixtures::weighted_path_weights(g);
  EdgeWeights ia(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) ia[e] = w.ia_weight(e);
  auto edges = all_edges(g.graph());
  auto best = k_best_weighted(g.graph(), edges, ia, 3);
  REQUIRE(best.size() == 3);
  CHECK(best[0].matching == matching(g, {{1, 2}, {3, 4}}));
  CHECK(best[0].value == Rational(12));
  CHECK(best[1].matching == matching(g, {{2, 3}}));
  CHECK(best[1].value == Rational(11));
  CHECK(best[2].matching == matching(g, {{1, 2}}));
  CHECK(best[2].value == Rational(6));
  CHECK(k_best_weighted(g.graph(), edges, ia, 1)[0].matching == max_weight_matching(g.graph(), edges, ia));
  auto everything = k_best_weighted(g.graph(), edges, ia, 100);
  CHECK(everything.size() == 5);
  CHECK(everything.back().matching.size() == 0);

  Graph empty(3);
  auto none = k_best_weighted(empty, {}, {}, 5);
  REQUIRE(none.size() == 1);
  CHECK(none[0].value == Rational(0));
  CHECK_THROWS_AS(k_best_weighted(empty, {}, {}, 0), std::invalid_argument);
}

TEST_CASE("property: counts, k-best and enumeration agree on small graphs") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 250; ++round) {
    auto g = random_graph(rng, 3 + static_cast<int>(rng() % 8), 14);
    auto edges = all_edges(g);
    auto all = enumerate_all_matchings(g, edges);
    auto oracle_all = oracle::all_matchings(g, edges);
    CHECK(all.size() == oracle_all.size());
    MatchingCounter counter(g, edges);
    std::map<int, int> by_size;
    for (const auto& m : all) ++by_size[static_cast<int>(m.size())];
    CHECK(counter.max_cardinality() == by_size.rbegin()->first);
    for (int k = 0; k <= 8; ++k) CHECK(counter.count(k) == by_size[k]);

    EdgeWeights w(g.num_edges());
    for (auto& x : w) x = Rational(static_cast<std::int64_t>(rng() % 4), 1 + static_cast<std::int64_t>(rng() % 2));
    std::vector<std::pair<Rational, std::vector<EdgeId>>> sorted;
    for (const auto& m : all) sorted.emplace_back(matching_weight(m, w), std::vector<EdgeId>(m.edges().begin(), m.edges().end()));
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    auto ranked = k_best_weighted(g, edges, w, all.size() + 3);
    REQUIRE(ranked.size() == sorted.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      CHECK(ranked[i].value == sorted[i].first);
      CHECK(std::vector<EdgeId>(ranked[i].matching.edges().begin(), ranked[i].matching.edges().end()) == sorted[i].second);
    }
  }
}
