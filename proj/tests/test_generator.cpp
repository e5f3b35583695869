#include <doctest.h>

#include <set>

#include "keg/generator.hpp"

using namespace keg;

namespace {

GeneratorConfig default_config(int n, int year, std::uint64_t seed) {
  auto c = load_generator_config(std::string(KEG_DATA_DIR) + "/generator_default.json");
  c.n_vertices = n;
  c.year = year;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("blood compatibility") {
  CHECK(abo_compatible(BloodType::O, BloodType::AB));
  CHECK(abo_compatible(BloodType::O, BloodType::A));
  CHECK(abo_compatible(BloodType::A, BloodType::AB));
  CHECK_FALSE(abo_compatible(BloodType::A, BloodType::B));
  CHECK_FALSE(abo_compatible(BloodType::AB, BloodType::O));
  CHECK(abo_compatible(BloodType::B, BloodType::B));
  CHECK(parse_blood("AB") == BloodType::AB);
  CHECK_THROWS_AS(parse_blood("C"), std::invalid_argument);
}

TEST_CASE("config validation") {
  auto c = default_config(10, 2009, 1);
  CHECK_NOTHROW(validate(c));
  auto bad_year = c;
  bad_year.year = 1999;
  CHECK_THROWS_AS(validate(bad_year), std::invalid_argument);
  auto bad_sum = c;
  bad_sum.provinces[0].second = Rational(1, 2);
  CHECK_THROWS_AS(validate(bad_sum), std::invalid_argument);
  auto bad_label = c;
  bad_label.player_subset = {"ON", "XX"};
  CHECK_THROWS_AS(validate(bad_label), std::invalid_argument);
  auto gap = c;
  gap.cpra_bands[2009][1].low = 2;
  CHECK_THROWS_AS(validate(gap), std::invalid_argument);
  CHECK_THROWS_AS(generator_config_from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("uniform helpers") {
  std::mt19937_64 rng(3);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[uniform_index(rng, 5)];
  for (int h : hits) CHECK(std::abs(h - 1000) < 150);
  std::vector<Rational> shares = {Rational(0), Rational(1, 4), Rational(3, 4)};
  std::vector<int> picks(3, 0);
  for (int i = 0; i < 4000; ++i) ++picks[draw_share(rng, shares)];
  CHECK(picks[0] == 0);
  CHECK(std::abs(picks[1] - 1000) < 150);
}

TEST_CASE("generated instances are valid and reproducible") {
  auto c = default_config(30, 2013, 77);
  c.player_subset = {"ON", "BCYT", "AB"};
  auto a = generate_instance(c);
  auto b = generate_instance(c);
  CHECK(validate(a.graph).empty());
  CHECK(a.graph.num_players() == 3);
  CHECK(a.graph.num_vertices() == 30);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
  auto round_trip = instance_from_json(instance_to_json(a));
  CHECK(instance_to_json(round_trip).dump() == instance_to_json(a).dump());
  for (EdgeId e = 0; e < a.graph.num_edges(); ++e) {
    auto [u, v] = a.graph.endpoints(e);
    CHECK(abo_compatible(parse_blood(*a.vertices[u].donor_blood), parse_blood(*a.vertices[v].patient_blood)));
    CHECK(abo_compatible(parse_blood(*a.vertices[v].donor_blood), parse_blood(*a.vertices[u].patient_blood)));
  }
  c.seed = 78;
  CHECK(instance_to_json(generate_instance(c)).dump() != instance_to_json(a).dump());
}

TEST_CASE("cPRA anchors for 2009 and 2013") {
  for (auto [year, target] : {std::pair{2009, 0.14}, std::pair{2013, 0.53}}) {
    auto c = default_config(10000, year, 11);
    std::mt19937_64 rng(c.seed);
    auto pairs = generate_pairs(c, rng);
    int high = 0;
    for (const auto& p : pairs) {
      high += p.cpra() >= Rational(97, 100);
      CHECK(p.cpra_bp >= 0);
      CHECK(p.cpra_bp <= 10000);
    }
    CHECK(std::abs(high / 10000.0 - target) <= 0.02);
  }
}

TEST_CASE("fully sensitized patients get no edges") {
  auto c = default_config(40, 2009, 5);
  c.cpra_bands[2009] = {{0, 99, Rational(0)}, {100, 100, Rational(1)}};
  auto inst = generate_instance(c);
  CHECK(inst.graph.num_edges() == 0);
}

TEST_CASE("lowering every cPRA never removes an edge") {
  auto c = default_config(60, 2013, 19);
  std::mt19937_64 rng(c.seed);
  auto pairs = generate_pairs(c, rng);
  auto lowered = pairs;
  for (auto& p : lowered) p.cpra_bp /= 2;
  std::mt19937_64 r1(123), r2(123);
  auto before = compatibility_edges(pairs, r1);
  auto after = compatibility_edges(lowered, r2);
  std::set<std::pair<int, int>> grown(after.begin(), after.end());
  for (const auto& e : before) CHECK(grown.count(e) == 1);
  CHECK(after.size() >= before.size());
}

TEST_CASE("age-based weights") {
  CompatibilityGraph g({{"P1"}, {"P2"}}, {0, 0, 1}, {{0, 1}, {1, 2}});
  std::vector<Rational> single = {Rational(60)};
  auto oldest = generate_weights(g, single, 1);
  for (const auto& d : oldest.donor_weight) CHECK(d == Rational(0));
  std::vector<Rational> ages = {Rational(20), Rational(60)};
  auto w = generate_weights(g, ages, 4);
  for (const auto& d : w.donor_weight) CHECK((d == Rational(0) || d == Rational(2, 3)));
  EdgeId internal = g.edge_id(0, 1), international = g.edge_id(1, 2);
  CHECK(w.weights.value(internal).u_side == w.donor_weight[0] + w.donor_weight[1]);
  CHECK(w.weights.value(international).u_side == w.donor_weight[2]);
  CHECK(w.weights.value(international).v_side == w.donor_weight[1]);
  CHECK(w.weights.ia_weight(international) == w.donor_weight[1] + w.donor_weight[2]);
  std::vector<Rational> zero = {Rational(0)};
  CHECK_THROWS_AS(generate_weights(g, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_weights(g, zero, 1), std::invalid_argument);

  auto real = load_ages(std::string(KEG_DATA_DIR) + "/donor_ages.json");
  auto inst = generate_instance(default_config(25, 2009, 3));
  auto aw = generate_weights(inst.graph, real, 9);
  for (const auto& d : aw.donor_weight) {
    CHECK(d >= Rational(0));
    CHECK(d <= Rational(1));
  }
}
