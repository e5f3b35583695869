#include "keg/generator.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace keg {

BloodType parse_blood(const std::string& text) {
  if (text == "O") return BloodType::O;
  if (text == "A") return BloodType::A;
  if (text == "B") return BloodType::B;
  if (text == "AB") return BloodType::AB;
  throw std::invalid_argument("unknown blood group '" + text + "'");
}

std::string blood_name(BloodType t) {
  switch (t) {
    case BloodType::O: return "O";
    case BloodType::A: return "A";
    case BloodType::B: return "B";
    case BloodType::AB: return "AB";
  }
  return "?";
}

bool abo_compatible(BloodType donor, BloodType patient) {
  if (donor == BloodType::O || patient == BloodType::AB) return true;
  return donor == patient;
}

namespace {

Rational read_probability(const nlohmann::json& value, const std::string& where) {
  if (!value.is_string()) throw std::invalid_argument(where + ": probability must be a string like \"0.25\" or \"1/4\"");
  return parse_rational(value.get<std::string>());
}

void require_unit_sum(const std::vector<Rational>& shares, const std::string& where) {
  Rational total(0);
  for (const auto& s : shares) {
    if (s < Rational(0)) throw std::invalid_argument(where + ": negative probability");
    total += s;
  }
  if (total != Rational(1)) throw std::invalid_argument(where + ": probabilities sum to " + format_rational(total));
}

}  // namespace

GeneratorConfig generator_config_from_json(const nlohmann::json& doc) {
  GeneratorConfig c;
  if (!doc.is_object()) throw std::invalid_argument("config: expected an object");
  if (doc.contains("n_vertices")) c.n_vertices = doc.at("n_vertices").get<int>();
  if (doc.contains("year")) c.year = doc.at("year").get<int>();
  if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("players")) c.player_subset = doc.at("players").get<std::vector<std::string>>();
  if (!doc.contains("provinces")) throw std::invalid_argument("config: missing provinces");
  for (const auto& row : doc.at("provinces")) {
    if (!row.is_array() || row.size() != 2) throw std::invalid_argument("provinces: expected [label, probability]");
    c.provinces.emplace_back(row[0].get<std::string>(), read_probability(row[1], "provinces"));
  }
  if (!doc.contains("blood_types")) throw std::invalid_argument("config: missing blood_types");
  for (const auto& [key, rows] : doc.at("blood_types").items()) {
    auto& table = c.blood_types[key];
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 3)
        throw std::invalid_argument("blood_types." + key + ": expected [patient, donor, probability]");
      table.push_back({parse_blood(row[0].get<std::string>()), parse_blood(row[1].get<std::string>()),
                       read_probability(row[2], "blood_types." + key)});
    }
  }
  if (!doc.contains("cpra_bands")) throw std::invalid_argument("config: missing cpra_bands");
  for (const auto& [key, rows] : doc.at("cpra_bands").items()) {
    auto& bands = c.cpra_bands[std::stoi(key)];
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 3)
        throw std::invalid_argument("cpra_bands." + key + ": expected [low, high, probability]");
      bands.push_back({row[0].get<int>(), row[1].get<int>(), read_probability(row[2], "cpra_bands." + key)});
    }
  }
  return c;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return generator_config_from_json(nlohmann::json::parse(in));
}

void validate(const GeneratorConfig& c) {
  if (c.n_vertices < 0) throw std::invalid_argument("n_vertices must be non-negative");
  if (c.provinces.empty()) throw std::invalid_argument("provinces: empty");
  std::vector<Rational> shares;
  std::set<std::string> labels;
  for (const auto& [label, p] : c.provinces) {
    if (!labels.insert(label).second) throw std::invalid_argument("provinces: duplicate label " + label);
    shares.push_back(p);
  }
  require_unit_sum(shares, "provinces");
  if (!c.blood_types.count("default")) throw std::invalid_argument("blood_types: missing default table");
  for (const auto& [key, table] : c.blood_types) {
    if (key != "default" && !labels.count(key)) throw std::invalid_argument("blood_types: unknown province " + key);
    shares.clear();
    for (const auto& row : table) shares.push_back(row.probability);
    require_unit_sum(shares, "blood_types." + key);
  }
  auto it = c.cpra_bands.find(c.year);
  if (it == c.cpra_bands.end()) throw std::invalid_argument("cpra_bands: no bands for year " + std::to_string(c.year));
  for (const auto& [year, bands] : c.cpra_bands) {
    const std::string where = "cpra_bands." + std::to_string(year);
    auto sorted = bands;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.low < b.low; });
    int next = 0;
    shares.clear();
    for (const auto& b : sorted) {
      if (b.low != next || b.high < b.low) throw std::invalid_argument(where + ": bands must tile 0..100 in order");
      next = b.high + 1;
      shares.push_back(b.probability);
    }
    if (next != 101) throw std::invalid_argument(where + ": bands must end at 100");
    require_unit_sum(shares, where);
  }
  for (const auto& label : c.player_subset)
    if (!labels.count(label)) throw std::invalid_argument("unknown player label " + label);
  std::set<std::string> distinct(c.player_subset.begin(), c.player_subset.end());
  if (distinct.size() != c.player_subset.size()) throw std::invalid_argument("duplicate player label");
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

std::size_t draw_share(std::mt19937_64& rng, const std::vector<Rational>& shares) {
  auto weights = scale_to_integers(shares);
  std::uint64_t total = 0;
  for (auto w : weights) total += static_cast<std::uint64_t>(w);
  if (total == 0) throw std::invalid_argument("all shares are zero");
  std::uint64_t x = uniform_index(rng, total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < static_cast<std::uint64_t>(weights[i])) return i;
    x -= static_cast<std::uint64_t>(weights[i]);
  }
  return weights.size() - 1;
}

std::vector<std::string> generator_players(const GeneratorConfig& config) {
  if (!config.player_subset.empty()) return config.player_subset;
  std::vector<std::string> out;
  for (const auto& [label, p] : config.provinces) out.push_back(label);
  return out;
}

std::vector<GeneratedPair> generate_pairs(const GeneratorConfig& config, std::mt19937_64& rng) {
  validate(config);
  auto players = generator_players(config);
  std::vector<Rational> province_shares;
  for (const auto& label : players)
    for (const auto& [l, p] : config.provinces)
      if (l == label) province_shares.push_back(p);
  Rational total = std::accumulate(province_shares.begin(), province_shares.end(), Rational(0));
  if (total == Rational(0)) throw std::invalid_argument("selected provinces have zero probability");

  std::vector<GeneratedPair> pairs(config.n_vertices);
  for (auto& pair : pairs) pair.owner = static_cast<PlayerId>(draw_share(rng, province_shares));

  const auto& bands = config.cpra_bands.at(config.year);
  std::vector<Rational> band_shares;
  for (const auto& b : bands) band_shares.push_back(b.probability);
  for (auto& pair : pairs) {
    auto it = config.blood_types.find(players[pair.owner]);
    const auto& table = it != config.blood_types.end() ? it->second : config.blood_types.at("default");
    std::vector<Rational> shares;
    for (const auto& row : table) shares.push_back(row.probability);
    const auto& row = table[draw_share(rng, shares)];
    pair.patient_blood = row.patient;
    pair.donor_blood = row.donor;
    const auto& band = bands[draw_share(rng, band_shares)];
    pair.cpra_bp = band.low * 100 + static_cast<int>(uniform_index(rng, (band.high - band.low) * 100 + 1));
  }
  return pairs;
}

std::vector<std::pair<int, int>> compatibility_edges(const std::vector<GeneratedPair>& pairs, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(pairs.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const std::uint64_t draw = uniform_index(rng, 100000000);
      if (!abo_compatible(pairs[a].donor_blood, pairs[b].patient_blood) ||
          !abo_compatible(pairs[b].donor_blood, pairs[a].patient_blood))
        continue;
      const std::uint64_t chance =
          static_cast<std::uint64_t>(10000 - pairs[a].cpra_bp) * static_cast<std::uint64_t>(10000 - pairs[b].cpra_bp);
      if (draw < chance) edges.emplace_back(a, b);
    }
  }
  return edges;
}

Instance generate_instance(const GeneratorConfig& config) {
  std::mt19937_64 rng(config.seed);
  auto pairs = generate_pairs(config, rng);
  auto edges = compatibility_edges(pairs, rng);
  std::vector<Player> players;
  for (const auto& label : generator_players(config)) players.push_back({label});
  std::vector<PlayerId> owner;
  for (const auto& p : pairs) owner.push_back(p.owner);
  CompatibilityGraph graph(players, owner, edges);
  Instance inst{graph, WeightSystem::cardinality(graph), {}, nlohmann::json::object()};
  for (const auto& p : pairs) inst.vertices.push_back({blood_name(p.patient_blood), blood_name(p.donor_blood), p.cpra()});
  inst.meta = {{"generator", "province-blood-cpra"}, {"year", config.year}, {"seed", config.seed}};
  return inst;
}

AgeWeights generate_weights(const CompatibilityGraph& graph, const std::vector<Rational>& ages, std::uint64_t seed) {
  if (ages.empty()) throw std::invalid_argument("age sample is empty");
  const Rational oldest = *std::max_element(ages.begin(), ages.end());
  if (oldest <= Rational(0)) throw std::invalid_argument("age sample needs a positive maximum");
  for (const auto& a : ages)
    if (a < Rational(0)) throw std::invalid_argument("negative age");
  std::mt19937_64 rng(seed);
  AgeWeights out{{}, WeightSystem::cardinality(graph)};
  for (int v = 0; v < graph.num_vertices(); ++v)
    out.donor_weight.push_back((oldest - ages[uniform_index(rng, ages.size())]) / oldest);
  std::vector<EdgeValue> values;
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    auto [u, v] = graph.endpoints(e);
    if (graph.is_internal(e))
      values.push_back({out.donor_weight[u] + out.donor_weight[v], Rational(0)});
    else
      values.push_back({out.donor_weight[v], out.donor_weight[u]});
  }
  out.weights = WeightSystem::weighted(graph, values);
  return out;
}

std::vector<Rational> load_ages(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto doc = nlohmann::json::parse(in);
  const auto& list = doc.is_object() ? doc.at("ages") : doc;
  std::vector<Rational> ages;
  for (const auto& a : list) ages.push_back(a.is_string() ? parse_rational(a.get<std::string>()) : Rational(a.get<std::int64_t>()));
  return ages;
}

}  // namespace keg
