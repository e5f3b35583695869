#include "keg/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>
#include <stdexcept>

namespace keg {

std::size_t MatchingCounter::KeyHash::operator()(const Key& key) const {
  std::uint64_t h = key.s * 0x9e3779b97f4a7c15ULL;
  h ^= (static_cast<std::uint64_t>(key.r) << 20 | static_cast<std::uint64_t>(key.k)) + 0x7f4a7c159e3779b9ULL + (h << 6) +
       (h >> 2);
  return static_cast<std::size_t>(h);
}

MatchingCounter::MatchingCounter(const Graph& g, std::span<const EdgeId> view, int vertex_cap) : g_(&g) {
  if (vertex_cap < 1 || vertex_cap > 64) throw std::invalid_argument("vertex cap must be within 1..64");
  edges_.assign(view.begin(), view.end());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::vector<int> bit(g.num_vertices(), -1);
  int used = 0;
  for (EdgeId e : edges_) {
    for (VertexId x : {g.endpoints(e).u, g.endpoints(e).v}) {
      if (bit[x] != -1) continue;
      if (used == vertex_cap) throw std::invalid_argument("view exceeds the sampling vertex cap");
      bit[x] = used++;
    }
  }
  prefix_mask_.push_back(0);
  for (EdgeId e : edges_) {
    std::uint64_t m = (std::uint64_t{1} << bit[g.endpoints(e).u]) | (std::uint64_t{1} << bit[g.endpoints(e).v]);
    edge_mask_.push_back(m);
    prefix_mask_.push_back(prefix_mask_.back() | m);
  }
  full_ = prefix_mask_.back();
  opt_ = static_cast<int>(max_cardinality_matching(g, edges_).size());
}

const BigInt& MatchingCounter::f(int k, int r, std::uint64_t s) {
  static const BigInt zero = 0, one = 1;
  if (k == 0) return one;
  if (k > r || 2 * k > std::popcount(s)) return zero;
  s &= prefix_mask_[r];
  Key key{k, r, s};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  BigInt value = f(k, r - 1, s);
  const std::uint64_t m = edge_mask_[r - 1];
  if ((s & m) == m) value += f(k - 1, r - 1, s & ~m);
  return memo_.emplace(key, std::move(value)).first->second;
}

BigInt MatchingCounter::count(int k) {
  if (k < 0) throw std::invalid_argument("matching size must be non-negative");
  return f(k, static_cast<int>(edges_.size()), full_);
}

Matching MatchingCounter::unrank(int k, BigInt index) {
  if (index < 0 || index >= count(k)) throw std::out_of_range("matching index out of range");
  std::vector<EdgeId> chosen;
  std::uint64_t s = full_;
  for (int r = static_cast<int>(edges_.size()); k > 0; --r) {
    const BigInt& skip = f(k, r - 1, s);
    if (index < skip) continue;
    index -= skip;
    chosen.push_back(edges_[r - 1]);
    s &= ~edge_mask_[r - 1];
    --k;
  }
  return Matching::from_edges(*g_, std::move(chosen));
}

Matching MatchingCounter::sample(std::mt19937_64& rng) { return unrank(opt_, uniform_below(rng, count(opt_))); }

BigInt uniform_below(std::mt19937_64& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("bound must be positive");
  const std::size_t bits = msb(bound) + 1;
  while (true) {
    BigInt x = 0;
    for (std::size_t got = 0; got < bits; got += 64) x = (x << 64) | BigInt(rng());
    x >>= (bits + 63) / 64 * 64 - bits;
    if (x < bound) return x;
  }
}

BigInt count_matchings(const Graph& g, std::span<const EdgeId> view, int k, int vertex_cap) {
  return MatchingCounter(g, view, vertex_cap).count(k);
}

Matching uniform_sample(const Graph& g, std::span<const EdgeId> view, std::uint64_t seed, int vertex_cap) {
  return uniform_samples(g, view, 1, seed, vertex_cap).front();
}

std::vector<Matching> uniform_samples(const Graph& g, std::span<const EdgeId> view, std::size_t n, std::uint64_t seed,
                                      int vertex_cap) {
  MatchingCounter counter(g, view, vertex_cap);
  std::mt19937_64 rng(seed);
  std::vector<Matching> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(counter.sample(rng));
  return out;
}

namespace {

struct LawlerNode {
  std::int64_t value;
  std::vector<EdgeId> solution;
  std::vector<EdgeId> forced;
  std::vector<EdgeId> excluded;
};

struct LawlerOrder {
  bool operator()(const LawlerNode& a, const LawlerNode& b) const {
    if (a.value != b.value) return a.value < b.value;
    return a.solution > b.solution;
  }
};

}  // namespace

std::vector<RankedMatching> k_best_weighted(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights,
                                            std::size_t k, const std::function<bool()>& stop) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::vector<EdgeId> edges(view.begin(), view.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<Rational> values;
  for (EdgeId e : edges) {
    if (weights.at(e) < Rational(0)) throw std::invalid_argument("k-best needs non-negative weights");
    values.push_back(weights[e]);
  }
  std::int64_t scale = 1;
  for (const auto& v : values) scale = std::lcm(scale, v.denominator());
  auto scaled = scale_to_integers(values);
  std::vector<std::int64_t> w(g.num_edges(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i) w[edges[i]] = scaled[i];

  std::priority_queue<LawlerNode, std::vector<LawlerNode>, LawlerOrder> queue;
  auto push = [&](std::vector<EdgeId> forced, std::vector<EdgeId> excluded) {
    auto best = canonical_max_weight(g, edges, w, forced, excluded);
    if (!best) return;
    std::int64_t value = 0;
    for (EdgeId e : best->edges()) value += w[e];
    queue.push({value, std::vector<EdgeId>(best->edges().begin(), best->edges().end()), std::move(forced),
                std::move(excluded)});
  };
  push({}, {});

  std::vector<RankedMatching> out;
  while (!queue.empty() && out.size() < k && !(stop && stop())) {
    LawlerNode node = queue.top();
    queue.pop();
    out.push_back({Matching::from_edges(g, node.solution), Rational(node.value, scale)});
    if (out.size() == k) break;

    std::vector<char> fixed(g.num_edges(), 0);
    for (EdgeId e : node.forced) fixed[e] = 1;
    for (EdgeId e : node.excluded) fixed[e] = 1;
    // Matchings of the node other than its solution either miss some free
    // solution edge (first one missed decides the child) or strictly extend
    // the solution, which only zero-weight edges can do without beating it.
    std::vector<EdgeId> forced = node.forced;
    for (EdgeId e : node.solution) {
      if (fixed[e]) continue;
      auto excluded = node.excluded;
      excluded.push_back(e);
      push(forced, std::move(excluded));
      forced.push_back(e);
    }
    std::vector<char> covered(g.num_vertices(), 0);
    for (EdgeId e : node.solution) covered[g.endpoints(e).u] = covered[g.endpoints(e).v] = 1;
    auto excluded = node.excluded;
    for (EdgeId e : edges) {
      if (fixed[e] || w[e] != 0 || covered[g.endpoints(e).u] || covered[g.endpoints(e).v]) continue;
      auto with = forced;
      with.push_back(e);
      push(std::move(with), excluded);
      excluded.push_back(e);
    }
  }
  return out;
}

std::vector<Matching> enumerate_all_matchings(const Graph& g, std::span<const EdgeId> view) {
  std::vector<EdgeId> edges(view.begin(), view.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() > kEnumerationEdgeLimit) throw std::invalid_argument("too many edges to enumerate");
  std::vector<Matching> out;
  std::vector<EdgeId> current;
  std::vector<char> used(g.num_vertices(), 0);
  std::function<void(std::size_t)> visit = [&](std::size_t from) {
    out.push_back(Matching::from_edges(g, current));
    for (std::size_t i = from; i < edges.size(); ++i) {
      auto [u, v] = g.endpoints(edges[i]);
      if (used[u] || used[v]) continue;
      used[u] = used[v] = 1;
      current.push_back(edges[i]);
      visit(i + 1);
      current.pop_back();
      used[u] = used[v] = 0;
    }
  };
  visit(0);
  return out;
}

}  // namespace keg
