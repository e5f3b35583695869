#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "keg/graph.hpp"
#include "keg/matching.hpp"

namespace keg {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultVertexCap = 32;

// F(K, r, s): number of matchings with K edges among the first r view edges
// (ascending ids) that only use vertices in s. Filled lazily on demand.
class MatchingCounter {
 public:
  // Throws std::invalid_argument when the view touches more than vertex_cap
  // vertices (cap at most 64).
  MatchingCounter(const Graph& g, std::span<const EdgeId> view, int vertex_cap = kDefaultVertexCap);

  int max_cardinality() const { return opt_; }
  BigInt count(int k);
  BigInt count_maximum() { return count(opt_); }

  // The index-th matching with k edges (0-based) in the table's order.
  Matching unrank(int k, BigInt index);
  // Uniform over maximum-cardinality matchings.
  Matching sample(std::mt19937_64& rng);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Key {
    int k;
    int r;
    std::uint64_t s;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  const BigInt& f(int k, int r, std::uint64_t s);

  const Graph* g_;
  std::vector<EdgeId> edges_;
  std::vector<std::uint64_t> edge_mask_;
  std::vector<std::uint64_t> prefix_mask_;
  std::uint64_t full_ = 0;
  int opt_ = 0;
  std::unordered_map<Key, BigInt, KeyHash> memo_;
};

BigInt count_matchings(const Graph& g, std::span<const EdgeId> view, int k, int vertex_cap = kDefaultVertexCap);

// Uniform integer in [0, bound); bound > 0.
BigInt uniform_below(std::mt19937_64& rng, const BigInt& bound);

Matching uniform_sample(const Graph& g, std::span<const EdgeId> view, std::uint64_t seed,
                        int vertex_cap = kDefaultVertexCap);

// n draws with replacement from one table and one generator seeded with seed.
std::vector<Matching> uniform_samples(const Graph& g, std::span<const EdgeId> view, std::size_t n, std::uint64_t seed,
                                      int vertex_cap = kDefaultVertexCap);

struct RankedMatching {
  Matching matching;
  Rational value;
};

// The k highest-weight matchings (empty matching included), non-increasing
// in value; equal values come in canonical order (smaller sorted edge list
// first). Weights must be non-negative. `stop`, polled once per solution,
// ends the enumeration early with what has been found.
std::vector<RankedMatching> k_best_weighted(const Graph& g, std::span<const EdgeId> view, const EdgeWeights& weights,
                                            std::size_t k, const std::function<bool()>& stop = {});

inline constexpr std::size_t kEnumerationEdgeLimit = 16;

// Every matching of the view in lexicographic order of sorted edge lists.
// Throws std::invalid_argument beyond kEnumerationEdgeLimit edges.
std::vector<Matching> enumerate_all_matchings(const Graph& g, std::span<const EdgeId> view);

}  // namespace keg
