#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace bstrank::mc {

inline constexpr std::int32_t kNone = -1;

/// Decreasing binary tree of a permutation. Vertex i is position i of the
/// permutation and carries label perm[i]; every child has a smaller label
/// than its parent, and in-order traversal lists positions 0..n-1.
struct DecreasingTree {
  std::int32_t n = 0;
  std::int32_t root = kNone;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<std::int32_t> label;

  bool is_leaf(std::int32_t v) const { return left[v] == kNone && right[v] == kNone; }
};

/// Linear-time construction with a monotone stack. Throws
/// std::invalid_argument unless perm holds each of 1..n exactly once.
DecreasingTree build_tree(std::span<const std::int32_t> perm);

struct CensusReport {
  std::vector<std::int32_t> rank;            // per vertex
  std::vector<std::int32_t> subtree_size;    // per vertex
  std::vector<std::int64_t> vertices;        // V_{n,k}, indexed by rank
  std::vector<std::int64_t> leaf_pairs;      // descendant leaves of rank-k vertices
  std::vector<std::int64_t> closest_pairs;   // closest descendant leaves of rank-k vertices
  std::int64_t leaves = 0;                   // L_n
  std::int32_t shortest_path = 0;            // S_n = rank of the root
};

/// Ranks and fringe aggregates in one pass over vertices in increasing label
/// order (children before parents), with no recursion.
CensusReport rank_census(const DecreasingTree& t);

/// 64-bit generator with a fixed, documented output sequence:
/// std::mt19937_64 seeded with one 64-bit word. Bounded draws use Lemire's
/// multiply-and-reject method, so results do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer of (seed, counter): independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

/// Fisher-Yates shuffle of 1..n.
std::vector<std::int32_t> random_permutation(std::int32_t n, Rng& rng);

/// Randomized greedy root-to-leaf walk: at a vertex with two subtrees one is
/// deleted with probability proportional to its size. Returns the edge count.
std::int32_t greedy_path_length(const DecreasingTree& t, std::span<const std::int32_t> subtree_size, Rng& rng);
std::int32_t greedy_path_length(const DecreasingTree& t, Rng& rng);

struct Statistic {
  std::string name;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;  // trials that contributed
};

struct EstimateConfig {
  std::int32_t n = 1000;
  std::int64_t trials = 1000;
  std::uint64_t seed = 20240101;
  std::int32_t kmax = 5;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Per-statistic sample means. Names:
///   vertex_fraction[k]  V_{n,k}/n          leaf_fraction      L_n/n
///   root_rank[k]        1{S_n = k}          greedy_tail[k]     1{greedy > k}
///   leaf_ratio[k]       L_{n,k}/V_{n,k}     closest_ratio[k]   Lhat_{n,k}/V_{n,k}
///   pair_first[k], pair_second[k], pair_joint[k1,k2]  ranks of two distinct
///   uniform vertices (n >= 2).
/// Ratios average over the trials with V_{n,k} > 0.
struct EstimateReport {
  EstimateConfig config;
  std::vector<Statistic> stats;

  const Statistic& get(const std::string& name) const;
  const Statistic* find(const std::string& name) const;
};

/// Runs independent trials (possibly concurrently) and aggregates them in
/// trial order, so the report depends only on (n, trials, seed, kmax).
EstimateReport estimate(const EstimateConfig& config);

std::string indexed(const std::string& base, int k);
std::string indexed(const std::string& base, int k1, int k2);

}  // namespace bstrank::mc
