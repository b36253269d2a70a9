#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "bstrank/errors.hpp"
#include "bstrank/plexpr.hpp"

namespace bstrank {

/// Generating-function families computed by the engine.
enum class GFKind {
  RootRank,      // B_k: P(root rank = k), over n >= 1
  RootRankCdf,   // B_{<=k}: P(root rank <= k)
  LeafPairTail,  // expected leaves of the tree times [root rank > k]
  ClosestLeaf,   // expected closest leaves times [root rank = k]
  GreedyTail,    // P(greedy root-to-leaf path longer than k)
};

std::string kind_name(GFKind kind);

struct GFFamily {
  GFKind kind;
  int k;
  PLExpr expr;
};

struct ConstantsRow {
  int k = 0;
  Rational c;            // limiting fraction of rank-k vertices
  Rational f;            // (rank-k vertex, descendant leaf) pairs per vertex
  Rational g;            // (rank-k vertex, closest descendant leaf) pairs per vertex
  Rational partial_sum;  // c_0 + ... + c_k
  Rational f_ratio;      // f / c
  Rational g_ratio;      // g / c
};

struct ConstantsTable {
  std::vector<ConstantsRow> rows;
};

struct TailRow {
  int k = 0;
  std::vector<Rational> moments;      // I_{k,t} for t = 1..moments.size()
  Rational upper;                     // 2 I_{k,1}
  Rational theorem_bound;             // (6k+7)/3 * 3^-k
  std::optional<Rational> tail;       // 1 - S_k when constants are available
  std::optional<Rational> tail_prev;  // 1 - S_{k-1}, the other index convention
  double lower_reference = 0.0;       // (2/3) exp(-k / alpha0)
};

struct TailTable {
  double alpha0 = 0.0;
  std::vector<TailRow> rows;
};

/// Memoizing engine for the rank generating functions and the constants
/// derived from them. Expressions are immutable once cached; lookups and
/// inserts are guarded so one engine may be shared between threads.
///
/// With a cache directory, each expression is also persisted as
/// "<kind>_<k>.plx" (a version header line, then the serialize() text).
class GeneratingFunctions {
 public:
  struct Options {
    std::optional<std::filesystem::path> cache_dir;
    /// Cross-check the second route in rank_constant / tail_moment.
    bool verify_routes = true;
    /// tail_moment compares against the integral route for k <= this.
    int tail_route_check_kmax = 6;
  };

  GeneratingFunctions() = default;
  explicit GeneratingFunctions(Options options) : options_(std::move(options)) {}

  GeneratingFunctions(const GeneratingFunctions&) = delete;
  GeneratingFunctions& operator=(const GeneratingFunctions&) = delete;

  /// B_k, k >= 0: B_k' = 2 B_{k-1} (1/(1-x) - sum_{j<=k-2} B_j) - B_{k-1}^2.
  const PLExpr& root_rank(int k);
  /// B_{<=k}, k >= -1: d/dx(1/(1-x) - B_{<=k}) = (1/(1-x) - B_{<=k-1})^2 - 1.
  const PLExpr& root_rank_cdf(int k);
  /// k >= -1; the k = -1 member generates E[L_n].
  const PLExpr& leaf_pair_tail(int k);
  /// k >= 0, starting from x.
  const PLExpr& closest_leaf(int k);
  /// P_{>k}, k >= -1: P'' = 2 P_{>k-1}' + 2 (1-x)^-2 P_{>k-1}, P(0) = P'(0) = 0.
  const PLExpr& greedy_tail(int k);

  const PLExpr& get(GFKind kind, int k);

  /// Leaf-pair block for rank exactly k (difference of consecutive tails).
  PLExpr leaf_pair_block(int k);

  /// c_0 + ... + c_k from B_{<=k-1} alone; zero for k = -1.
  Rational partial_sum(int k);
  /// c_k; with verify_routes also recomputed as 2 * int (1-x) B_k.
  Rational rank_constant(int k);
  Rational leaf_pair_constant(int k);
  Rational closest_leaf_constant(int k);
  std::pair<Rational, Rational> per_vertex_ratios(int k);

  /// I_{k,t} by the moment recurrence.
  Rational tail_moment(int k, int t);
  /// I_{k,t} = int_0^1 (1-y)^t P_{>k}(y) dy, integrated symbolically.
  Rational tail_moment_integral(int k, int t);

  ConstantsTable constants(int kmax);
  /// Rows 0..kmax of moment bounds; exact tails for k <= exact_kmax.
  TailTable tail_report(int kmax, double alpha0, int exact_kmax);

  /// Derivative of the family member minus the right side of its defining
  /// equation (second derivative for GreedyTail). Zero when consistent.
  PLExpr ode_residual(GFKind kind, int k);

 private:
  const PLExpr* find(GFKind kind, int k) const;
  const PLExpr& store(GFKind kind, int k, PLExpr expr);
  std::optional<PLExpr> load_from_disk(GFKind kind, int k) const;
  void save_to_disk(GFKind kind, int k, const PLExpr& expr) const;
  PLExpr compute(GFKind kind, int k);

  PLExpr root_rank_rhs(int k);
  PLExpr root_rank_cdf_rhs(int k);
  PLExpr leaf_pair_tail_rhs(int k);
  PLExpr closest_leaf_rhs(int k);
  PLExpr greedy_tail_rhs(int k);

  Options options_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<GFKind, int>, PLExpr> memo_;
  std::map<int, Rational> partial_sums_;
  std::map<int, Rational> constants_;
  std::map<std::pair<int, int>, Rational> moments_;
};

}  // namespace bstrank
