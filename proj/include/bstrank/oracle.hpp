#pragma once

#include <vector>

#include "bstrank/rational.hpp"

namespace bstrank::oracle {

/// Default ceiling on n for the exact dynamic programs.
inline constexpr int kDefaultMaxN = 500;

/// Exact root-rank and rank-count tables of the random decreasing binary
/// tree on [n], for all n <= nmax and ranks k <= kmax.
///
/// Root-rank tails are computed as integer permutation counts
/// b_{n,>k} = sum_j C(n-1, j) b_{j,>k-1} b_{n-1-j,>k-1}, so the quadratic
/// convolution never touches a fraction; they are divided by n! on access.
class RankDP {
 public:
  RankDP(int nmax, int kmax);

  int nmax() const { return nmax_; }
  int kmax() const { return kmax_; }

  /// P(root rank > k); k >= -1, 0 <= n <= nmax. p_{0,>k} = 1 by convention.
  Rational root_rank_tail(int n, int k) const;
  /// P(root rank = k).
  Rational root_rank_prob(int n, int k) const;
  /// E_{n,k}: expected number of rank-k vertices; E_{0,k} = 0.
  const Rational& expected_rank_count(int n, int k) const;
  /// E_{n,0..kmax}.
  std::vector<Rational> expected_rank_counts(int n) const;

 private:
  int nmax_;
  int kmax_;
  std::vector<BigInt> fact_;
  // counts_[k + 1][n] = n! * p_{n,>k}
  std::vector<std::vector<BigInt>> counts_;
  // expected_[k][n] = E_{n,k}
  std::vector<std::vector<Rational>> expected_;
};

/// Exact leaf-pair and closest-leaf expectations for n <= nmax, k <= kmax.
///   f_{n,>k} = E[L_n 1{root rank > k}]
///   g_{n,k}  = E[(closest leaves of the root) 1{root rank = k}]
class PairDP {
 public:
  PairDP(const RankDP& ranks, int nmax, int kmax);

  /// k >= -1; f_{n,>-1} = E[L_n].
  const Rational& leaf_pairs_tail(int n, int k) const;
  /// f_{n,k} = f_{n,>k-1} - f_{n,>k}.
  Rational expected_leaf_pairs(int n, int k) const;
  const Rational& expected_closest_pairs(int n, int k) const;

 private:
  int nmax_;
  int kmax_;
  std::vector<std::vector<Rational>> ftail_;    // [k + 1][n]
  std::vector<std::vector<Rational>> closest_;  // [k][n]
};

/// Single-value conveniences; each builds the tables it needs.
Rational root_rank_tail(int n, int k);
std::vector<Rational> expected_rank_counts(int n, int kmax);
Rational expected_leaf_pairs(int n, int k);
Rational expected_closest_pairs(int n, int k);

/// E[X_{n,j}]: expected number of leaves at depth j, for n <= nmax, j <= jmax.
std::vector<std::vector<Rational>> leaf_depth_profile_table(int nmax, int jmax);
Rational leaf_depth_profile(int n, int j);
/// E[external nodes at depth j] = 2^j |s(n,j)| / n!, unsigned Stirling cycle numbers.
Rational external_depth_profile(int n, int j);
/// |s(n, j)|.
BigInt stirling_cycle(int n, int j);

/// E[Y_{n,l}]: expected number of fringe subtrees with at least l vertices,
/// by dynamic programming; throws InternalInconsistency when it disagrees
/// with (n+1)(2/(l+1) - 1/(n+1)).
Rational expected_subtrees_atleast(int n, int l);

/// (1/n) sum_k rho^k E_{n,k}, the mean of rho^(rank) over vertices.
Rational moment_gf_ratio(const RankDP& ranks, int n, const Rational& rho);
Rational moment_gf_ratio(int n, const Rational& rho);

/// pi_{n,>k}: P(the randomized greedy root-to-leaf path is longer than k),
/// table [k + 1][n] for n <= nmax, -1 <= k <= kmax.
std::vector<std::vector<Rational>> greedy_tail_table(int nmax, int kmax);

}  // namespace bstrank::oracle
