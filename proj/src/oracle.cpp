#include "bstrank/oracle.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "bstrank/errors.hpp"

namespace bstrank::oracle {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

RankDP::RankDP(int nmax, int kmax) : nmax_(nmax), kmax_(kmax) {
  require(nmax >= 0, "RankDP: nmax must be >= 0");
  require(kmax >= 0, "RankDP: kmax must be >= 0");

  fact_.resize(nmax + 1);
  fact_[0] = 1;
  for (int n = 1; n <= nmax; ++n) fact_[n] = fact_[n - 1] * n;

  counts_.assign(kmax + 2, std::vector<BigInt>(nmax + 1, BigInt(0)));
  counts_[0] = fact_;  // k = -1: every root has rank > -1
  for (int k = 0; k <= kmax; ++k) counts_[k + 1][0] = 1;  // empty tree

  std::vector<BigInt> row{BigInt(1)};  // C(n-1, .)
  BigInt acc;
  BigInt prod;
  for (int n = 1; n <= nmax; ++n) {
    if (n >= 2) {
      std::vector<BigInt> next(n, BigInt(1));
      for (int j = 1; j < n - 1; ++j) next[j] = row[j - 1] + row[j];
      row = std::move(next);
    }
    for (int k = 0; k <= kmax; ++k) {
      const auto& prev = counts_[k];
      if (n == 1) {
        counts_[k + 1][1] = 0;
        continue;
      }
      // Symmetric convolution: pair j with n-1-j.
      acc = 0;
      const int m = n - 1;
      for (int j = 0; 2 * j < m; ++j) {
        if (sgn(prev[j]) == 0 || sgn(prev[m - j]) == 0) continue;
        mpz_mul(prod.get_mpz_t(), prev[j].get_mpz_t(), prev[m - j].get_mpz_t());
        mpz_addmul(acc.get_mpz_t(), prod.get_mpz_t(), row[j].get_mpz_t());
      }
      acc *= 2;
      if (m % 2 == 0 && sgn(prev[m / 2]) != 0) {
        mpz_mul(prod.get_mpz_t(), prev[m / 2].get_mpz_t(), prev[m / 2].get_mpz_t());
        mpz_addmul(acc.get_mpz_t(), prod.get_mpz_t(), row[m / 2].get_mpz_t());
      }
      counts_[k + 1][n] = acc;
    }
  }

  expected_.assign(kmax + 1, std::vector<Rational>(nmax + 1, Rational(0)));
  for (int k = 0; k <= kmax; ++k) {
    Rational running(0);  // sum_{j<n} E_{j,k}
    for (int n = 1; n <= nmax; ++n) {
      expected_[k][n] = root_rank_prob(n, k) + running * make_rational(2, n);
      running += expected_[k][n];
    }
  }
}

Rational RankDP::root_rank_tail(int n, int k) const {
  require(n >= 0 && n <= nmax_, "root_rank_tail: n out of range");
  require(k >= -1 && k <= kmax_, "root_rank_tail: k out of range");
  return make_rational(counts_[k + 1][n], fact_[n]);
}

Rational RankDP::root_rank_prob(int n, int k) const {
  require(k >= 0, "root_rank_prob: k must be >= 0");
  return root_rank_tail(n, k - 1) - root_rank_tail(n, k);
}

const Rational& RankDP::expected_rank_count(int n, int k) const {
  require(n >= 0 && n <= nmax_, "expected_rank_count: n out of range");
  require(k >= 0 && k <= kmax_, "expected_rank_count: k out of range");
  return expected_[k][n];
}

std::vector<Rational> RankDP::expected_rank_counts(int n) const {
  std::vector<Rational> out;
  for (int k = 0; k <= kmax_; ++k) out.push_back(expected_rank_count(n, k));
  return out;
}

PairDP::PairDP(const RankDP& ranks, int nmax, int kmax) : nmax_(nmax), kmax_(kmax) {
  require(nmax >= 0 && nmax <= ranks.nmax(), "PairDP: nmax exceeds the rank tables");
  require(kmax >= 0 && kmax <= ranks.kmax(), "PairDP: kmax exceeds the rank tables");

  ftail_.assign(kmax + 2, std::vector<Rational>(nmax + 1, Rational(0)));
  for (int n = 1; n <= nmax; ++n) ftail_[0][n] = n == 1 ? Rational(1) : make_rational(n + 1, 3);
  for (int k = 0; k <= kmax; ++k) {
    for (int n = 1; n <= nmax; ++n) {
      Rational s(0);
      for (int j = 1; j < n; ++j) s += ftail_[k][j] * ranks.root_rank_tail(n - 1 - j, k - 1);
      ftail_[k + 1][n] = s * make_rational(2, n);
    }
  }

  closest_.assign(kmax + 1, std::vector<Rational>(nmax + 1, Rational(0)));
  if (nmax >= 1) closest_[0][1] = 1;
  for (int k = 1; k <= kmax; ++k) {
    for (int n = 1; n <= nmax; ++n) {
      Rational s(0);
      // p_{m, >= k-1} = p_{m, > k-2}
      for (int j = 1; j < n; ++j) s += closest_[k - 1][j] * ranks.root_rank_tail(n - 1 - j, k - 2);
      closest_[k][n] = s * make_rational(2, n);
    }
  }
}

const Rational& PairDP::leaf_pairs_tail(int n, int k) const {
  require(n >= 0 && n <= nmax_, "leaf_pairs_tail: n out of range");
  require(k >= -1 && k <= kmax_, "leaf_pairs_tail: k out of range");
  return ftail_[k + 1][n];
}

Rational PairDP::expected_leaf_pairs(int n, int k) const {
  require(k >= 0, "expected_leaf_pairs: k must be >= 0");
  return leaf_pairs_tail(n, k - 1) - leaf_pairs_tail(n, k);
}

const Rational& PairDP::expected_closest_pairs(int n, int k) const {
  require(n >= 0 && n <= nmax_, "expected_closest_pairs: n out of range");
  require(k >= 0 && k <= kmax_, "expected_closest_pairs: k out of range");
  return closest_[k][n];
}

Rational root_rank_tail(int n, int k) {
  if (k == -1) return Rational(1);
  return RankDP(n, k).root_rank_tail(n, k);
}

std::vector<Rational> expected_rank_counts(int n, int kmax) {
  require(n >= 1, "expected_rank_counts: n must be >= 1");
  return RankDP(n, kmax).expected_rank_counts(n);
}

Rational expected_leaf_pairs(int n, int k) {
  require(n >= 1 && k >= 0, "expected_leaf_pairs: need n >= 1, k >= 0");
  const RankDP ranks(n, k);
  return PairDP(ranks, n, k).expected_leaf_pairs(n, k);
}

Rational expected_closest_pairs(int n, int k) {
  require(n >= 1 && k >= 0, "expected_closest_pairs: need n >= 1, k >= 0");
  const RankDP ranks(n, k);
  return PairDP(ranks, n, k).expected_closest_pairs(n, k);
}

std::vector<std::vector<Rational>> leaf_depth_profile_table(int nmax, int jmax) {
  require(nmax >= 0 && jmax >= 0, "leaf_depth_profile_table: negative size");
  std::vector<std::vector<Rational>> x(nmax + 1, std::vector<Rational>(jmax + 1, Rational(0)));
  if (nmax >= 1) x[1][0] = 1;
  for (int j = 1; j <= jmax; ++j) {
    Rational running(0);  // sum_{m<n} E[X_{m,j-1}]
    for (int n = 1; n <= nmax; ++n) {
      running += x[n - 1][j - 1];
      x[n][j] = running * make_rational(2, n);
    }
  }
  return x;
}

Rational leaf_depth_profile(int n, int j) {
  require(n >= 1 && j >= 0, "leaf_depth_profile: need n >= 1, j >= 0");
  return leaf_depth_profile_table(n, j)[n][j];
}

BigInt stirling_cycle(int n, int j) {
  require(n >= 0 && j >= 0, "stirling_cycle: negative argument");
  if (j > n) return BigInt(0);
  std::vector<BigInt> row(j + 1, BigInt(0));
  row[0] = 1;  // |s(0,0)|
  for (int m = 1; m <= n; ++m) {
    for (int i = std::min(m, j); i >= 0; --i) {
      BigInt next = row[i] * (m - 1);
      if (i > 0) next += row[i - 1];
      row[i] = next;
    }
  }
  return row[j];
}

Rational external_depth_profile(int n, int j) {
  require(n >= 1 && j >= 0, "external_depth_profile: need n >= 1, j >= 0");
  BigInt num = stirling_cycle(n, j);
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(j));
  return make_rational(num, factorial(static_cast<unsigned>(n)));
}

Rational expected_subtrees_atleast(int n, int l) {
  require(l >= 1 && n >= l, "expected_subtrees_atleast: need n >= l >= 1");
  Rational running(0);
  Rational y(0);
  for (int m = l; m <= n; ++m) {
    y = 1 + running * make_rational(2, m);
    running += y;
  }
  const Rational closed = make_rational(2 * (n + 1), l + 1) - 1;
  if (y != closed) {
    throw InternalInconsistency("expected_subtrees_atleast(" + std::to_string(n) + "," + std::to_string(l) +
                                "): recurrence " + to_string(y) + " != closed form " + to_string(closed));
  }
  return y;
}

Rational moment_gf_ratio(const RankDP& ranks, int n, const Rational& rho) {
  require(n >= 1, "moment_gf_ratio: n must be >= 1");
  require(sgn(rho) > 0, "moment_gf_ratio: rho must be positive");
  Rational total(0);
  Rational mass(0);
  Rational power(1);
  for (int k = 0; k <= ranks.kmax(); ++k) {
    const Rational& e = ranks.expected_rank_count(n, k);
    total += power * e;
    mass += e;
    power *= rho;
  }
  if (mass != n) throw std::invalid_argument("moment_gf_ratio: rank tables truncated below the maximum rank");
  return total / n;
}

Rational moment_gf_ratio(int n, const Rational& rho) {
  require(n >= 1, "moment_gf_ratio: n must be >= 1");
  // A unary chain below the root reaches rank n - 1.
  return moment_gf_ratio(RankDP(n, n - 1), n, rho);
}

std::vector<std::vector<Rational>> greedy_tail_table(int nmax, int kmax) {
  require(nmax >= 0 && kmax >= -1, "greedy_tail_table: bad size");
  std::vector<std::vector<Rational>> pi(kmax + 2, std::vector<Rational>(nmax + 1, Rational(0)));
  for (int n = 1; n <= nmax; ++n) pi[0][n] = 1;
  for (int k = 0; k <= kmax; ++k) {
    const auto& prev = pi[k];
    for (int n = 2; n <= nmax; ++n) {
      // One empty side: the path continues into the only subtree. Otherwise
      // the subtree of size j is kept with probability (n-1-j)/(n-1).
      Rational s = 2 * prev[n - 1];
      Rational inner(0);
      for (int j = 1; j <= n - 2; ++j) inner += (n - 1 - j) * prev[j] + j * prev[n - 1 - j];
      s += inner / (n - 1);
      pi[k + 1][n] = s / n;
    }
  }
  return pi;
}

}  // namespace bstrank::oracle
