#include <doctest.h>

#include <map>

#include "bstrank/errors.hpp"
#include "bstrank/genfun.hpp"
#include "bstrank/oracle.hpp"
#include "brute.hpp"

using namespace bstrank;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

constexpr int kMaxBrute = 7;
constexpr int kMaxRank = 4;

// Averages over all n! permutations, accumulated once for n <= kMaxBrute.
struct Enumerated {
  std::vector<std::vector<Rational>> root_tail;   // [n][k+1]
  std::vector<std::vector<Rational>> counts;      // [n][k]
  std::vector<std::vector<Rational>> leaf_pairs;  // [n][k]  E[L_n 1{root rank = k}]
  std::vector<std::vector<Rational>> closest;     // [n][k]
  std::vector<std::vector<Rational>> leaf_depth;  // [n][j]
  std::vector<std::vector<Rational>> ext_depth;   // [n][j]
  std::vector<std::vector<Rational>> greedy;      // [n][k+1]
  std::vector<std::vector<Rational>> subtrees;    // [n][l]
};

const Enumerated& enumerated() {
  static const Enumerated e = [] {
    Enumerated out;
    const auto grid = [](int w) { return std::vector<std::vector<Rational>>(kMaxBrute + 1, std::vector<Rational>(w)); };
    out.root_tail = grid(kMaxRank + 2);
    out.counts = grid(kMaxRank + 1);
    out.leaf_pairs = grid(kMaxRank + 1);
    out.closest = grid(kMaxRank + 1);
    out.leaf_depth = grid(kMaxBrute + 1);
    out.ext_depth = grid(kMaxBrute + 2);
    out.greedy = grid(kMaxRank + 2);
    out.subtrees = grid(kMaxBrute + 1);
    for (int n = 1; n <= kMaxBrute; ++n) {
      const Rational weight = make_rational(BigInt(1), factorial(n));
      brute::for_each_permutation(n, [&](const std::vector<int>& perm) {
        const auto t = brute::tree_of(perm);
        const auto f = brute::facts(t);
        const auto& root = f[t.root];
        for (int k = -1; k <= kMaxRank; ++k) {
          if (root.rank > k) out.root_tail[n][k + 1] += weight;
        }
        for (const auto& v : f) {
          if (v.rank <= kMaxRank) out.counts[n][v.rank] += weight;
          for (int l = 1; l <= n; ++l) {
            if (v.size >= l) out.subtrees[n][l] += weight;
          }
        }
        if (root.rank <= kMaxRank) {
          out.leaf_pairs[n][root.rank] += weight * root.leaves_below;
          out.closest[n][root.rank] += weight * root.closest;
        }
        for (int j = 0; j <= kMaxBrute; ++j) out.leaf_depth[n][j] += weight * brute::depth_count(t, t.root, 0, j, true);
        for (int j = 0; j <= kMaxBrute + 1; ++j) {
          out.ext_depth[n][j] += weight * brute::depth_count(t, t.root, 0, j, false);
        }
        for (const auto& [len, p] : brute::greedy_distribution(t, f, t.root)) {
          for (int k = -1; k <= kMaxRank; ++k) {
            if (len > k) out.greedy[n][k + 1] += weight * p;
          }
        }
      });
    }
    return out;
  }();
  return e;
}

}  // namespace

TEST_CASE("root-rank tails match enumeration") {
  const oracle::RankDP dp(kMaxBrute, kMaxRank);
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int k = -1; k <= kMaxRank; ++k) CHECK(dp.root_rank_tail(n, k) == enumerated().root_tail[n][k + 1]);
  }
  CHECK(dp.root_rank_tail(0, 3) == 1);
  CHECK(oracle::root_rank_tail(3, 0) == 1);
  CHECK(oracle::root_rank_tail(3, 1) == q(2, 3));
}

TEST_CASE("rank counts match enumeration") {
  const oracle::RankDP dp(kMaxBrute, kMaxRank);
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int k = 0; k <= kMaxRank; ++k) CHECK(dp.expected_rank_count(n, k) == enumerated().counts[n][k]);
  }
  CHECK(dp.expected_rank_count(3, 0) == q(4, 3));
  CHECK(oracle::expected_rank_counts(3, 2) == std::vector<Rational>{q(4, 3), Rational(1), q(2, 3)});
}

TEST_CASE("pair expectations match enumeration") {
  const oracle::RankDP ranks(kMaxBrute, kMaxRank);
  const oracle::PairDP pairs(ranks, kMaxBrute, kMaxRank);
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int k = 0; k <= kMaxRank; ++k) {
      CHECK(pairs.expected_leaf_pairs(n, k) == enumerated().leaf_pairs[n][k]);
      CHECK(pairs.expected_closest_pairs(n, k) == enumerated().closest[n][k]);
    }
  }
  CHECK(pairs.leaf_pairs_tail(1, -1) == 1);
  for (int n = 2; n <= kMaxBrute; ++n) CHECK(pairs.leaf_pairs_tail(n, -1) == q(n + 1, 3));
}

TEST_CASE("leaf and external depth profiles match enumeration") {
  const auto table = oracle::leaf_depth_profile_table(kMaxBrute, kMaxBrute);
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int j = 0; j <= kMaxBrute; ++j) CHECK(table[n][j] == enumerated().leaf_depth[n][j]);
    for (int j = 0; j <= kMaxBrute + 1; ++j) CHECK(oracle::external_depth_profile(n, j) == enumerated().ext_depth[n][j]);
  }
  CHECK(oracle::leaf_depth_profile(3, 1) == q(2, 3));
}

TEST_CASE("leaves never outnumber external nodes at positive depth") {
  const auto table = oracle::leaf_depth_profile_table(40, 20);
  for (int n = 1; n <= 40; ++n) {
    for (int j = 1; j <= 20; ++j) CHECK(table[n][j] <= oracle::external_depth_profile(n, j));
  }
}

TEST_CASE("Stirling cycle numbers") {
  CHECK(oracle::stirling_cycle(0, 0) == 1);
  CHECK(oracle::stirling_cycle(4, 2) == 11);
  CHECK(oracle::stirling_cycle(5, 3) == 35);
  CHECK(oracle::stirling_cycle(3, 5) == 0);
  for (int n = 1; n <= 12; ++n) {
    BigInt total = 0;
    for (int j = 0; j <= n; ++j) total += oracle::stirling_cycle(n, j);
    CHECK(total == factorial(n));
  }
}

TEST_CASE("fringe subtree counts") {
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int l = 1; l <= n; ++l) CHECK(oracle::expected_subtrees_atleast(n, l) == enumerated().subtrees[n][l]);
  }
  CHECK(oracle::expected_subtrees_atleast(100, 1) == 100);
  CHECK_THROWS_AS(oracle::expected_subtrees_atleast(3, 4), std::invalid_argument);
}

TEST_CASE("greedy tail table matches exact enumeration") {
  const auto pi = oracle::greedy_tail_table(kMaxBrute, kMaxRank);
  for (int n = 1; n <= kMaxBrute; ++n) {
    for (int k = -1; k <= kMaxRank; ++k) CHECK(pi[k + 1][n] == enumerated().greedy[n][k + 1]);
  }
  // Greedy dominates the shortest path.
  const oracle::RankDP ranks(60, 6);
  const auto big = oracle::greedy_tail_table(60, 6);
  for (int n = 1; n <= 60; ++n) {
    for (int k = 0; k <= 6; ++k) CHECK(big[k + 1][n] >= ranks.root_rank_tail(n, k));
  }
}

TEST_CASE("mass conservation and moment ratio") {
  const oracle::RankDP ranks(60, 59);
  for (int n = 1; n <= 60; ++n) {
    Rational mass(0);
    for (const auto& e : ranks.expected_rank_counts(n)) mass += e;
    CHECK(mass == n);
  }
  CHECK(oracle::moment_gf_ratio(ranks, 10, Rational(1)) == 1);
  CHECK(oracle::moment_gf_ratio(3, Rational(2)) == 2);
  const oracle::RankDP truncated(60, 3);
  CHECK_THROWS_AS(oracle::moment_gf_ratio(truncated, 60, Rational(2)), std::invalid_argument);
}

TEST_CASE("expected rank fractions approach the constants") {
  GeneratingFunctions gf;
  const oracle::RankDP ranks(400, 3);
  for (int k = 0; k <= 3; ++k) {
    const double at400 = to_double(ranks.expected_rank_count(400, k) / 400);
    const double limit = to_double(gf.rank_constant(k));
    CHECK(at400 == doctest::Approx(limit).epsilon(0.01));
  }
}

TEST_CASE("argument checks") {
  const oracle::RankDP dp(10, 2);
  CHECK_THROWS_AS(dp.root_rank_tail(11, 0), std::invalid_argument);
  CHECK_THROWS_AS(dp.root_rank_tail(5, 3), std::invalid_argument);
  CHECK_THROWS_AS(dp.root_rank_tail(5, -2), std::invalid_argument);
  CHECK_THROWS_AS(oracle::PairDP(dp, 11, 2), std::invalid_argument);
}
