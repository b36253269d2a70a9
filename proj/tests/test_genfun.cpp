#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bstrank/genfun.hpp"

using namespace bstrank;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("bstrank-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("first members of each family") {
  GeneratingFunctions gf;
  CHECK(gf.root_rank(0) == PLExpr::x());
  CHECK(gf.root_rank_cdf(-1).is_zero());
  CHECK(gf.root_rank_cdf(0) == PLExpr::x());
  CHECK(to_display(gf.root_rank(1)) == "-7/3 + 2*v + 3*u - u^2 + 1/3*u^3");
  CHECK(gf.leaf_pair_tail(-1) == PLExpr::term(q(-1, 3), 1, 0) + PLExpr::term(q(1, 3), -2, 0));
  CHECK(gf.closest_leaf(0) == PLExpr::x());
  CHECK(gf.greedy_tail(-1) == PLExpr::u(-1) - PLExpr::constant(Rational(1)));
}

TEST_CASE("rank constants") {
  GeneratingFunctions gf;
  CHECK(gf.rank_constant(0) == q(1, 3));
  CHECK(gf.rank_constant(1) == q(3, 10));
  CHECK(gf.rank_constant(2) == q(1721, 8100));
  CHECK(to_string(gf.rank_constant(3)) == "250488312501647783/2294809143026400000");
  CHECK(to_string(gf.rank_constant(4)) ==
        "122058464141653662196290113232646304412999902283512425580156787323/"
        "3353377025022449199852900725670960067418280803797231788288000000000");
  CHECK(gf.partial_sum(-1) == 0);
  for (int k = 0; k <= 4; ++k) CHECK(gf.partial_sum(k) == gf.partial_sum(k - 1) + gf.rank_constant(k));
}

TEST_CASE("leaf-pair and closest-leaf constants") {
  GeneratingFunctions gf;
  CHECK(gf.leaf_pair_constant(0) == q(1, 3));
  CHECK(gf.leaf_pair_constant(1) == q(17, 30));
  CHECK(gf.leaf_pair_constant(2) == q(152389, 170100));
  CHECK(gf.closest_leaf_constant(0) == q(1, 3));
  CHECK(gf.closest_leaf_constant(1) == q(1, 3));
  CHECK(gf.closest_leaf_constant(2) == q(49, 180));
  CHECK(gf.per_vertex_ratios(2) == std::pair{q(152389, 36141), q(2205, 1721)});
}

TEST_CASE("the two root-rank families agree") {
  GeneratingFunctions gf;
  PLExpr sum;
  for (int k = 0; k <= 4; ++k) {
    sum += gf.root_rank(k);
    CHECK(sum == gf.root_rank_cdf(k));
  }
}

TEST_CASE("coefficients are probabilities, monotone in k") {
  GeneratingFunctions gf;
  std::vector<Rational> prev(31, Rational(0));
  for (int k = 0; k <= 4; ++k) {
    const auto cdf = series(gf.root_rank_cdf(k), 30);
    const auto prob = series(gf.root_rank(k), 30);
    for (int n = 1; n <= 30; ++n) {
      CHECK(sgn(prob[n]) >= 0);
      CHECK(cdf[n] <= 1);
      CHECK(cdf[n] >= prev[n]);
    }
    prev = cdf;
  }
  std::vector<Rational> tail_prev(31, Rational(1));
  for (int k = -1; k <= 4; ++k) {
    const auto tail = series(gf.greedy_tail(k), 30);
    for (int n = 1; n <= 30; ++n) {
      CHECK(sgn(tail[n]) >= 0);
      CHECK(tail[n] <= tail_prev[n]);
    }
    tail_prev = tail;
  }
}

TEST_CASE("expected leaves and leaf-pair tail") {
  GeneratingFunctions gf;
  const auto leaves = series(gf.leaf_pair_tail(-1), 20);
  CHECK(leaves[1] == 1);
  for (int n = 2; n <= 20; ++n) CHECK(leaves[n] == q(n + 1, 3));
}

TEST_CASE("residuals vanish") {
  GeneratingFunctions gf;
  for (int k = 0; k <= 3; ++k) {
    CHECK(gf.ode_residual(GFKind::RootRank, k).is_zero());
    CHECK(gf.ode_residual(GFKind::RootRankCdf, k).is_zero());
    CHECK(gf.ode_residual(GFKind::LeafPairTail, k).is_zero());
    CHECK(gf.ode_residual(GFKind::ClosestLeaf, k).is_zero());
    CHECK(gf.ode_residual(GFKind::GreedyTail, k).is_zero());
  }
}

TEST_CASE("structure bounds on B_k") {
  GeneratingFunctions gf;
  for (int k = 0; k <= 4; ++k) {
    const PLExpr& b = gf.root_rank(k);
    const int limit = (1 << (k + 1)) - 1;
    CHECK(b.min_upow() >= 0);
    CHECK(b.max_upow() <= limit);
    CHECK(b.max_vpow() <= limit);
  }
}

TEST_CASE("tail moments") {
  GeneratingFunctions gf;
  for (int t = 1; t <= 5; ++t) CHECK(gf.tail_moment(-1, t) == q(1, t * (t + 1)));
  CHECK(gf.tail_moment(0, 1) == q(1, 3));
  for (int k = 0; k <= 4; ++k) {
    for (int t = 1; t <= 3; ++t) CHECK(gf.tail_moment(k, t) == gf.tail_moment_integral(k, t));
  }
}

TEST_CASE("tail report") {
  GeneratingFunctions gf;
  const auto table = gf.tail_report(5, 0.3733646, 5);
  REQUIRE(table.rows.size() == 6);
  const auto& last = table.rows.back();
  REQUIRE(last.tail);
  CHECK(to_double(*last.tail) == doctest::Approx(0.00125).epsilon(0.01));
  for (const auto& row : table.rows) {
    CHECK(row.moments.size() == 4);
    CHECK(*row.tail <= row.upper);
    CHECK(*row.tail <= row.theorem_bound);
    CHECK(row.tail_prev.has_value() == (row.k > 0));
  }
}

TEST_CASE("disk cache round trip") {
  TempDir dir;
  GeneratingFunctions::Options opt;
  opt.cache_dir = dir.path;
  {
    GeneratingFunctions gf(opt);
    (void)gf.root_rank(2);
    (void)gf.greedy_tail(1);
  }
  CHECK(std::filesystem::exists(dir.path / "root_rank_2.plx"));
  CHECK(std::filesystem::exists(dir.path / "greedy_tail_1.plx"));

  GeneratingFunctions fresh;
  GeneratingFunctions cached(opt);
  CHECK(cached.root_rank(2) == fresh.root_rank(2));
  CHECK(cached.greedy_tail(1) == fresh.greedy_tail(1));

  {
    std::ofstream out(dir.path / "root_rank_2.plx", std::ios::trunc);
    out << "garbage\n";
  }
  GeneratingFunctions after_corruption(opt);
  CHECK(after_corruption.root_rank(2) == fresh.root_rank(2));
}

TEST_CASE("argument checks") {
  GeneratingFunctions gf;
  CHECK_THROWS_AS(gf.root_rank(-1), std::invalid_argument);
  CHECK_THROWS_AS(gf.root_rank_cdf(-2), std::invalid_argument);
  CHECK_THROWS_AS(gf.closest_leaf(-1), std::invalid_argument);
  CHECK_THROWS_AS(gf.tail_moment(0, 0), std::invalid_argument);
}
