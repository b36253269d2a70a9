#include <doctest.h>

#include <cmath>
#include <random>

#include "bstrank/conjecture.hpp"
#include "bstrank/genfun.hpp"

using namespace bstrank;
using conjecture::PrimePower;
using conjecture::Verdict;

TEST_CASE("sieve") {
  CHECK(conjecture::primes_up_to(1).empty());
  CHECK(conjecture::primes_up_to(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(conjecture::primes_up_to(1000000).size() == 78498);
}

TEST_CASE("smooth factorization") {
  const auto f = conjecture::factor_smooth(BigInt(360), 10);
  CHECK(f.factors == std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(f.fully_factored());

  const auto g = conjecture::factor_smooth(BigInt(2 * 101), 50);
  CHECK(g.factors == std::vector<PrimePower>{{2, 1}});
  CHECK(g.residual == 101);
  CHECK_FALSE(g.fully_factored());

  CHECK(conjecture::factor_smooth(BigInt(1), 5).factors.empty());
  CHECK_THROWS_AS(conjecture::factor_smooth(BigInt(0), 5), std::invalid_argument);
  CHECK_THROWS_AS(conjecture::factor_smooth(BigInt(10), 1), std::invalid_argument);
}

TEST_CASE("factorization reconstructs its input") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    BigInt n = 1;
    for (int i = 0; i < 6; ++i) n *= static_cast<unsigned long>(rng() % 100000 + 1);
    const auto f = conjecture::factor_smooth(n, 1000);
    CHECK(f.reconstruct() == n);
    for (const auto& pp : f.factors) CHECK(pp.prime <= 1000);
    CHECK(conjecture::factor_smooth(f.residual, 1000).factors.empty());
  }
}

TEST_CASE("conjecture verdicts on synthetic values") {
  // 1/10 at k = 1: primes 2, 5 within 5, gap-free not asked below k = 2.
  const auto a = conjecture::check_conjectures(1, make_rational(1, 10));
  CHECK(a.smooth_bound == Verdict::Pass);
  CHECK(a.gap_free_primes == Verdict::NotApplicable);
  CHECK(a.threshold == 5);

  // 1/14 at k = 2: 7 <= 9 but 3 and 5 are missing.
  const auto b = conjecture::check_conjectures(2, make_rational(1, 14));
  CHECK(b.smooth_bound == Verdict::Pass);
  CHECK(b.gap_free_primes == Verdict::Fail);

  // 1/11 at k = 2: above the bound, so the support is unknown.
  const auto c = conjecture::check_conjectures(2, make_rational(1, 11));
  CHECK(c.smooth_bound == Verdict::Fail);
  CHECK(c.gap_free_primes == Verdict::Unknown);

  const auto d = conjecture::check_conjectures(2, Rational(3));
  CHECK(d.largest_prime == 0);
  CHECK(d.smooth_bound == Verdict::Pass);
}

TEST_CASE("conjectures hold for the computed constants") {
  GeneratingFunctions gf;
  const std::uint64_t largest[] = {3, 5, 5, 17, 31};
  for (int k = 0; k <= 4; ++k) {
    const auto v = conjecture::check_conjectures(k, gf.rank_constant(k));
    CHECK(v.smooth_bound == Verdict::Pass);
    CHECK(v.largest_prime == largest[k]);
    if (k >= 2) CHECK(v.gap_free_primes == Verdict::Pass);
    CHECK(conjecture::check_pl_structure(gf, k).pass());
  }
  const auto c4 = conjecture::check_conjectures(4, gf.rank_constant(4));
  CHECK(c4.denominator.factors ==
        std::vector<PrimePower>{{2, 17}, {3, 18}, {5, 9}, {7, 8}, {11, 8}, {13, 7}, {17, 6}, {19, 5}, {23, 4},
                                {29, 2}, {31, 1}});
}

TEST_CASE("numerator of c_4 is a product of two primes") {
  GeneratingFunctions gf;
  const BigInt num = gf.rank_constant(4).get_num();
  CHECK(mpz_divisible_ui_p(num.get_mpz_t(), 232196467) != 0);
  const BigInt other = num / 232196467;
  CHECK(mpz_probab_prime_p(BigInt(232196467).get_mpz_t(), 30) > 0);
  CHECK(mpz_probab_prime_p(other.get_mpz_t(), 30) > 0);
  CHECK(other > 232196467);
}

TEST_CASE("structure check rejects an out-of-range k") {
  GeneratingFunctions gf;
  CHECK_THROWS_AS(conjecture::check_pl_structure(gf, -1), std::invalid_argument);
  CHECK_THROWS_AS(conjecture::check_conjectures(-1, Rational(1)), std::invalid_argument);
}

TEST_CASE("alpha_0") {
  const double a = conjecture::alpha0();
  CHECK(a > 0.3725);
  CHECK(a < 0.3735);
  CHECK(std::abs(conjecture::alpha_equation(a)) < 1e-10);
  CHECK(conjecture::alpha_equation(0.1) < 0.0);
  CHECK(conjecture::alpha_equation(0.9) > 0.0);
  CHECK_THROWS_AS(conjecture::alpha0(0.0), std::invalid_argument);
}

TEST_CASE("lower envelope report") {
  GeneratingFunctions gf;
  const auto r = conjecture::lower_envelope_report(gf, 4, conjecture::alpha0());
  REQUIRE(r.rows.size() == 5);
  CHECK(r.gamma_estimate > 0.0);
  CHECK(r.decay_floor == doctest::Approx(std::exp(-1.0 / conjecture::alpha0())));
  CHECK_FALSE(r.rows[0].decay_ratio.has_value());
  for (const auto& row : r.rows) {
    CHECK(row.tail > 0.0);
    CHECK(row.tail <= row.upper_bound);
    CHECK(row.scale >= r.gamma_estimate);
  }
}
