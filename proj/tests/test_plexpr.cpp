#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>

#include "bstrank/plexpr.hpp"

using namespace bstrank;

namespace {

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

PLExpr random_expr(std::mt19937& rng, int min_upow, int max_upow, int max_vpow, int terms) {
  std::uniform_int_distribution<int> up(min_upow, max_upow);
  std::uniform_int_distribution<int> vp(0, max_vpow);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  PLExpr e;
  for (int i = 0; i < terms; ++i) e += PLExpr::term(q(num(rng), den(rng)), up(rng), vp(rng));
  return e;
}

// Independent Taylor arithmetic for the series oracle.
using Coeffs = std::vector<Rational>;

Coeffs truncated_mul(const Coeffs& a, const Coeffs& b, std::size_t order) {
  Coeffs out(order + 1, Rational(0));
  for (std::size_t i = 0; i <= order; ++i) {
    for (std::size_t j = 0; i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs log_series(std::size_t order) {
  Coeffs out(order + 1, Rational(0));
  for (std::size_t n = 1; n <= order; ++n) out[n] = q(1, static_cast<std::int64_t>(n));
  return out;
}

// (1 - x)^b by the recurrence a_{n+1} = a_n (n - b) / (n + 1).
Coeffs power_series(int b, std::size_t order) {
  Coeffs out(order + 1, Rational(0));
  out[0] = 1;
  for (std::size_t n = 0; n < order; ++n) {
    out[n + 1] = out[n] * q(static_cast<std::int64_t>(n) - b, static_cast<std::int64_t>(n) + 1);
  }
  return out;
}

Coeffs naive_series(const PLExpr& f, std::size_t order) {
  Coeffs out(order + 1, Rational(0));
  for (const auto& [key, c] : f.terms()) {
    Coeffs t = power_series(key.upow, order);
    for (int i = 0; i < key.vpow; ++i) t = truncated_mul(t, log_series(order), order);
    for (std::size_t n = 0; n <= order; ++n) out[n] += c * t[n];
  }
  return out;
}

double direct_eval(const PLExpr& f, double x) {
  double s = 0.0;
  for (const auto& [key, c] : f.terms()) {
    s += to_double(c) * std::pow(1.0 - x, key.upow) * std::pow(std::log(1.0 / (1.0 - x)), key.vpow);
  }
  return s;
}

}  // namespace

TEST_CASE("constructors and canonical form") {
  CHECK(PLExpr::x() == PLExpr::constant(Rational(1)) - PLExpr::u());
  CHECK((PLExpr::u() - PLExpr::u()).is_zero());
  CHECK(PLExpr::term(Rational(0), 3, 1).is_zero());
  const PLExpr e = PLExpr::term(q(2, 4), 1, 2);
  CHECK(e.coeff(1, 2) == q(1, 2));
  CHECK(is_canonical(e.coeff(1, 2)));
  CHECK(e.coeff(0, 0) == 0);
}

TEST_CASE("derivative examples") {
  // d/dx u = -1, d/dx v = 1/u, d/dx u^-1 = u^-2
  CHECK(differentiate(PLExpr::u()) == PLExpr::constant(q(-1)));
  CHECK(differentiate(PLExpr::v()) == PLExpr::u(-1));
  CHECK(differentiate(PLExpr::u(-1)) == PLExpr::u(-2));
  CHECK(differentiate(PLExpr::term(Rational(1), 2, 1)) ==
        PLExpr::term(q(-2), 1, 1) + PLExpr::term(Rational(1), 1, 0));
}

TEST_CASE("antiderivative examples") {
  CHECK(antiderivative(PLExpr::v(), Rational(0)) ==
        PLExpr::constant(Rational(1)) - PLExpr::u() - PLExpr::term(Rational(1), 1, 1));
  CHECK(antiderivative(PLExpr::u(-1), Rational(0)) == PLExpr::v());
  CHECK(antiderivative(PLExpr::term(Rational(1), -1, 2), Rational(0)) == PLExpr::term(q(1, 3), 0, 3));
  CHECK(antiderivative(PLExpr::constant(Rational(1)), Rational(0)) == PLExpr::x());
  CHECK(antiderivative(PLExpr::u(-2), Rational(5)).value_at_zero() == 5);
}

TEST_CASE("antiderivative inverts differentiation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const PLExpr f = random_expr(rng, -3, 4, 3, 5);
    const Rational a = q(static_cast<int>(rng() % 11) - 5, 3);
    const PLExpr F = antiderivative(f, a);
    CHECK(differentiate(F) == f);
    CHECK(F.value_at_zero() == a);
  }
}

TEST_CASE("ring laws") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const PLExpr a = random_expr(rng, -2, 3, 2, 4);
    const PLExpr b = random_expr(rng, -2, 3, 2, 4);
    const PLExpr c = random_expr(rng, -2, 3, 2, 4);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK(a * PLExpr::constant(Rational(1)) == a);
    CHECK(differentiate(a * b) == differentiate(a) * b + a * differentiate(b));
    CHECK(differentiate(a + b) == differentiate(a) + differentiate(b));
    const PLExpr ab = a * b;
    for (const auto& [key, coeff] : ab.terms()) {
      CHECK(coeff != 0);
      CHECK(is_canonical(coeff));
    }
  }
}

TEST_CASE("series matches independent Taylor arithmetic") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const PLExpr f = random_expr(rng, -3, 4, 3, 5);
    CHECK(series(f, 20) == naive_series(f, 20));
  }
  // v = sum x^n / n
  const auto v = series(PLExpr::v(), 6);
  CHECK(v[0] == 0);
  CHECK(v[1] == 1);
  CHECK(v[6] == q(1, 6));
  // u^-1 = sum x^n
  for (const auto& c : series(PLExpr::u(-1), 10)) CHECK(c == 1);
}

TEST_CASE("series of a product is the Cauchy product") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const PLExpr a = random_expr(rng, -2, 3, 2, 3);
    const PLExpr b = random_expr(rng, -2, 3, 2, 3);
    CHECK(series(a * b, 15) == truncated_mul(series(a, 15), series(b, 15), 15));
  }
}

TEST_CASE("integral over [0,1] matches numerical quadrature") {
  CHECK(integral01(PLExpr::term(Rational(1), 0, 2)) == 2);       // c!/(b+1)^(c+1)
  CHECK(integral01(PLExpr::term(Rational(1), 2, 1)) == q(1, 9));
  CHECK_THROWS_AS(integral01(PLExpr::u(-1)), DivergentIntegral);

  boost::math::quadrature::tanh_sinh<double> integrator;
  std::mt19937 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const PLExpr f = random_expr(rng, 0, 4, 3, 5);
    const double numeric = integrator.integrate([&](double x) { return direct_eval(f, x); }, 0.0, 1.0);
    CHECK(to_double(integral01(f)) == doctest::Approx(numeric).epsilon(1e-9));
  }
}

TEST_CASE("floating evaluation") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const PLExpr f = random_expr(rng, -2, 4, 3, 5);
    for (double x : {0.0, 0.1, 0.5, 0.9}) CHECK(eval_real(f, x) == doctest::Approx(direct_eval(f, x)));
  }
  CHECK_THROWS_AS(eval_real(PLExpr::v(), 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_real(PLExpr::v(), -0.5), std::domain_error);
}

TEST_CASE("display") {
  CHECK(to_display(PLExpr()) == "0");
  const PLExpr b1 = PLExpr::constant(q(-7, 3)) + PLExpr::term(q(2), 0, 1) + PLExpr::term(q(3), 1, 0) -
                    PLExpr::u(2) + PLExpr::term(q(1, 3), 3, 0);
  CHECK(to_display(b1) == "-7/3 + 2*v + 3*u - u^2 + 1/3*u^3");
}

TEST_CASE("serialization round trip") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const PLExpr f = random_expr(rng, -4, 6, 4, 8);
    const std::string text = serialize(f);
    CHECK(deserialize(text) == f);
    CHECK(serialize(deserialize(text)) == text);
  }
  CHECK(serialize(PLExpr()) == "[]");
  CHECK(serialize(PLExpr::term(q(-1, 3), -1, 2)) == R"([{"num":"-1","den":"3","upow":-1,"vpow":2}])");
}

TEST_CASE("deserialize rejects malformed input") {
  CHECK_THROWS_AS(deserialize("not json"), std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"({"num":"1"})"), std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"([{"num":"0","den":"1","upow":0,"vpow":0}])"), std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"([{"num":"1","den":"0","upow":0,"vpow":0}])"), std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"([{"num":"1","den":"1","upow":0,"vpow":-1}])"), std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"([{"num":"1","den":"1","upow":1,"vpow":0},{"num":"1","den":"1","upow":0,"vpow":0}])"),
                  std::invalid_argument);
  CHECK_THROWS_AS(deserialize(R"([{"num":"x","den":"1","upow":0,"vpow":0}])"), std::invalid_argument);
}
