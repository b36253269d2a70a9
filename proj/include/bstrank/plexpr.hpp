#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bstrank/rational.hpp"

namespace bstrank {

/// Exponent pair of one PL monomial u^upow * v^vpow, where u = 1 - x and
/// v = log(1/(1 - x)). Ordered by (upow, vpow).
struct PLKey {
  int upow = 0;
  int vpow = 0;
  friend auto operator<=>(const PLKey&, const PLKey&) = default;
};

class DivergentIntegral : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A finite rational combination of (1-x)^b * log(1/(1-x))^c on [0, 1).
///
/// Monomials with distinct exponent pairs are linearly independent as
/// functions, so the canonical term map (no zero coefficients) decides
/// equality exactly. upow may be negative; vpow never is.
class PLExpr {
 public:
  using TermMap = std::map<PLKey, Rational>;

  PLExpr() = default;

  static PLExpr term(const Rational& coeff, int upow, int vpow);
  static PLExpr constant(const Rational& c) { return term(c, 0, 0); }
  /// (1 - x)^power
  static PLExpr u(int power = 1) { return term(Rational(1), power, 0); }
  /// log(1/(1 - x))^power
  static PLExpr v(int power = 1) { return term(Rational(1), 0, power); }
  /// The identity function x = 1 - u.
  static PLExpr x();

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of u^upow v^vpow (zero when absent).
  Rational coeff(int upow, int vpow) const;

  /// f(0): at x = 0, u = 1 and v = 0, so only vpow == 0 terms contribute.
  Rational value_at_zero() const;

  int min_upow() const;
  int max_upow() const;
  int max_vpow() const;

  PLExpr& operator+=(const PLExpr& other);
  PLExpr& operator-=(const PLExpr& other);
  PLExpr& operator*=(const Rational& a);

  friend PLExpr operator+(PLExpr a, const PLExpr& b) { return a += b; }
  friend PLExpr operator-(PLExpr a, const PLExpr& b) { return a -= b; }
  friend PLExpr operator-(PLExpr a) { return a *= Rational(-1); }
  friend PLExpr operator*(PLExpr a, const Rational& s) { return a *= s; }
  friend PLExpr operator*(const Rational& s, PLExpr a) { return a *= s; }
  friend PLExpr operator*(const PLExpr& a, const PLExpr& b);

  friend bool operator==(const PLExpr& a, const PLExpr& b) { return a.terms_ == b.terms_; }

 private:
  void accumulate(const PLKey& key, const Rational& c);

  TermMap terms_;
};

PLExpr add(const PLExpr& f, const PLExpr& g);
PLExpr scale(const PLExpr& f, const Rational& a);
PLExpr mul(const PLExpr& f, const PLExpr& g);

/// d/dx, termwise: u^b v^c -> -b u^(b-1) v^c + c u^(b-1) v^(c-1).
PLExpr differentiate(const PLExpr& f);

/// The antiderivative F with F(0) = value_at_0. Terms with b = -1 integrate
/// to v^(c+1)/(c+1); all others reduce c by one per integration by parts.
PLExpr antiderivative(const PLExpr& f, const Rational& value_at_0);

/// Exact integral over [0, 1]: each term contributes c!/(b+1)^(c+1).
/// Throws DivergentIntegral when some term has upow < 0.
Rational integral01(const PLExpr& f);

/// Exact Taylor coefficients [x^0 .. x^order] at x = 0.
std::vector<Rational> series(const PLExpr& f, unsigned order);

/// Floating evaluation at x in [0, 1); throws std::domain_error otherwise.
double eval_real(const PLExpr& f, double x);

/// Human-readable rendering, e.g. "2*v - 7/3 + 3*u - u^2 + 1/3*u^3".
std::string to_display(const PLExpr& f);

/// Stable text form: a JSON array of {"num","den","upow","vpow"} records
/// sorted by (upow, vpow), numerator and denominator as decimal strings.
std::string serialize(const PLExpr& f);
/// Inverse of serialize(). Throws std::invalid_argument on malformed input,
/// zero coefficients, duplicate or unsorted keys, or a negative vpow.
PLExpr deserialize(std::string_view text);

}  // namespace bstrank
