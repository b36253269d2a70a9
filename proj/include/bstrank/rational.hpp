#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace bstrank {

/// Arbitrary-precision integer.
using BigInt = mpz_class;

/// Exact fraction, always kept in lowest terms with a positive denominator.
/// GMP canonicalizes the result of every arithmetic operation; values built
/// from a numerator/denominator pair go through make_rational().
using Rational = mpq_class;

Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or a
/// zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const BigInt& n);
std::string to_string(const Rational& q);

/// True when gcd(|num|, den) == 1 and den > 0.
bool is_canonical(const Rational& q);

/// Nearest double; exact values stay in Rational, this is for reporting only.
double to_double(const Rational& q);

/// Number of decimal digits of |n| (0 has one digit).
std::size_t decimal_digits(const BigInt& n);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
Rational rational_pow(const Rational& base, unsigned exp);

}  // namespace bstrank
