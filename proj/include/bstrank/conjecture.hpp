#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bstrank/rational.hpp"

namespace bstrank {
class GeneratingFunctions;
}

namespace bstrank::conjecture {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// input = residual * prod(prime^exponent); every listed prime <= bound and
/// the residual has no prime factor <= bound.
struct FactorReport {
  BigInt input;
  std::vector<PrimePower> factors;
  BigInt residual;
  std::uint64_t bound = 0;

  bool fully_factored() const { return residual == 1; }
  BigInt reconstruct() const;
};

/// Primes <= bound by the sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Trial division by every prime <= bound. Requires n >= 1, bound >= 2.
FactorReport factor_smooth(const BigInt& n, std::uint64_t bound);

enum class Verdict { Pass, Fail, Unknown, NotApplicable };
std::string verdict_name(Verdict v);

struct ConjectureVerdict {
  int k = 0;
  FactorReport denominator;
  std::uint64_t largest_prime = 0;  // 0 when the denominator is 1
  std::uint64_t threshold = 0;      // 2^(k+1) + 1
  bool gap_free = false;            // primes are exactly 2..largest_prime
  Verdict smooth_bound = Verdict::Unknown;  // largest prime <= threshold
  Verdict gap_free_primes = Verdict::NotApplicable;  // only for k >= 2
};

/// Factors denom(c) with bound 2^(k+1)+1. The bound verdict passes iff the
/// factorization is complete; the gap-free verdict (k >= 2) passes iff the
/// prime support is every prime up to the largest one.
ConjectureVerdict check_conjectures(int k, const Rational& c);

struct StructureReport {
  int k = 0;
  int limit = 0;  // 2^(k+1) - 1
  int min_upow = 0;
  int max_upow = 0;
  int max_vpow = 0;
  std::uint64_t max_denominator_prime = 1;  // 1 when every coefficient is an integer
  bool exponents_ok = false;
  bool denominators_ok = false;
  bool pass() const { return exponents_ok && denominators_ok; }
};

/// Exponent and denominator-prime bounds over the terms of B_k.
StructureReport check_pl_structure(GeneratingFunctions& gf, int k);

/// alpha + alpha log(2/alpha) - 1
double alpha_equation(double alpha);
/// Smaller positive root of alpha_equation, by bisection to absolute tol.
double alpha0(double tol = 1e-12);

struct EnvelopeRow {
  int k = 0;
  double tail = 0.0;             // 1 - S_k
  double lower_reference = 0.0;  // (2/3) exp(-k/alpha0)
  double upper_bound = 0.0;      // (6k+7)/3 * 3^-k
  double scale = 0.0;            // tail / exp(-k/alpha0)
  std::optional<double> decay_ratio;  // tail_k / tail_{k-1}
};

struct EnvelopeReport {
  double alpha0 = 0.0;
  double gamma_estimate = 0.0;  // min scale over the table
  double decay_floor = 0.0;     // exp(-1/alpha0)
  std::vector<EnvelopeRow> rows;
};

/// Tail against the exponential envelopes. Throws InternalInconsistency when
/// a tail is non-positive or above the proven upper bound.
EnvelopeReport lower_envelope_report(GeneratingFunctions& gf, int kmax, double alpha0);

}  // namespace bstrank::conjecture
