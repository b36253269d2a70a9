#include "bstrank/conjecture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bstrank/errors.hpp"
#include "bstrank/genfun.hpp"

namespace bstrank::conjecture {

BigInt FactorReport::reconstruct() const {
  BigInt out = residual;
  BigInt pp;
  for (const auto& f : factors) {
    mpz_ui_pow_ui(pp.get_mpz_t(), f.prime, f.exponent);
    out *= pp;
  }
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return primes;
}

FactorReport factor_smooth(const BigInt& n, std::uint64_t bound) {
  if (n < 1) throw std::invalid_argument("factor_smooth: n must be >= 1");
  if (bound < 2) throw std::invalid_argument("factor_smooth: bound must be >= 2");
  if (bound > std::numeric_limits<unsigned long>::max()) throw std::invalid_argument("factor_smooth: bound too large");

  FactorReport report;
  report.input = n;
  report.bound = bound;
  BigInt rest = n;
  for (auto p : primes_up_to(bound)) {
    if (rest == 1) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e > 0) report.factors.push_back({p, e});
  }
  report.residual = rest;
  return report;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Unknown: return "UNKNOWN";
    case Verdict::NotApplicable: return "N/A";
  }
  return "UNKNOWN";
}

ConjectureVerdict check_conjectures(int k, const Rational& c) {
  if (k < 0 || k > 60) throw std::invalid_argument("check_conjectures: k out of range");
  if (!is_canonical(c)) throw std::invalid_argument("check_conjectures: value not in lowest terms");
  ConjectureVerdict v;
  v.k = k;
  v.threshold = (std::uint64_t{1} << (k + 1)) + 1;
  v.denominator = factor_smooth(c.get_den(), v.threshold);
  v.largest_prime = v.denominator.factors.empty() ? 0 : v.denominator.factors.back().prime;
  v.smooth_bound = v.denominator.fully_factored() ? Verdict::Pass : Verdict::Fail;

  const auto all = primes_up_to(std::max<std::uint64_t>(v.largest_prime, 2));
  std::vector<std::uint64_t> support;
  for (const auto& f : v.denominator.factors) support.push_back(f.prime);
  std::vector<std::uint64_t> expected;
  for (auto p : all) {
    if (p <= v.largest_prime) expected.push_back(p);
  }
  v.gap_free = support == expected;
  if (k >= 2) {
    if (!v.denominator.fully_factored()) {
      v.gap_free_primes = Verdict::Unknown;
    } else {
      v.gap_free_primes = v.gap_free ? Verdict::Pass : Verdict::Fail;
    }
  }
  return v;
}

StructureReport check_pl_structure(GeneratingFunctions& gf, int k) {
  if (k < 0 || k > 30) throw std::invalid_argument("check_pl_structure: k out of range");
  const PLExpr& b = gf.root_rank(k);
  StructureReport r;
  r.k = k;
  r.limit = (1 << (k + 1)) - 1;
  r.min_upow = b.min_upow();
  r.max_upow = b.max_upow();
  r.max_vpow = b.max_vpow();
  r.exponents_ok = r.min_upow >= 0 && r.max_upow <= r.limit && r.max_vpow <= r.limit;

  r.denominators_ok = true;
  for (const auto& [key, coeff] : b.terms()) {
    if (coeff.get_den() == 1) continue;
    // Strip every prime up to the limit; anything left is a larger prime.
    const auto f = factor_smooth(coeff.get_den(), std::max(2, r.limit));
    if (!f.fully_factored()) {
      r.denominators_ok = false;
      r.max_denominator_prime = std::numeric_limits<std::uint64_t>::max();
      continue;
    }
    if (!f.factors.empty()) r.max_denominator_prime = std::max(r.max_denominator_prime, f.factors.back().prime);
  }
  if (r.max_denominator_prime > static_cast<std::uint64_t>(r.limit) && r.max_denominator_prime != 1) {
    r.denominators_ok = false;
  }
  return r;
}

double alpha_equation(double alpha) { return alpha + alpha * std::log(2.0 / alpha) - 1.0; }

double alpha0(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("alpha0: tol must be positive");
  // Increasing on (0, 2): derivative log(2/alpha). Negative near 0, log 2 at 1.
  double lo = 1e-9;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (alpha_equation(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EnvelopeReport lower_envelope_report(GeneratingFunctions& gf, int kmax, double alpha0_value) {
  if (kmax < 0) throw std::invalid_argument("lower_envelope_report: kmax must be >= 0");
  EnvelopeReport report;
  report.alpha0 = alpha0_value;
  report.decay_floor = std::exp(-1.0 / alpha0_value);
  report.gamma_estimate = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kmax; ++k) {
    const Rational tail = 1 - gf.partial_sum(k);
    const Rational upper = make_rational(6 * k + 7, 3) / rational_pow(Rational(3), static_cast<unsigned>(k));
    if (sgn(tail) <= 0 || tail > upper) {
      throw InternalInconsistency("lower_envelope_report: tail outside (0, upper bound] at k=" + std::to_string(k));
    }
    EnvelopeRow row;
    row.k = k;
    row.tail = to_double(tail);
    row.upper_bound = to_double(upper);
    const double envelope = std::exp(-static_cast<double>(k) / alpha0_value);
    row.lower_reference = (2.0 / 3.0) * envelope;
    row.scale = row.tail / envelope;
    if (!report.rows.empty()) row.decay_ratio = row.tail / report.rows.back().tail;
    report.gamma_estimate = std::min(report.gamma_estimate, row.scale);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bstrank::conjecture
