#include "bstrank/plexpr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace bstrank {

PLExpr PLExpr::term(const Rational& coeff, int upow, int vpow) {
  if (vpow < 0) throw std::invalid_argument("PL term with negative vpow");
  PLExpr e;
  if (sgn(coeff) != 0) e.terms_.emplace(PLKey{upow, vpow}, coeff);
  return e;
}

PLExpr PLExpr::x() { return constant(Rational(1)) - u(1); }

Rational PLExpr::coeff(int upow, int vpow) const {
  auto it = terms_.find(PLKey{upow, vpow});
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational PLExpr::value_at_zero() const {
  Rational s(0);
  for (const auto& [key, c] : terms_) {
    if (key.vpow == 0) s += c;
  }
  return s;
}

int PLExpr::min_upow() const {
  int m = 0;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (first || key.upow < m) m = key.upow;
    first = false;
  }
  return m;
}

int PLExpr::max_upow() const { return terms_.empty() ? 0 : terms_.rbegin()->first.upow; }

int PLExpr::max_vpow() const {
  int m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, key.vpow);
  return m;
}

void PLExpr::accumulate(const PLKey& key, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

PLExpr& PLExpr::operator+=(const PLExpr& other) {
  for (const auto& [key, c] : other.terms_) accumulate(key, c);
  return *this;
}

PLExpr& PLExpr::operator-=(const PLExpr& other) {
  for (const auto& [key, c] : other.terms_) accumulate(key, -c);
  return *this;
}

PLExpr& PLExpr::operator*=(const Rational& a) {
  if (sgn(a) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= a;
  return *this;
}

PLExpr operator*(const PLExpr& a, const PLExpr& b) {
  PLExpr out;
  Rational prod;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      const PLKey key{ka.upow + kb.upow, ka.vpow + kb.vpow};
      auto [it, inserted] = out.terms_.try_emplace(key, prod);
      if (!inserted) it->second += prod;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return sgn(kv.second) == 0; });
  return out;
}

PLExpr add(const PLExpr& f, const PLExpr& g) { return f + g; }
PLExpr scale(const PLExpr& f, const Rational& a) { return f * a; }
PLExpr mul(const PLExpr& f, const PLExpr& g) { return f * g; }

PLExpr differentiate(const PLExpr& f) {
  PLExpr out;
  for (const auto& [key, c] : f.terms()) {
    if (key.upow != 0) out += PLExpr::term(c * -key.upow, key.upow - 1, key.vpow);
    if (key.vpow != 0) out += PLExpr::term(c * key.vpow, key.upow - 1, key.vpow - 1);
  }
  return out;
}

PLExpr antiderivative(const PLExpr& f, const Rational& value_at_0) {
  PLExpr out;
  for (const auto& [key, c] : f.terms()) {
    const int b = key.upow;
    if (b == -1) {
      out += PLExpr::term(c / (key.vpow + 1), 0, key.vpow + 1);
      continue;
    }
    // int u^b v^c = -u^(b+1) v^c/(b+1) + c/(b+1) int u^b v^(c-1)
    const Rational inv = make_rational(1, b + 1);
    Rational factor = c;
    for (int j = key.vpow; j >= 0; --j) {
      out += PLExpr::term(-factor * inv, b + 1, j);
      factor *= inv * j;
    }
  }
  out += PLExpr::constant(value_at_0 - out.value_at_zero());
  return out;
}

Rational integral01(const PLExpr& f) {
  Rational total(0);
  for (const auto& [key, c] : f.terms()) {
    if (key.upow < 0) {
      throw DivergentIntegral("integral over [0,1] diverges: term u^" + std::to_string(key.upow) +
                              " v^" + std::to_string(key.vpow));
    }
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(key.upow + 1),
                  static_cast<unsigned long>(key.vpow + 1));
    total += c * make_rational(factorial(static_cast<unsigned>(key.vpow)), den);
  }
  return total;
}

namespace {

// [x^n] (1 - x)^b for n = 0..order.
std::vector<Rational> upow_series(int b, unsigned order) {
  std::vector<Rational> s(order + 1, Rational(0));
  if (b >= 0) {
    for (unsigned n = 0; n <= order && n <= static_cast<unsigned>(b); ++n) {
      BigInt c = binomial(static_cast<unsigned>(b), n);
      s[n] = (n % 2 == 0) ? Rational(c) : Rational(-c);
    }
  } else {
    const unsigned m = static_cast<unsigned>(-b);
    for (unsigned n = 0; n <= order; ++n) s[n] = Rational(binomial(n + m - 1, n));
  }
  return s;
}

std::vector<Rational> convolve(const std::vector<Rational>& a, const std::vector<Rational>& b,
                               unsigned order) {
  std::vector<Rational> out(order + 1, Rational(0));
  for (unsigned i = 0; i <= order; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (unsigned j = 0; i + j <= order; ++j) {
      if (sgn(b[j]) != 0) out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> series(const PLExpr& f, unsigned order) {
  std::vector<Rational> out(order + 1, Rational(0));
  if (f.is_zero()) return out;

  // Group by vpow: sum_b a_{b,c} (1-x)^b is expanded once per c, then
  // multiplied by the series of v^c.
  const int max_c = f.max_vpow();
  std::vector<std::vector<Rational>> by_vpow(max_c + 1, std::vector<Rational>(order + 1, Rational(0)));
  std::vector<bool> present(max_c + 1, false);
  for (const auto& [key, c] : f.terms()) {
    const auto us = upow_series(key.upow, order);
    auto& acc = by_vpow[key.vpow];
    for (unsigned n = 0; n <= order; ++n) {
      if (sgn(us[n]) != 0) acc[n] += c * us[n];
    }
    present[key.vpow] = true;
  }

  std::vector<Rational> log_series(order + 1, Rational(0));
  for (unsigned n = 1; n <= order; ++n) log_series[n] = make_rational(1, n);

  std::vector<Rational> vpow(order + 1, Rational(0));
  vpow[0] = 1;
  for (int c = 0; c <= max_c; ++c) {
    if (c > 0) vpow = convolve(vpow, log_series, order);
    if (!present[c]) continue;
    const auto term = convolve(by_vpow[c], vpow, order);
    for (unsigned n = 0; n <= order; ++n) out[n] += term[n];
  }
  return out;
}

double eval_real(const PLExpr& f, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("eval_real: x must lie in [0, 1)");
  const long double u = 1.0L - static_cast<long double>(x);
  const long double v = -std::log1p(-static_cast<long double>(x));
  long double sum = 0.0L;
  for (const auto& [key, c] : f.terms()) {
    long double t = static_cast<long double>(c.get_d()) * std::pow(u, static_cast<long double>(key.upow));
    if (key.vpow > 0) t *= std::pow(v, static_cast<long double>(key.vpow));
    sum += t;
  }
  return static_cast<double>(sum);
}

std::string to_display(const PLExpr& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : f.terms()) {
    const bool neg = sgn(c) < 0;
    const Rational mag = abs(c);
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    const bool bare = key.upow == 0 && key.vpow == 0;
    if (!unit || bare) os << to_string(mag);
    bool need_star = !unit;
    if (key.upow != 0) {
      os << (need_star ? "*" : "") << "u";
      if (key.upow != 1) os << "^" << key.upow;
      need_star = true;
    }
    if (key.vpow != 0) {
      os << (need_star ? "*" : "") << "v";
      if (key.vpow != 1) os << "^" << key.vpow;
    }
  }
  return os.str();
}

std::string serialize(const PLExpr& f) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [key, c] : f.terms()) {
    nlohmann::ordered_json rec;
    rec["num"] = to_string(c.get_num());
    rec["den"] = to_string(c.get_den());
    rec["upow"] = key.upow;
    rec["vpow"] = key.vpow;
    arr.push_back(std::move(rec));
  }
  return arr.dump();
}

PLExpr deserialize(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("PLExpr: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("PLExpr: expected a JSON array");
  PLExpr out;
  bool have_prev = false;
  PLKey prev;
  for (const auto& rec : doc) {
    if (!rec.is_object() || !rec.contains("num") || !rec.contains("den") || !rec.contains("upow") ||
        !rec.contains("vpow") || !rec["num"].is_string() || !rec["den"].is_string() ||
        !rec["upow"].is_number_integer() || !rec["vpow"].is_number_integer()) {
      throw std::invalid_argument("PLExpr: malformed term record");
    }
    const PLKey key{rec["upow"].get<int>(), rec["vpow"].get<int>()};
    if (key.vpow < 0) throw std::invalid_argument("PLExpr: negative vpow");
    if (have_prev && !(prev < key)) throw std::invalid_argument("PLExpr: terms not strictly sorted");
    const Rational c = parse_rational(rec["num"].get<std::string>() + "/" + rec["den"].get<std::string>());
    if (sgn(c) == 0) throw std::invalid_argument("PLExpr: zero coefficient");
    out += PLExpr::term(c, key.upow, key.vpow);
    prev = key;
    have_prev = true;
  }
  return out;
}

}  // namespace bstrank
