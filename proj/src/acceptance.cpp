#include "bstrank/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "bstrank/conjecture.hpp"
#include "bstrank/genfun.hpp"
#include "bstrank/montecarlo.hpp"
#include "bstrank/oracle.hpp"

namespace bstrank::acceptance {

namespace {

using report::format_double;
using PrimeList = std::vector<conjecture::PrimePower>;

constexpr const char* kPrintedC4 =
    "122058464141653662196290113232646304412999902283512425580156787323/"
    "3353377025022449199852900725670960067418280803797231788288000000000";

const PrimeList kDenomC3 = {{2, 8}, {3, 7}, {5, 5}, {7, 3}, {11, 3}, {13, 2}, {17, 1}};
const PrimeList kDenomC5 = {{2, 48}, {3, 42}, {5, 28}, {7, 18}, {11, 16}, {13, 16}, {17, 17}, {19, 16}, {23, 15},
                            {29, 12}, {31, 12}, {37, 10}, {41, 9}, {43, 8}, {47, 7}, {53, 5}, {59, 3}, {61, 2}};

Check exact_check(const std::string& label, const Rational& got, const Rational& want) {
  return {label, got == want, "got " + to_string(got) + ", expected " + to_string(want)};
}

Check near_check(const std::string& label, double got, double want, double tol) {
  return {label, std::fabs(got - want) <= tol,
          "got " + format_double(got) + ", expected " + format_double(want) + " +- " + format_double(tol)};
}

Check range_check(const std::string& label, double got, double lo, double hi) {
  return {label, got > lo && got < hi,
          "got " + format_double(got) + ", expected in (" + format_double(lo) + ", " + format_double(hi) + ")"};
}

/// |mean - target| <= 4 se
Check se_check(const std::string& label, double mean, double se, double target) {
  const double z = se > 0.0 ? (mean - target) / se : (mean == target ? 0.0 : INFINITY);
  return {label, std::fabs(mean - target) <= 4.0 * se,
          "mean " + format_double(mean) + ", target " + format_double(target) + ", se " + format_double(se) +
              ", z " + format_double(z)};
}

Check factor_check(const std::string& label, const BigInt& n, const PrimeList& want) {
  const auto f = conjecture::factor_smooth(n, 100);
  const bool ok = f.fully_factored() && f.factors == want;
  conjecture::FactorReport expected;
  expected.factors = want;
  expected.residual = 1;
  return {label, ok, "got " + report::factor_string(f) + ", expected " + report::factor_string(expected)};
}

/// Tally of coefficient mismatches between a series and an oracle row.
Check series_check(const std::string& label, const std::vector<Rational>& got,
                   const std::vector<Rational>& want) {
  int mismatches = 0;
  int first = -1;
  for (std::size_t n = 0; n < want.size(); ++n) {
    if (got.at(n) != want[n]) {
      ++mismatches;
      if (first < 0) first = static_cast<int>(n);
    }
  }
  std::string detail = std::to_string(want.size()) + " coefficients, " + std::to_string(mismatches) + " mismatches";
  if (first >= 0) detail += " (first at n=" + std::to_string(first) + ")";
  return {label, mismatches == 0, detail};
}

std::string k_label(const std::string& what, int k) { return what + " k=" + std::to_string(k); }

Criterion exact_constants(GeneratingFunctions& gf) {
  Criterion c{1, "exact rank constants", {}, {}};
  c.checks.push_back(exact_check("c_0", gf.rank_constant(0), make_rational(1, 3)));
  c.checks.push_back(exact_check("c_1", gf.rank_constant(1), make_rational(3, 10)));
  c.checks.push_back(exact_check("c_2", gf.rank_constant(2), make_rational(1721, 8100)));
  const Rational c3 = gf.rank_constant(3);
  const Rational c4 = gf.rank_constant(4);
  const Rational c5 = gf.rank_constant(5);
  c.checks.push_back({"c_4 printed fraction", to_string(c4) == kPrintedC4, "got " + to_string(c4)});
  c.checks.push_back(near_check("c_3 approx", to_double(c3), 0.105, 0.001));
  c.checks.push_back(factor_check("denom(c_3)", c3.get_den(), kDenomC3));
  c.checks.push_back(near_check("c_4 approx", to_double(c4), 0.0364, 0.0005));
  c.checks.push_back(near_check("c_5 approx", to_double(c5), 0.0074, 0.0005));
  c.checks.push_back(factor_check("denom(c_5)", c5.get_den(), kDenomC5));
  c.checks.push_back({"denom(c_5) digits", decimal_digits(c5.get_den()) == 274,
                      std::to_string(decimal_digits(c5.get_den())) + " digits"});
  c.notes.push_back("c_3 = " + to_string(c3));
  for (int k = 0; k <= 5; ++k) c.notes.push_back(k_label("c", k) + " ~ " + format_double(to_double(gf.rank_constant(k))));
  return c;
}

Criterion pair_constants(GeneratingFunctions& gf) {
  Criterion c{2, "exact leaf-pair and closest-leaf constants", {}, {}};
  const Rational f[] = {make_rational(1, 3), make_rational(17, 30), make_rational(152389, 170100)};
  const Rational g[] = {make_rational(1, 3), make_rational(1, 3), make_rational(49, 180)};
  const Rational fr[] = {Rational(1), make_rational(17, 9), make_rational(152389, 36141)};
  const Rational gr[] = {Rational(1), make_rational(10, 9), make_rational(2205, 1721)};
  for (int k = 0; k <= 2; ++k) {
    const auto [rf, rg] = gf.per_vertex_ratios(k);
    c.checks.push_back(exact_check(k_label("f", k), gf.leaf_pair_constant(k), f[k]));
    c.checks.push_back(exact_check(k_label("g", k), gf.closest_leaf_constant(k), g[k]));
    c.checks.push_back(exact_check(k_label("f/c", k), rf, fr[k]));
    c.checks.push_back(exact_check(k_label("g/c", k), rg, gr[k]));
  }
  return c;
}

Criterion partial_sums(GeneratingFunctions& gf) {
  Criterion c{3, "partial sums", {}, {}};
  c.checks.push_back(range_check("S_3", to_double(gf.partial_sum(3)), 0.954, 0.956));
  c.checks.push_back(range_check("S_4", to_double(gf.partial_sum(4)), 0.9913, 0.9915));
  c.checks.push_back(range_check("S_5", to_double(gf.partial_sum(5)), 0.9987, 0.9988));
  return c;
}

Criterion tail_bounds(GeneratingFunctions& gf) {
  Criterion c{4, "greedy tail moment bounds", {}, {}};
  const Rational third = make_rational(1, 3);
  const Rational i01 = gf.tail_moment(0, 1);
  int upper_bad = 0;
  int lower_bad = 0;
  for (int k = 0; k <= 10; ++k) {
    const Rational ik = gf.tail_moment(k, 1);
    const Rational p = rational_pow(third, static_cast<unsigned>(k));
    if (ik > make_rational(6 * k + 7, 6) * p) ++upper_bad;
    if (ik < i01 * p) ++lower_bad;
  }
  c.checks.push_back({"I_k1 <= (6k+7)/6 3^-k, k<=10", upper_bad == 0, std::to_string(upper_bad) + " violations"});
  c.checks.push_back({"I_k1 >= I_01 3^-k, k<=10", lower_bad == 0, std::to_string(lower_bad) + " violations"});

  for (int k = 0; k <= 5; ++k) {
    const Rational tail = 1 - gf.partial_sum(k);
    const Rational upper = 2 * gf.tail_moment(k, 1);
    c.checks.push_back({k_label("1-S_k <= 2 I_k1", k), tail <= upper,
                        format_double(to_double(tail)) + " <= " + format_double(to_double(upper))});
    if (k > 0) {
      const Rational prev = 1 - gf.partial_sum(k - 1);
      c.notes.push_back(k_label("1-S_{k-1} <= 2 I_k1", k) + ": " + (prev <= upper ? "holds" : "fails") + " (" +
                        format_double(to_double(prev)) + ")");
    }
  }

  int route_bad = 0;
  for (int k = 0; k <= 6; ++k) {
    for (int t = 1; t <= 4; ++t) {
      if (gf.tail_moment(k, t) != gf.tail_moment_integral(k, t)) ++route_bad;
    }
  }
  c.checks.push_back({"recurrence = integral, k<=6, t<=4", route_bad == 0, std::to_string(route_bad) + " mismatches"});
  return c;
}

Criterion coefficient_equivalence(GeneratingFunctions& gf) {
  Criterion c{5, "generating function coefficients match the exact oracle", {}, {}};
  const oracle::RankDP ranks(50, 5);
  for (int k = 0; k <= 5; ++k) {
    std::vector<Rational> cdf;
    std::vector<Rational> prob;
    for (int n = 0; n <= 50; ++n) {
      cdf.push_back(1 - ranks.root_rank_tail(n, k));
      prob.push_back(n == 0 ? Rational(0) : ranks.root_rank_prob(n, k));
    }
    c.checks.push_back(series_check(k_label("B_<=k vs 1-p_n,>k", k), series(gf.root_rank_cdf(k), 50), cdf));
    c.checks.push_back(series_check(k_label("B_k vs p_n,k", k), series(gf.root_rank(k), 50), prob));
  }
  const oracle::PairDP pairs(ranks, 25, 3);
  for (int k = -1; k <= 3; ++k) {
    std::vector<Rational> want;
    for (int n = 0; n <= 25; ++n) want.push_back(n == 0 ? Rational(0) : pairs.leaf_pairs_tail(n, k));
    c.checks.push_back(series_check(k_label("leaf-pair tail vs f_n,>k", k), series(gf.leaf_pair_tail(k), 25), want));
  }
  for (int k = 0; k <= 3; ++k) {
    std::vector<Rational> want;
    for (int n = 0; n <= 25; ++n) want.push_back(n == 0 ? Rational(0) : pairs.expected_closest_pairs(n, k));
    c.checks.push_back(series_check(k_label("closest-leaf vs g_n,k", k), series(gf.closest_leaf(k), 25), want));
  }
  const auto greedy = oracle::greedy_tail_table(30, 3);
  for (int k = -1; k <= 3; ++k) {
    c.checks.push_back(series_check(k_label("greedy tail vs pi_n,>k", k), series(gf.greedy_tail(k), 30), greedy[k + 1]));
  }
  return c;
}

Criterion residuals(GeneratingFunctions& gf) {
  Criterion c{6, "symbolic ODE residuals vanish", {}, {}};
  struct Range {
    GFKind kind;
    int lo;
    int hi;
  };
  const Range ranges[] = {{GFKind::RootRank, 0, 5},
                          {GFKind::RootRankCdf, -1, 5},
                          {GFKind::LeafPairTail, -1, 5},
                          {GFKind::ClosestLeaf, 0, 5},
                          {GFKind::GreedyTail, -1, 6}};
  for (const auto& r : ranges) {
    int nonzero = 0;
    for (int k = r.lo; k <= r.hi; ++k) {
      if (!gf.ode_residual(r.kind, k).is_zero()) ++nonzero;
    }
    c.checks.push_back({kind_name(r.kind) + " k=" + std::to_string(r.lo) + ".." + std::to_string(r.hi), nonzero == 0,
                        std::to_string(nonzero) + " nonzero residuals"});
  }
  return c;
}

Criterion structure(GeneratingFunctions& gf) {
  Criterion c{7, "PL structure and denominator conjectures", {}, {}};
  for (int k = 0; k <= 5; ++k) {
    const auto s = conjecture::check_pl_structure(gf, k);
    c.checks.push_back({k_label("structure", k), s.pass(),
                        "upow " + std::to_string(s.min_upow) + ".." + std::to_string(s.max_upow) + ", vpow <= " +
                            std::to_string(s.max_vpow) + ", max denominator prime " +
                            std::to_string(s.max_denominator_prime) + ", limit " + std::to_string(s.limit)});
  }
  for (int k = 0; k <= 5; ++k) {
    const Rational ck = gf.rank_constant(k);
    const auto v = conjecture::check_conjectures(k, ck);
    c.checks.push_back({k_label("conjecture 1", k), v.smooth_bound == conjecture::Verdict::Pass,
                        "largest prime " + std::to_string(v.largest_prime) + ", bound " + std::to_string(v.threshold)});
    if (k >= 2) {
      c.checks.push_back({k_label("conjecture 2", k), v.gap_free_primes == conjecture::Verdict::Pass,
                          "denominator " + report::factor_string(v.denominator)});
    }
    const auto num = conjecture::factor_smooth(abs(ck.get_num()), 1000000);
    auto small = num;
    small.residual = 1;
    c.notes.push_back(k_label("numerator", k) + ": factors <= 10^6 " + report::factor_string(small) +
                      ", residual digits " + std::to_string(num.fully_factored() ? 0 : decimal_digits(num.residual)));
  }
  return c;
}

Criterion simulation(const Options& opt) {
  Criterion c{8, "Monte Carlo agrees with the exact oracle", {}, {}};

  mc::EstimateConfig big;
  big.n = 1000;
  big.trials = 2000;
  big.seed = mc::derive_seed(opt.seed, 8001);
  big.kmax = 3;
  big.threads = opt.threads;
  const auto r1 = mc::estimate(big);
  const oracle::RankDP ranks1000(1000, 3);
  for (int k = 0; k <= 3; ++k) {
    const auto& s = r1.get(mc::indexed("vertex_fraction", k));
    const double target = to_double(ranks1000.expected_rank_count(1000, k) / 1000);
    c.checks.push_back(se_check(k_label("V_n,k/n n=1000", k), s.mean, s.std_error, target));
  }
  {
    const auto& s = r1.get("leaf_fraction");
    c.checks.push_back(se_check("L_n/n n=1000", s.mean, s.std_error, to_double(make_rational(1001, 3000))));
  }

  mc::EstimateConfig root;
  root.n = 200;
  root.trials = 5000;
  root.seed = mc::derive_seed(opt.seed, 8002);
  root.kmax = 3;
  root.threads = opt.threads;
  const auto r2 = mc::estimate(root);
  const oracle::RankDP ranks200(200, 3);
  for (int k = 0; k <= 3; ++k) {
    const auto& s = r2.get(mc::indexed("root_rank", k));
    c.checks.push_back(
        se_check(k_label("root rank n=200", k), s.mean, s.std_error, to_double(ranks200.root_rank_prob(200, k))));
  }

  mc::EstimateConfig greedy;
  greedy.n = 30;
  greedy.trials = 20000;
  greedy.seed = mc::derive_seed(opt.seed, 8003);
  greedy.kmax = 3;
  greedy.threads = opt.threads;
  const auto r3 = mc::estimate(greedy);
  GeneratingFunctions gf;
  for (int k = 0; k <= 3; ++k) {
    const auto& s = r3.get(mc::indexed("greedy_tail", k));
    const double target = to_double(series(gf.greedy_tail(k), 30)[30]);
    c.checks.push_back(se_check(k_label("greedy tail n=30", k), s.mean, s.std_error, target));
  }
  return c;
}

Criterion asymptotics(GeneratingFunctions& gf, const Options& opt) {
  Criterion c{9, "asymptotic behaviour at desk scale", {}, {}};

  {
    const oracle::RankDP ranks(400, 399);
    const Rational rho = make_rational(7, 5);
    std::vector<double> values;
    std::string detail;
    for (int n : {100, 200, 400}) {
      values.push_back(to_double(oracle::moment_gf_ratio(ranks, n, rho)));
      detail += "n=" + std::to_string(n) + ": " + format_double(values.back()) + "; ";
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double spread = (*hi - *lo) / *lo;
    c.checks.push_back({"moment ratio rho=7/5 spread < 5%", spread < 0.05, detail + "spread " + format_double(spread)});
  }

  {
    mc::EstimateConfig cfg;
    cfg.n = 10000;
    cfg.trials = 500;
    cfg.seed = mc::derive_seed(opt.seed, 9001);
    cfg.kmax = 2;
    cfg.threads = opt.threads;
    const auto r = mc::estimate(cfg);
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) {
        const auto& j = r.get(mc::indexed("pair_joint", a, b));
        const auto& x = r.get(mc::indexed("pair_first", a));
        const auto& y = r.get(mc::indexed("pair_second", b));
        const double product = x.mean * y.mean;
        const double se = std::sqrt(j.std_error * j.std_error + std::pow(y.mean * x.std_error, 2) +
                                    std::pow(x.mean * y.std_error, 2));
        c.checks.push_back(se_check("pair factorization (" + std::to_string(a) + "," + std::to_string(b) + ") n=10^4",
                                    j.mean, se, product));
      }
    }
  }

  {
    mc::EstimateConfig cfg;
    cfg.n = 100000;
    cfg.trials = 20;
    cfg.seed = mc::derive_seed(opt.seed, 9002);
    cfg.kmax = 2;
    cfg.threads = opt.threads;
    const auto r = mc::estimate(cfg);
    for (int k = 0; k <= 2; ++k) {
      const auto [fr, gr] = gf.per_vertex_ratios(k);
      const auto& lf = r.get(mc::indexed("leaf_ratio", k));
      const auto& cl = r.get(mc::indexed("closest_ratio", k));
      const double ft = to_double(fr);
      const double gt = to_double(gr);
      c.checks.push_back(near_check(k_label("leaf ratio n=10^5", k), lf.mean, ft, 0.05 * ft));
      c.checks.push_back(near_check(k_label("closest ratio n=10^5", k), cl.mean, gt, 0.05 * gt));
    }
  }

  c.checks.push_back(range_check("alpha_0", conjecture::alpha0(), 0.3725, 0.3735));

  const auto env = conjecture::lower_envelope_report(gf, 5, conjecture::alpha0());
  c.notes.push_back("gamma estimate " + format_double(env.gamma_estimate));
  c.notes.push_back("decay floor exp(-1/alpha_0) " + format_double(env.decay_floor));
  for (const auto& row : env.rows) {
    if (row.decay_ratio) c.notes.push_back(k_label("tail ratio", row.k) + " " + format_double(*row.decay_ratio));
  }
  for (int k = 1; k <= 5; ++k) {
    const double ratio = to_double(gf.rank_constant(k) / gf.rank_constant(k - 1));
    c.notes.push_back(k_label("c_k/c_{k-1}", k) + " " + format_double(ratio));
  }
  return c;
}

std::string status(bool pass) { return pass ? "PASS" : "FAIL"; }

}  // namespace

bool Criterion::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool Report::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
}

std::vector<Criterion> run_criteria(const Options& options) {
  GeneratingFunctions::Options gopt;
  gopt.cache_dir = options.cache_dir;
  GeneratingFunctions gf(gopt);
  std::vector<Criterion> out;
  out.push_back(exact_constants(gf));
  out.push_back(pair_constants(gf));
  out.push_back(partial_sums(gf));
  out.push_back(tail_bounds(gf));
  out.push_back(coefficient_equivalence(gf));
  out.push_back(residuals(gf));
  out.push_back(structure(gf));
  out.push_back(simulation(options));
  out.push_back(asymptotics(gf, options));
  return out;
}

Report run(const Options& options) {
  Report report;
  report.criteria = run_criteria(options);
  if (options.determinism) {
    // A second engine and a different worker count must give the same bytes.
    Options again = options;
    again.threads = options.threads == 1 ? 3 : 1;
    const std::string first = report::to_text(to_json(report.criteria));
    const std::string second = report::to_text(to_json(run_criteria(again)));
    Criterion c{10, "deterministic verification report", {}, {}};
    c.checks.push_back({"identical report bytes", first == second,
                        std::to_string(first.size()) + " and " + std::to_string(second.size()) + " bytes"});
    report.criteria.push_back(std::move(c));
  }
  return report;
}

std::string summary(const Report& report) {
  std::string out;
  for (const auto& c : report.criteria) {
    out += status(c.pass()) + "  " + std::to_string(c.id) + "  " + c.title + "\n";
  }
  return out;
}

std::string failures(const Report& report) {
  std::string out;
  for (const auto& c : report.criteria) {
    for (const auto& ch : c.checks) {
      if (!ch.pass) out += "  criterion " + std::to_string(c.id) + ": " + ch.label + ": " + ch.detail + "\n";
    }
  }
  return out;
}

report::Json to_json(const std::vector<Criterion>& criteria) {
  report::Json list = report::Json::array();
  for (const auto& c : criteria) {
    report::Json checks = report::Json::array();
    for (const auto& ch : c.checks) {
      checks.push_back(report::Json{{"label", ch.label}, {"status", status(ch.pass)}, {"detail", ch.detail}});
    }
    report::Json j;
    j["id"] = c.id;
    j["title"] = c.title;
    j["status"] = status(c.pass());
    j["checks"] = std::move(checks);
    j["notes"] = c.notes;
    list.push_back(std::move(j));
  }
  return list;
}

report::Json to_json(const Report& report) {
  report::Json doc;
  doc["table"] = "verify";
  doc["status"] = status(report.pass());
  doc["criteria"] = to_json(report.criteria);
  return doc;
}

report::Table to_table(const Report& report) {
  report::Table t;
  t.columns = {"criterion", "check", "status", "detail"};
  for (const auto& c : report.criteria) {
    for (const auto& ch : c.checks) t.rows.push_back({std::to_string(c.id), ch.label, status(ch.pass), ch.detail});
  }
  return t;
}

}  // namespace bstrank::acceptance
