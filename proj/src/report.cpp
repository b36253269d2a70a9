#include "bstrank/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "bstrank/oracle.hpp"

namespace bstrank::report {

namespace {

std::string text(const Rational& q) { return to_string(q); }

Json optional_exact(const std::optional<Rational>& q) { return q ? exact(*q) : Json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format: " + std::string(name));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double rounded(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_double(x).c_str(), nullptr);
}

Json exact(const Rational& q) {
  Json j;
  j["num"] = q.get_num().get_str();
  j["den"] = q.get_den().get_str();
  j["approx"] = rounded(to_double(q));
  return j;
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string to_text(const Json& doc) { return doc.dump(2) + "\n"; }

Json to_json(const ConstantsTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["k"] = r.k;
    row["c"] = exact(r.c);
    row["f"] = exact(r.f);
    row["g"] = exact(r.g);
    row["partial_sum"] = exact(r.partial_sum);
    row["f_ratio"] = exact(r.f_ratio);
    row["g_ratio"] = exact(r.g_ratio);
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["table"] = "constants";
  doc["rows"] = std::move(rows);
  return doc;
}

Table to_table(const ConstantsTable& table) {
  Table t;
  t.columns = {"k"};
  for (const char* name : {"c", "f", "g", "partial_sum", "f_ratio", "g_ratio"}) {
    t.columns.push_back(std::string(name));
    t.columns.push_back(std::string(name) + "_approx");
  }
  for (const auto& r : table.rows) {
    std::vector<std::string> row{std::to_string(r.k)};
    for (const Rational* q : {&r.c, &r.f, &r.g, &r.partial_sum, &r.f_ratio, &r.g_ratio}) {
      row.push_back(text(*q));
      row.push_back(format_double(to_double(*q)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json to_json(const TailTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["k"] = r.k;
    Json moments = Json::array();
    for (const auto& m : r.moments) moments.push_back(exact(m));
    row["moments"] = std::move(moments);
    row["upper"] = exact(r.upper);
    row["theorem_bound"] = exact(r.theorem_bound);
    row["tail"] = optional_exact(r.tail);
    row["tail_prev"] = optional_exact(r.tail_prev);
    row["lower_reference"] = rounded(r.lower_reference);
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["table"] = "bounds";
  doc["alpha0"] = rounded(table.alpha0);
  doc["rows"] = std::move(rows);
  return doc;
}

Table to_table(const TailTable& table) {
  Table t;
  t.columns = {"k", "I_k1", "I_k2", "I_k3", "I_k4", "upper", "theorem_bound", "tail", "tail_approx", "tail_prev",
               "lower_reference"};
  for (const auto& r : table.rows) {
    std::vector<std::string> row{std::to_string(r.k)};
    for (std::size_t t = 0; t < 4; ++t) row.push_back(t < r.moments.size() ? text(r.moments[t]) : "");
    row.push_back(text(r.upper));
    row.push_back(text(r.theorem_bound));
    row.push_back(r.tail ? text(*r.tail) : "");
    row.push_back(r.tail ? format_double(to_double(*r.tail)) : "");
    row.push_back(r.tail_prev ? text(*r.tail_prev) : "");
    row.push_back(format_double(r.lower_reference));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json to_json(const mc::EstimateReport& report) {
  Json stats = Json::array();
  for (const auto& s : report.stats) {
    Json row;
    row["name"] = s.name;
    row["mean"] = rounded(s.mean);
    row["stderr"] = rounded(s.std_error);
    row["trials"] = s.count;
    row["seed"] = std::to_string(report.config.seed);
    stats.push_back(std::move(row));
  }
  Json doc;
  doc["table"] = "simulate";
  doc["n"] = report.config.n;
  doc["trials"] = report.config.trials;
  doc["seed"] = std::to_string(report.config.seed);
  doc["kmax"] = report.config.kmax;
  doc["stats"] = std::move(stats);
  return doc;
}

Table to_table(const mc::EstimateReport& report) {
  Table t;
  t.columns = {"name", "mean", "stderr", "trials", "seed"};
  for (const auto& s : report.stats) {
    t.rows.push_back({s.name, format_double(s.mean), format_double(s.std_error), std::to_string(s.count),
                      std::to_string(report.config.seed)});
  }
  return t;
}

OracleTables build_oracle_tables(int n, int kmax, const Rational& rho) {
  if (n < 1) throw std::invalid_argument("oracle: n must be >= 1");
  if (kmax < 0) throw std::invalid_argument("oracle: kmax must be >= 0");
  // The moment ratio needs every rank that can occur at n, up to n - 1.
  const int moment_kmax = std::max(kmax, n - 1);
  const oracle::RankDP ranks(n, moment_kmax);
  const oracle::PairDP pairs(ranks, n, kmax);
  const auto greedy = oracle::greedy_tail_table(n, kmax);

  OracleTables out;
  out.n = n;
  out.kmax = kmax;
  out.rho = rho;
  out.expected_leaves = pairs.leaf_pairs_tail(n, -1);
  out.moment_ratio = oracle::moment_gf_ratio(ranks, n, rho);
  for (int k = 0; k <= kmax; ++k) {
    OracleRow row;
    row.k = k;
    row.root_rank_prob = ranks.root_rank_prob(n, k);
    row.root_rank_tail = ranks.root_rank_tail(n, k);
    row.expected_count = ranks.expected_rank_count(n, k);
    row.leaf_pairs = pairs.expected_leaf_pairs(n, k);
    row.closest_pairs = pairs.expected_closest_pairs(n, k);
    row.greedy_tail = greedy[k + 1][n];
    out.rows.push_back(std::move(row));
  }
  return out;
}

Json to_json(const OracleTables& tables) {
  Json rows = Json::array();
  for (const auto& r : tables.rows) {
    Json row;
    row["k"] = r.k;
    row["root_rank_prob"] = exact(r.root_rank_prob);
    row["root_rank_tail"] = exact(r.root_rank_tail);
    row["expected_count"] = exact(r.expected_count);
    row["root_leaf_pairs"] = exact(r.leaf_pairs);
    row["root_closest_pairs"] = exact(r.closest_pairs);
    row["greedy_tail"] = exact(r.greedy_tail);
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["table"] = "oracle";
  doc["n"] = tables.n;
  doc["kmax"] = tables.kmax;
  doc["rho"] = text(tables.rho);
  doc["expected_leaves"] = exact(tables.expected_leaves);
  doc["moment_ratio"] = exact(tables.moment_ratio);
  doc["rows"] = std::move(rows);
  return doc;
}

Table to_table(const OracleTables& tables) {
  Table t;
  t.columns = {"n", "k", "root_rank_prob", "root_rank_tail", "expected_count", "root_leaf_pairs", "root_closest_pairs",
               "greedy_tail"};
  for (const auto& r : tables.rows) {
    t.rows.push_back({std::to_string(tables.n), std::to_string(r.k), text(r.root_rank_prob), text(r.root_rank_tail),
                      text(r.expected_count), text(r.leaf_pairs), text(r.closest_pairs), text(r.greedy_tail)});
  }
  return t;
}

std::string factor_string(const conjecture::FactorReport& f) {
  std::string out;
  for (const auto& pp : f.factors) {
    if (!out.empty()) out += '*';
    out += std::to_string(pp.prime);
    if (pp.exponent > 1) out += '^' + std::to_string(pp.exponent);
  }
  if (!f.fully_factored()) {
    if (!out.empty()) out += '*';
    out += '(' + f.residual.get_str() + ')';
  }
  return out.empty() ? "1" : out;
}

Json to_json(const conjecture::FactorReport& f) {
  Json factors = Json::array();
  for (const auto& pp : f.factors) factors.push_back(Json{{"prime", pp.prime}, {"exponent", pp.exponent}});
  Json j;
  j["bound"] = f.bound;
  j["factors"] = std::move(factors);
  j["residual_digits"] = decimal_digits(f.residual);
  j["fully_factored"] = f.fully_factored();
  return j;
}

FactorTable build_factor_table(GeneratingFunctions& gf, int kmax, std::uint64_t numerator_bound) {
  if (kmax < 0) throw std::invalid_argument("factor: kmax must be >= 0");
  FactorTable table;
  table.numerator_bound = numerator_bound;
  for (int k = 0; k <= kmax; ++k) {
    FactorRow row;
    row.k = k;
    row.c = gf.rank_constant(k);
    row.verdict = conjecture::check_conjectures(k, row.c);
    row.numerator = conjecture::factor_smooth(abs(row.c.get_num()), numerator_bound);
    row.structure = conjecture::check_pl_structure(gf, k);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json to_json(const FactorTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json row;
    row["k"] = r.k;
    row["denominator_digits"] = decimal_digits(r.c.get_den());
    row["denominator"] = factor_string(r.verdict.denominator);
    row["largest_prime"] = r.verdict.largest_prime;
    row["threshold"] = r.verdict.threshold;
    row["gap_free"] = r.verdict.gap_free;
    row["conjecture_1"] = conjecture::verdict_name(r.verdict.smooth_bound);
    row["conjecture_2"] = conjecture::verdict_name(r.verdict.gap_free_primes);
    row["numerator_digits"] = decimal_digits(r.c.get_num());
    row["numerator"] = to_json(r.numerator);
    Json s;
    s["limit"] = r.structure.limit;
    s["min_upow"] = r.structure.min_upow;
    s["max_upow"] = r.structure.max_upow;
    s["max_vpow"] = r.structure.max_vpow;
    s["max_denominator_prime"] = r.structure.max_denominator_prime;
    s["verdict"] = r.structure.pass() ? "PASS" : "FAIL";
    row["structure"] = std::move(s);
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["table"] = "factor";
  doc["numerator_bound"] = table.numerator_bound;
  doc["rows"] = std::move(rows);
  return doc;
}

Table to_table(const FactorTable& table) {
  Table t;
  t.columns = {"k",           "denominator_digits", "denominator",        "largest_prime",
               "threshold",   "conjecture_1",       "conjecture_2",       "numerator_small_factors",
               "numerator_residual_digits", "structure"};
  for (const auto& r : table.rows) {
    auto small = r.numerator;
    small.residual = 1;
    t.rows.push_back({std::to_string(r.k), std::to_string(decimal_digits(r.c.get_den())),
                      factor_string(r.verdict.denominator), std::to_string(r.verdict.largest_prime),
                      std::to_string(r.verdict.threshold), conjecture::verdict_name(r.verdict.smooth_bound),
                      conjecture::verdict_name(r.verdict.gap_free_primes), factor_string(small),
                      r.numerator.fully_factored() ? "0" : std::to_string(decimal_digits(r.numerator.residual)),
                      r.structure.pass() ? "PASS" : "FAIL"});
  }
  return t;
}

namespace {

struct Member {
  GFKind kind;
  int k;
};

std::vector<Member> members(int kmax) {
  std::vector<Member> out;
  for (int k = 0; k <= kmax; ++k) out.push_back({GFKind::RootRank, k});
  for (int k = -1; k <= kmax; ++k) out.push_back({GFKind::RootRankCdf, k});
  for (int k = -1; k <= kmax; ++k) out.push_back({GFKind::LeafPairTail, k});
  for (int k = 0; k <= kmax; ++k) out.push_back({GFKind::ClosestLeaf, k});
  for (int k = -1; k <= kmax; ++k) out.push_back({GFKind::GreedyTail, k});
  return out;
}

}  // namespace

Json dump_generating_functions(GeneratingFunctions& gf, int kmax) {
  Json list = Json::array();
  for (const auto& m : members(kmax)) {
    const PLExpr& e = gf.get(m.kind, m.k);
    Json j;
    j["kind"] = kind_name(m.kind);
    j["k"] = m.k;
    j["terms"] = Json::parse(serialize(e));
    list.push_back(std::move(j));
  }
  Json doc;
  doc["table"] = "generating_functions";
  doc["families"] = std::move(list);
  return doc;
}

Table dump_table(GeneratingFunctions& gf, int kmax) {
  Table t;
  t.columns = {"kind", "k", "num", "den", "upow", "vpow"};
  for (const auto& m : members(kmax)) {
    for (const auto& [key, c] : gf.get(m.kind, m.k).terms()) {
      t.rows.push_back({kind_name(m.kind), std::to_string(m.k), c.get_num().get_str(), c.get_den().get_str(),
                        std::to_string(key.upow), std::to_string(key.vpow)});
    }
  }
  return t;
}

}  // namespace bstrank::report
