#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bstrank/conjecture.hpp"
#include "bstrank/genfun.hpp"
#include "bstrank/montecarlo.hpp"
#include "bstrank/rational.hpp"

namespace bstrank::report {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

/// "json" or "csv"; throws std::invalid_argument otherwise.
Format parse_format(std::string_view name);

/// 12 significant digits, locale independent. Non-finite values become
/// "nan", "inf" or "-inf".
std::string format_double(double x);
/// x rounded to 12 significant digits, so JSON output has fixed precision.
double rounded(double x);

/// {"num": "...", "den": "...", "approx": ...}
Json exact(const Rational& q);

/// Flat projection used for CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 quoting for fields containing commas, quotes or newlines.
std::string to_csv(const Table& table);
/// Two-space indented JSON followed by a newline.
std::string to_text(const Json& doc);

Json to_json(const ConstantsTable& table);
Table to_table(const ConstantsTable& table);

Json to_json(const TailTable& table);
Table to_table(const TailTable& table);

Json to_json(const mc::EstimateReport& report);
Table to_table(const mc::EstimateReport& report);

/// Exact oracle quantities at a single n.
struct OracleRow {
  int k = 0;
  Rational root_rank_prob;   // p_{n,k}
  Rational root_rank_tail;   // p_{n,>k}
  Rational expected_count;   // E_{n,k}
  Rational leaf_pairs;       // f_{n,k} = E[L_n 1{root rank = k}]
  Rational closest_pairs;    // g_{n,k}, closest leaves of the root
  Rational greedy_tail;      // pi_{n,>k}
};

struct OracleTables {
  int n = 0;
  int kmax = 0;
  Rational rho;
  Rational expected_leaves;  // E[L_n]
  Rational moment_ratio;     // (1/n) sum_k rho^k E_{n,k}
  std::vector<OracleRow> rows;
};

OracleTables build_oracle_tables(int n, int kmax, const Rational& rho);
Json to_json(const OracleTables& tables);
Table to_table(const OracleTables& tables);

Json to_json(const conjecture::FactorReport& f);
/// "2^8*3^7*5^5" with the residual appended when it is not 1.
std::string factor_string(const conjecture::FactorReport& f);

struct FactorRow {
  int k = 0;
  Rational c;
  conjecture::ConjectureVerdict verdict;
  conjecture::FactorReport numerator;
  conjecture::StructureReport structure;
};

struct FactorTable {
  std::uint64_t numerator_bound = 0;
  std::vector<FactorRow> rows;
};

FactorTable build_factor_table(GeneratingFunctions& gf, int kmax, std::uint64_t numerator_bound);
Json to_json(const FactorTable& table);
Table to_table(const FactorTable& table);

/// Serialized expressions of every family member k <= kmax.
Json dump_generating_functions(GeneratingFunctions& gf, int kmax);
Table dump_table(GeneratingFunctions& gf, int kmax);

}  // namespace bstrank::report
