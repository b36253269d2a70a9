// Command-line front end: constants, bounds, oracle, simulate, factor, verify.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 internal inconsistency.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "bstrank/acceptance.hpp"
#include "bstrank/conjecture.hpp"
#include "bstrank/errors.hpp"
#include "bstrank/genfun.hpp"
#include "bstrank/montecarlo.hpp"
#include "bstrank/oracle.hpp"
#include "bstrank/report.hpp"

namespace {

using namespace bstrank;

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  int kmax = 5;
  int n = 100;
  std::int64_t trials = 1000;
  std::uint64_t seed = 20240101;
  std::string rho = "7/5";
  std::string format = "json";
  std::string cache_dir;
  int series_order = 50;
  std::uint64_t factor_bound = 1000000;
  bool dump_gf = false;
};

void validate(const RunConfig& cfg) {
  if (cfg.kmax < 0 || cfg.kmax > 7) throw UsageError("--kmax must be in 0..7");
  if (cfg.n < 1) throw UsageError("--n must be positive");
  if (cfg.subcommand == "oracle" && cfg.n > oracle::kDefaultMaxN) {
    throw UsageError("--n must be at most " + std::to_string(oracle::kDefaultMaxN) + " for oracle");
  }
  if (cfg.trials < 1) throw UsageError("--trials must be positive");
  if (cfg.series_order < 1) throw UsageError("--series-order must be positive");
  if (cfg.factor_bound < 2) throw UsageError("--factor-bound must be at least 2");
  Rational rho;
  try {
    rho = parse_rational(cfg.rho);
  } catch (const std::invalid_argument&) {
    throw UsageError("--rho must be a rational such as 7/5");
  }
  if (sgn(rho) <= 0) throw UsageError("--rho must be positive");
  if (cfg.dump_gf && cfg.subcommand != "constants") throw UsageError("--dump-gf applies to constants only");
}

GeneratingFunctions::Options engine_options(const RunConfig& cfg) {
  GeneratingFunctions::Options o;
  if (!cfg.cache_dir.empty()) o.cache_dir = std::filesystem::path(cfg.cache_dir);
  return o;
}

void emit(const RunConfig& cfg, const report::Json& doc, const report::Table& table) {
  std::cout << (cfg.format == "csv" ? report::to_csv(table) : report::to_text(doc));
}

int cmd_constants(const RunConfig& cfg) {
  GeneratingFunctions gf(engine_options(cfg));
  if (cfg.dump_gf) {
    emit(cfg, report::dump_generating_functions(gf, cfg.kmax), report::dump_table(gf, cfg.kmax));
    return 0;
  }
  const auto table = gf.constants(cfg.kmax);
  emit(cfg, report::to_json(table), report::to_table(table));
  return 0;
}

int cmd_bounds(const RunConfig& cfg) {
  GeneratingFunctions gf(engine_options(cfg));
  const auto table = gf.tail_report(cfg.kmax, conjecture::alpha0(), cfg.kmax);
  emit(cfg, report::to_json(table), report::to_table(table));
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const auto tables = report::build_oracle_tables(cfg.n, cfg.kmax, parse_rational(cfg.rho));
  auto doc = report::to_json(tables);
  // Cross-check against generating-function coefficients when in range.
  if (cfg.n <= cfg.series_order) {
    GeneratingFunctions gf(engine_options(cfg));
    for (const auto& row : tables.rows) {
      const auto coeffs = series(gf.root_rank_cdf(row.k), static_cast<unsigned>(cfg.series_order));
      if (1 - coeffs[cfg.n] != row.root_rank_tail) {
        throw InternalInconsistency("oracle: root-rank tail disagrees with the generating function at k=" +
                                    std::to_string(row.k));
      }
    }
    doc["series_checked"] = true;
  } else {
    doc["series_checked"] = false;
  }
  emit(cfg, doc, report::to_table(tables));
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  mc::EstimateConfig ec;
  ec.n = cfg.n;
  ec.trials = cfg.trials;
  ec.seed = cfg.seed;
  ec.kmax = cfg.kmax;
  const auto r = mc::estimate(ec);
  emit(cfg, report::to_json(r), report::to_table(r));
  return 0;
}

int cmd_factor(const RunConfig& cfg) {
  GeneratingFunctions gf(engine_options(cfg));
  const auto table = report::build_factor_table(gf, cfg.kmax, cfg.factor_bound);
  emit(cfg, report::to_json(table), report::to_table(table));
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  acceptance::Options o;
  if (!cfg.cache_dir.empty()) o.cache_dir = std::filesystem::path(cfg.cache_dir);
  o.seed = cfg.seed;
  const auto r = acceptance::run(o);
  emit(cfg, acceptance::to_json(r), acceptance::to_table(r));
  std::cerr << acceptance::summary(r) << acceptance::failures(r);
  return r.pass() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rank statistics of random binary search trees"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--kmax", cfg.kmax, "largest rank k (0..7; 6 and 7 are slow)")->capture_default_str();
  app.add_option("--n", cfg.n, "tree size for oracle and simulate")->capture_default_str();
  app.add_option("--trials", cfg.trials, "simulation trials")->capture_default_str();
  app.add_option("--seed", cfg.seed, "simulation seed")->capture_default_str();
  app.add_option("--rho", cfg.rho, "moment base for oracle, as p/q")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--cache-dir", cfg.cache_dir, "directory for cached expressions");
  app.add_option("--series-order", cfg.series_order, "coefficients used by oracle cross-checks")
      ->capture_default_str();
  app.add_option("--factor-bound", cfg.factor_bound, "trial-division bound for numerators")->capture_default_str();
  app.add_flag("--dump-gf", cfg.dump_gf, "constants: print the serialized generating functions instead");

  app.add_subcommand("constants", "exact c_k, f_k, g_k, partial sums and ratios");
  app.add_subcommand("bounds", "greedy tail moments against the exact tails");
  app.add_subcommand("oracle", "exact dynamic-programming tables at one n");
  app.add_subcommand("simulate", "Monte Carlo estimates");
  app.add_subcommand("factor", "denominator conjectures and numerator factors");
  app.add_subcommand("verify", "run the acceptance suite");

  const std::string usage = app.help();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    validate(cfg);
    if (cfg.kmax >= 6 && cfg.subcommand != "oracle" && cfg.subcommand != "simulate") {
      std::cerr << "warning: kmax " << cfg.kmax << " is a stretch run and may take a long time\n";
    }
    if (cfg.subcommand == "constants") return cmd_constants(cfg);
    if (cfg.subcommand == "bounds") return cmd_bounds(cfg);
    if (cfg.subcommand == "oracle") return cmd_oracle(cfg);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
    if (cfg.subcommand == "factor") return cmd_factor(cfg);
    return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << usage;
    return kExitUsage;
  } catch (const InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
