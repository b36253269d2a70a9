#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bstrank/report.hpp"

namespace bstrank::acceptance {

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  /// Reported quantities that are never asserted.
  std::vector<std::string> notes;
  bool pass() const;
};

struct Options {
  /// Simulation worker threads; 0 selects hardware concurrency.
  unsigned threads = 0;
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t seed = 20240101;
  /// Criterion 10 reruns 1..9 and compares the serialized reports.
  bool determinism = true;
};

struct Report {
  std::vector<Criterion> criteria;
  bool pass() const;
};

/// Criteria 1..9 with one fresh engine.
std::vector<Criterion> run_criteria(const Options& options);
/// Criteria 1..10.
Report run(const Options& options);

/// One "PASS  <id>  <title>" line per criterion.
std::string summary(const Report& report);
/// Failing checks with their details, one per line.
std::string failures(const Report& report);

report::Json to_json(const Report& report);
report::Json to_json(const std::vector<Criterion>& criteria);
report::Table to_table(const Report& report);

}  // namespace bstrank::acceptance
