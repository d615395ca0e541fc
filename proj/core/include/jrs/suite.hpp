#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jrs {

struct SuiteConfig {
  bool quick = false;  // fewer random samples; tolerances unchanged
  std::optional<std::string> criterion;
  std::uint64_t seed = 20240611;
  std::int64_t dmax = 4000;  // precision of the pairs used for Dirichlet series
};

struct CriterionResult {
  std::string id;
  bool passed = false;
  std::string summary;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, std::string>> notes;
  double tolerance = 0.0;
  double seconds = 0.0;
  double runtime_limit = 0.0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

const std::vector<std::string>& criterion_ids();
// Throws std::invalid_argument for an unknown id.
CriterionResult run_criterion(const std::string& id, const SuiteConfig& config);
SuiteReport run_suite(const SuiteConfig& config);

// Byte-identical for identical configs: no timings.
std::string report_json(const SuiteReport& report);
std::string timings_json(const SuiteReport& report);

}  // namespace jrs
