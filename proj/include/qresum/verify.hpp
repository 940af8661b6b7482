#pragma once

// Named suites binding each identity to a parameter grid.

#include <string>
#include <utility>
#include <vector>

#include "qresum/context.hpp"
#include "qresum/report.hpp"

namespace qresum {

struct SuiteInfo {
  std::string id;
  std::string description;
  /// Default q grid.
  std::vector<Real> q_grid;
  /// Checks measure qhat-sized quantities, so q is capped at kDifferenceQMax.
  bool difference = false;
};

inline constexpr Real kDifferenceQMax = 0.05;

struct SuiteSummary {
  int passed = 0;
  int failed = 0;
  /// Worst relative error per identity id, in order of first appearance.
  std::vector<std::pair<std::string, Real>> worst_rel;
  std::vector<std::string> notes;
};

struct SuiteResult {
  std::string id;
  std::vector<VerificationReport> reports;
  SuiteSummary summary;
};

const std::vector<SuiteInfo>& suites();
/// Throws UnknownSuite.
const SuiteInfo& suite_info(const std::string& id);

struct SuiteOptions {
  /// Worker threads for grid points; 0 uses the hardware concurrency.
  int parallelism = 0;
  /// Replaces the suite's q grid when non-empty; difference suites cap each q
  /// at kDifferenceQMax and record a note.
  std::vector<Real> q_grid;
};

/// Runs every check of suite `id`. eps and max_terms come from `ctx`; q from
/// the suite grid unless overridden. Reports are in grid order regardless of
/// parallelism. Throws UnknownSuite.
SuiteResult run_suite(const std::string& id, const QContext& ctx, const SuiteOptions& options = {});

}  // namespace qresum
