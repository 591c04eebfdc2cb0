#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/configurations.hpp"
#include "pfaffdist/metrics.hpp"

namespace pfaffdist::experiment {

struct SweepRow {
  std::string family;  // ConfigSpec::label()
  std::int64_t m = 0, n = 0;
  double c = 0.25;
  std::int64_t distinct = 0;
  BigInt energy;
  BigInt proximity_energy;
  BigInt incidences;
  Rational cs_lower;
  double theorem_bound = 0.0;
  double ratio = 0.0;              // |D| / theorem_bound
  double ec_ratio = 0.0;           // E_c / (c E)
  std::int64_t max_multiplicity = -1;  // -1 when skipped
};

struct SweepOptions {
  double c = 0.25;
  double tol = 1e-9;
  // Each size sets n; m follows n unless fixed_m.
  bool fixed_m = false;
  // Largest mn for which the curve multiplicity is measured.
  std::int64_t multiplicity_limit = 4096;
};

struct ExperimentResult {
  configurations::ConfigSpec spec;
  SweepOptions options;
  std::vector<SweepRow> rows;
  std::vector<metrics::PointConfiguration> configs;
  std::vector<metrics::DistanceHistogram> histograms;
  double exponent = 0.0;  // slope of log |D| against log n
  bool passed = false;
};

// Runs generate, histogram, energy, proximity energy and incidence count per
// size. Sizes must be ascending with at least three entries. Throws
// IdentityViolation naming the row when E_c != I or E |D| < (mn)^2.
ExperimentResult run_sweep(const configurations::ConfigSpec& tmpl, const std::vector<int>& sizes,
                           const SweepOptions& options = {});

// report.csv, points_<family>_<m>x<n>_{1,2}.csv, hist_<family>_<m>x<n>.csv, loglog.svg
void emit_report(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir);
void emit_report(const ExperimentResult& result, const std::filesystem::path& dir);

// Reads report.csv and checks each row against its histogram file:
// multiplicities sum to mn and the distinct count matches.
std::vector<SweepRow> load_report(const std::filesystem::path& dir);

std::string report_header();
std::string report_line(const SweepRow& row);

std::string loglog_svg(const std::vector<ExperimentResult>& results);

}  // namespace pfaffdist::experiment
