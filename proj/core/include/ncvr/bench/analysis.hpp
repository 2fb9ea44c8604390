#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncvr/optimizers/run_record.hpp"

namespace ncvr {

struct RateWindow {
  double min_passes = 0.0;
  double max_passes = std::numeric_limits<double>::infinity();
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log(min-so-far y) against log(passes) over points
/// with passes inside the window. The running minimum starts at the first
/// point in the series, not the first in the window. Points with
/// non-positive passes are skipped. Fewer than 5 usable points is a
/// ContractViolation.
RateFit fit_rate(std::span<const double> passes, std::span<const double> values,
                 const RateWindow& window = {});
RateFit fit_rate(const std::vector<Checkpoint>& checkpoints,
                 const RateWindow& window = {});

/// A per-run CSV read back from disk.
struct RunSeries {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string problem;
  std::string status = "ok";
  std::vector<Checkpoint> checkpoints;
};

/// Parses the per-run CSV format (with or without the status column).
std::vector<Checkpoint> read_run_csv(std::istream& in);
std::vector<Checkpoint> read_run_csv(const std::filesystem::path& path);

/// Loads every run listed in DIR/manifest.json.
std::vector<RunSeries> load_runs(const std::filesystem::path& dir);

/// 1e-1, 1e-2, ..., 1e-6.
std::vector<double> default_epsilon_ladder();

struct ComparisonRow {
  std::string algorithm;
  std::size_t runs = 0;
  std::size_t partial_runs = 0;
  double final_median = 0.0;
  double final_iqr = 0.0;
  double min_median = 0.0;
  double min_iqr = 0.0;
  /// Median IFO calls to first reach each ladder entry; empty when at most
  /// half of the runs reached it.
  std::vector<std::optional<double>> ifo_to_reach;
  std::optional<double> slope_median;
};

struct ComparisonTable {
  std::string problem;
  std::vector<double> ladder;
  std::vector<ComparisonRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Groups runs by algorithm (first-seen order). All runs must share one
/// problem descriptor.
ComparisonTable compare(const std::vector<RunSeries>& runs,
                        const std::vector<double>& ladder = default_epsilon_ladder(),
                        const RateWindow& window = {1.0});

double median(std::vector<double> values);
/// Q3 - Q1 with linear interpolation between order statistics.
double interquartile_range(std::vector<double> values);

}  // namespace ncvr
