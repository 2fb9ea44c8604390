#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncvr/bench/config.hpp"
#include "ncvr/bench/experiment.hpp"

namespace ncvr {

struct VarianceCheckSpec {
  ProblemSpec problem;
  std::size_t pairs = 20;
  std::vector<std::uint64_t> batches{1};
  std::uint64_t seed = 7;
  /// Points are drawn as initial point + scale * N(0, I).
  double scale = 1.0;
  bool monte_carlo = false;
  std::size_t samples = 100'000;
  double tolerance = 1e-9;
};

/// Reads [problem] and an optional [variance] section.
VarianceCheckSpec parse_variance_check(ConfigFile& config);
VarianceCheckSpec load_variance_check(const std::filesystem::path& path);

struct VarianceCheckRow {
  std::size_t batch_size = 1;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  /// max over pairs of E||u||^2 / bound.
  double worst_ratio = 0.0;
  bool exact = true;
  /// Only for problems with convex components and known f*.
  std::size_t convex_violations = 0;
  double convex_worst_ratio = 0.0;
  bool convex_checked = false;
};

struct VarianceCheckResult {
  std::string problem;
  std::vector<VarianceCheckRow> rows;

  bool passed() const;
  std::string to_text() const;
};

VarianceCheckResult run_variance_check(const VarianceCheckSpec& spec);

}  // namespace ncvr
