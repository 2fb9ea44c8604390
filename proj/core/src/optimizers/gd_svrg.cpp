#include <cmath>
#include <limits>
#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/optimizers/optimizers.hpp"
#include "recorder.hpp"

namespace ncvr {

namespace {

double floor_count(double x) {
  return std::floor(x * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()));
}

}  // namespace

SvrgSchedule theoretical_gd_svrg_schedule(std::size_t n, double smoothness,
                                          double tau,
                                          const UniversalConstants& constants) {
  require(n >= 1, "GD-SVRG needs n >= 1");
  require(smoothness > 0.0, "smoothness must be positive");
  require(tau > 0.0, "gradient dominance constant must be positive");
  require(constants.mu > 0.0 && constants.nu > 0.0, "constants must be positive");
  const double nd = static_cast<double>(n);
  const double n23 = std::cbrt(nd * nd);
  const double m = floor_count(nd / (3.0 * constants.mu));
  if (m < 1.0) throw ContractViolation("GD-SVRG epoch length floor(n / (3 mu)) is zero");
  const double T = std::ceil(2.0 * smoothness * tau * n23 / constants.nu);
  const double eta = constants.mu / (smoothness * n23);
  return SvrgSchedule::constant(eta, static_cast<std::size_t>(m),
                                static_cast<std::uint64_t>(T));
}

RunRecord run_gd_svrg(Oracle& oracle, const Vector& x0,
                      const GdSvrgConfig& config, std::uint64_t seed,
                      const RunOptions& options) {
  require(config.outer_iterations >= 1, "GD-SVRG needs at least one outer iteration");
  require_dimension(x0, oracle.dimension(), "initial point");

  const std::size_t n = oracle.size();
  const SvrgSchedule inner =
      config.inner ? *config.inner
                   : theoretical_gd_svrg_schedule(n, oracle.smoothness(), config.tau,
                                                  config.constants);

  RunRecord record;
  record.algorithm = "gd-svrg";
  std::ostringstream s;
  s << "K=" << config.outer_iterations << " inner{" << inner.describe() << "}";
  record.schedule = s.str();
  record.seed = seed;
  if (inner.step_sizes.size() == 1) record.step_size = inner.step_sizes[0];

  if (!config.inner && config.tau <= std::cbrt(static_cast<double>(n))) {
    record.status = RunStatus::kWarning;
    record.status_message = "tau <= n^(1/3): the linear-rate guarantee does not apply";
  }

  detail::Recorder rec(oracle, record, options);
  RngStream rng(seed);
  RunOptions inner_options = options;
  inner_options.checkpoints.enabled = false;

  Vector x = x0;
  record.outer_iterates.push_back(x);
  bool ok = rec.checkpoint(x, 0);
  for (std::size_t k = 0; ok && k < config.outer_iterations; ++k) {
    RunRecord sub = run_svrg(oracle, x, inner, rng, inner_options);
    record.updates += sub.updates;
    if (sub.status == RunStatus::kDiverged) {
      record.status = RunStatus::kDiverged;
      record.diverged_at = record.updates;
      record.status_message =
          "outer iteration " + std::to_string(k + 1) + ": " + sub.status_message;
      break;
    }
    x = sub.output;
    record.outer_iterates.push_back(x);
    ok = rec.checkpoint(x, record.updates);
  }

  record.output = x;
  record.final_iterate = x;
  rec.finish();
  return record;
}

}  // namespace ncvr
