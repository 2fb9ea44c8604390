#include <cmath>
#include <limits>
#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/optimizers/optimizers.hpp"

namespace ncvr {

MsvrgStep msvrg_step_size(std::size_t n, double smoothness,
                          std::uint64_t horizon, double sigma, double f_gap,
                          const UniversalConstants& constants) {
  require(n >= 1, "MSVRG needs n >= 1");
  require(smoothness > 0.0, "smoothness must be positive");
  require(horizon >= 1, "MSVRG horizon must be positive");
  require(sigma > 0.0, "gradient bound sigma must be positive");
  require(f_gap > 0.0, "objective gap must be positive");
  require(constants.mu > 0.0, "mu must be positive");

  const double nd = static_cast<double>(n);
  const double n23 = std::cbrt(nd * nd);
  MsvrgStep out;
  out.c = std::sqrt(f_gap / (2.0 * smoothness * sigma * sigma));
  out.stochastic_branch = out.c / std::sqrt(static_cast<double>(horizon));
  out.variance_reduced_branch = constants.mu / (smoothness * n23);
  out.epoch_length = static_cast<std::size_t>(std::floor(
      nd / (3.0 * constants.mu) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())));
  out.crossover_horizon = out.c * out.c * smoothness * smoothness * n23 * n23 /
                          (constants.mu * constants.mu);
  if (out.stochastic_branch >= out.variance_reduced_branch) {
    out.eta = out.stochastic_branch;
    out.branch = MsvrgBranch::kStochasticGradient;
  } else {
    out.eta = out.variance_reduced_branch;
    out.branch = MsvrgBranch::kVarianceReduced;
  }
  return out;
}

RunRecord run_msvrg(Oracle& oracle, const Vector& x0, std::uint64_t horizon,
                    double sigma, double f_gap, std::uint64_t seed,
                    const UniversalConstants& constants,
                    const RunOptions& options) {
  const MsvrgStep step = msvrg_step_size(oracle.size(), oracle.smoothness(), horizon,
                                         sigma, f_gap, constants);
  if (step.epoch_length == 0) {
    throw ContractViolation("MSVRG epoch length floor(n / (3 mu)) is zero");
  }
  if (horizon % step.epoch_length != 0) {
    throw ContractViolation("MSVRG horizon T=" + std::to_string(horizon) +
                            " is not a multiple of the epoch length m=" +
                            std::to_string(step.epoch_length));
  }
  const SvrgSchedule schedule = SvrgSchedule::constant(step.eta, step.epoch_length, horizon);
  RunRecord record = run_svrg(oracle, x0, schedule, seed, options);
  record.algorithm = "msvrg";
  record.msvrg_branch = step.branch;
  record.step_size = step.eta;
  std::ostringstream s;
  s << (step.branch == MsvrgBranch::kStochasticGradient ? "sgd-branch" : "svrg-branch")
    << " " << record.schedule;
  record.schedule = s.str();
  return record;
}

}  // namespace ncvr
