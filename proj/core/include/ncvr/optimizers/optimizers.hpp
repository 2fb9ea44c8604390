#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ncvr/certificates/certificate.hpp"
#include "ncvr/oracle.hpp"
#include "ncvr/optimizers/run_record.hpp"
#include "ncvr/optimizers/schedule.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

/// SGD: x^{t+1} = x^t - eta_t grad f_{i_t}(x^t) with i_t uniform (with
/// replacement). With batch_size b > 1 the step averages b sampled
/// component gradients. Costs exactly steps * b IFO calls.
RunRecord run_sgd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                  const StepSizes& step_sizes, std::uint64_t seed,
                  const RunOptions& options = {}, std::size_t batch_size = 1);

/// Same, drawing indices from (and advancing) a caller-owned stream.
RunRecord run_sgd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                  const StepSizes& step_sizes, RngStream& rng,
                  const RunOptions& options = {}, std::size_t batch_size = 1);

/// Gradient descent x^{k+1} = x^k - eta grad f(x^k); n IFO calls per step.
RunRecord run_gd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                 double eta, const RunOptions& options = {});

/// SVRG with single-sample inner steps (schedule.batch_size must be 1).
///
/// Each epoch evaluates g = grad f(x_snap) (n IFO), then performs m updates
/// x_{t+1} = x_t - eta_t (grad f_i(x_t) - grad f_i(x_snap) + g) at 2 IFO each,
/// and sets the next snapshot to sum_i p_i x_i as a running weighted sum.
/// The output x_a is the inner iterate at a uniformly drawn (epoch, step)
/// position fixed before the run starts.
RunRecord run_svrg(Oracle& oracle, const Vector& x0,
                   const SvrgSchedule& schedule, std::uint64_t seed,
                   const RunOptions& options = {});

/// Mini-batch SVRG: each inner step averages the corrections over b indices
/// drawn with replacement (2b IFO). b = 1 reproduces run_svrg bit for bit.
RunRecord run_minibatch_svrg(Oracle& oracle, const Vector& x0,
                             const SvrgSchedule& schedule, std::uint64_t seed,
                             const RunOptions& options = {});

/// Either variant, drawing from a caller-owned stream.
RunRecord run_svrg(Oracle& oracle, const Vector& x0,
                   const SvrgSchedule& schedule, RngStream& rng,
                   const RunOptions& options = {});

/// Schedule for restarted SVRG on a tau-gradient-dominated objective:
/// T = ceil(2 L tau n^(2/3) / nu), m = floor(n / (3 mu)), eta = mu / (L n^(2/3)),
/// last-iterate snapshots.
SvrgSchedule theoretical_gd_svrg_schedule(std::size_t n, double smoothness,
                                          double tau,
                                          const UniversalConstants& constants = {});

struct GdSvrgConfig {
  std::size_t outer_iterations = 1;  // K
  /// Explicit inner schedule. When empty, the theoretical schedule is built
  /// from `tau` and `constants`.
  std::optional<SvrgSchedule> inner;
  double tau = 0.0;
  UniversalConstants constants;
};

/// GD-SVRG: x^k = SVRG(x^{k-1}) for k = 1..K, all inner runs sharing one
/// random stream. Records x^0..x^K and one checkpoint per outer iteration.
/// In theoretical mode, tau <= n^(1/3) yields RunStatus::kWarning.
RunRecord run_gd_svrg(Oracle& oracle, const Vector& x0,
                      const GdSvrgConfig& config, std::uint64_t seed,
                      const RunOptions& options = {});

struct MsvrgStep {
  double eta = 0.0;
  MsvrgBranch branch = MsvrgBranch::kVarianceReduced;
  double c = 0.0;
  double stochastic_branch = 0.0;  // c / sqrt(T)
  double variance_reduced_branch = 0.0;  // mu / (L n^(2/3))
  std::size_t epoch_length = 0;  // floor(n / (3 mu))
  /// T at which both branches coincide: c^2 L^2 n^(4/3) / mu^2.
  double crossover_horizon = 0.0;
};

/// eta = max{c / sqrt(T), mu / (L n^(2/3))} with c = sqrt(f_gap / (2 L sigma^2)).
/// Ties resolve to the stochastic-gradient branch.
MsvrgStep msvrg_step_size(std::size_t n, double smoothness,
                          std::uint64_t horizon, double sigma, double f_gap,
                          const UniversalConstants& constants = {});

/// MSVRG: SVRG with the max-rule constant step, epoch length
/// floor(n / (3 mu)) and last-iterate snapshots. The horizon must be a
/// multiple of the epoch length.
RunRecord run_msvrg(Oracle& oracle, const Vector& x0, std::uint64_t horizon,
                    double sigma, double f_gap, std::uint64_t seed,
                    const UniversalConstants& constants = {},
                    const RunOptions& options = {});

}  // namespace ncvr
