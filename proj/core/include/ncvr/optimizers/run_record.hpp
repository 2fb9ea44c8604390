#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncvr/vector.hpp"

namespace ncvr {

enum class RunStatus {
  kOk,
  /// A precondition of the analysis was not met; the run still completed.
  kWarning,
  /// The iterate or objective blew up; the record is partial.
  kDiverged,
};

std::string to_string(RunStatus status);

/// One reporting point. f_value and grad_norm_sq come from ledger-exempt
/// instrumentation and never perturb the run.
struct Checkpoint {
  std::uint64_t ifo_count = 0;
  double effective_passes = 0.0;
  double f_value = 0.0;
  double grad_norm_sq = 0.0;
  /// Running minimum of grad_norm_sq over this and earlier checkpoints.
  double min_grad_norm_sq = 0.0;
  /// Updates performed when the checkpoint was taken.
  std::uint64_t update_index = 0;
};

enum class MsvrgBranch { kStochasticGradient, kVarianceReduced };

struct RunRecord {
  std::string algorithm;
  std::string schedule;
  std::uint64_t seed = 0;
  std::string rng_algorithm;

  std::vector<Checkpoint> checkpoints;
  /// x_a for SVRG-family runs (a uniformly drawn inner iterate); the final
  /// iterate for SGD and GD.
  Vector output;
  /// Last snapshot for SVRG-family runs; last iterate otherwise.
  Vector final_iterate;

  RunStatus status = RunStatus::kOk;
  std::string status_message;
  /// Update index at which divergence was detected.
  std::optional<std::uint64_t> diverged_at;

  std::uint64_t updates = 0;
  std::uint64_t ifo_calls = 0;
  /// Drawn output position (epoch, step) for SVRG-family runs.
  std::optional<std::pair<std::uint64_t, std::size_t>> output_position;

  /// GD-SVRG: x^0, x^1, ..., x^K.
  std::vector<Vector> outer_iterates;
  /// MSVRG: which branch of the max rule selected the step size.
  std::optional<MsvrgBranch> msvrg_branch;
  /// The constant step size actually used, when there is one.
  std::optional<double> step_size;

  std::vector<std::string> notes;
};

struct IterateEvent {
  std::uint64_t update_index;  // 1-based count of updates performed
  std::uint64_t epoch;         // 0 for SGD and GD
  std::size_t step;            // inner step within the epoch
  const Vector& iterate;       // the iterate after the update
};

using IterateObserver = std::function<void(const IterateEvent&)>;

struct CheckpointPolicy {
  bool enabled = true;
  /// 0 selects the natural cadence: once per epoch for SVRG-family runs,
  /// once per n updates for SGD, every update for GD.
  std::uint64_t every_updates = 0;
};

struct RunOptions {
  CheckpointPolicy checkpoints;
  /// Called after every update; purely observational.
  IterateObserver observer;
  /// Abort when ||x|| or |f(x)| exceeds this or turns non-finite.
  double divergence_threshold = 1e12;
};

}  // namespace ncvr
