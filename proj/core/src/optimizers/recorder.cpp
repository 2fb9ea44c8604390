#include "recorder.hpp"

#include <algorithm>
#include <cmath>

#include "ncvr/rng.hpp"

namespace ncvr {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kWarning: return "warning";
    case RunStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

namespace detail {

Recorder::Recorder(Oracle& oracle, RunRecord& record, const RunOptions& options)
    : oracle_(oracle), record_(record), options_(options) {
  record_.rng_algorithm = std::string(RngStream::kAlgorithm);
}

bool Recorder::checkpoint(const Vector& x, std::uint64_t update_index) {
  if (!options_.checkpoints.enabled) return true;
  const std::uint64_t ifo = oracle_.ifo_calls();
  if (!record_.checkpoints.empty() && record_.checkpoints.back().ifo_count >= ifo) {
    return true;
  }
  Checkpoint cp;
  cp.ifo_count = ifo;
  cp.effective_passes = oracle_.effective_passes();
  cp.f_value = mean_value(oracle_.problem(), x);
  cp.grad_norm_sq = mean_gradient(oracle_.problem(), x).squaredNorm();
  cp.min_grad_norm_sq =
      record_.checkpoints.empty()
          ? cp.grad_norm_sq
          : std::min(record_.checkpoints.back().min_grad_norm_sq, cp.grad_norm_sq);
  cp.update_index = update_index;
  record_.checkpoints.push_back(cp);
  if (!std::isfinite(cp.f_value) ||
      std::fabs(cp.f_value) > options_.divergence_threshold) {
    mark_diverged(update_index, "objective value left the finite range");
    return false;
  }
  return true;
}

bool Recorder::accept(const Vector& x, std::uint64_t update_index) {
  const double norm = x.norm();
  if (!std::isfinite(norm) || norm > options_.divergence_threshold) {
    mark_diverged(update_index, "iterate norm left the finite range");
    return false;
  }
  return true;
}

void Recorder::notify(std::uint64_t update_index, std::uint64_t epoch,
                      std::size_t step, const Vector& x) const {
  if (options_.observer) options_.observer(IterateEvent{update_index, epoch, step, x});
}

bool Recorder::due(std::uint64_t update_index, std::uint64_t natural_period) const {
  const std::uint64_t period = options_.checkpoints.every_updates > 0
                                   ? options_.checkpoints.every_updates
                                   : natural_period;
  return period > 0 && update_index % period == 0;
}

void Recorder::finish() {
  record_.ifo_calls = oracle_.ifo_calls();
}

void Recorder::mark_diverged(std::uint64_t update_index, const std::string& why) {
  record_.status = RunStatus::kDiverged;
  record_.diverged_at = update_index;
  record_.status_message =
      why + " at update " + std::to_string(update_index);
}

}  // namespace detail
}  // namespace ncvr
