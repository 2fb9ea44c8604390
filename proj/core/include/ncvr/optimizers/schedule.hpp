#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ncvr {

/// Step-size sequence {eta_t} for SGD.
class StepSizes {
 public:
  enum class Kind { kConstant, kTInverse, kSequence };

  static StepSizes constant(double eta);
  /// The T-dependent constant c / sqrt(T), c = sqrt(2 f_gap / (L sigma^2)).
  static StepSizes inverse_sqrt_horizon(double f_gap, double smoothness,
                                        double sigma, std::uint64_t horizon);
  /// eta_t = eta0 / (1 + decay * floor(t / n)); decay = 0 is a constant step.
  static StepSizes t_inverse(double eta0, double decay, std::size_t n);
  /// Explicit sequence; t beyond the end reuses the last entry.
  static StepSizes sequence(std::vector<double> steps);

  double operator()(std::uint64_t t) const;
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  StepSizes() = default;

  Kind kind_ = Kind::kConstant;
  double eta0_ = 0.0;
  double decay_ = 0.0;
  std::size_t period_ = 1;
  std::vector<double> steps_;
  std::string label_;
};

/// Snapshot distribution {p_i}_{i=0}^m over the iterates of an epoch.
enum class SnapshotRule {
  /// p_m = 1: the snapshot is the last iterate (nonconvex analysis).
  kLastIterate,
  /// p_i = 1/m for i < m, p_m = 0 (convex analysis).
  kUniformAverage,
  /// Weights supplied in SvrgSchedule::snapshot_weights.
  kCustom,
};

struct SvrgSchedule {
  /// eta_0 ... eta_{m-1}; a single entry means a constant step.
  std::vector<double> step_sizes;
  std::size_t epoch_length = 1;  // m
  std::uint64_t total_inner_iterations = 1;  // T
  std::size_t batch_size = 1;  // b
  SnapshotRule snapshot = SnapshotRule::kLastIterate;
  /// p_0 ... p_m, used only with SnapshotRule::kCustom.
  std::vector<double> snapshot_weights;
  /// Diagnostic mode: every inner step uses all n indices as its batch.
  bool full_batch = false;

  static SvrgSchedule constant(double eta, std::size_t epoch_length,
                               std::uint64_t total_inner_iterations,
                               SnapshotRule rule = SnapshotRule::kLastIterate,
                               std::size_t batch_size = 1);

  /// S = ceil(T / m). Every epoch runs in full.
  std::uint64_t epochs() const;
  double step(std::size_t t) const;
  /// Resolved p_0 ... p_m.
  std::vector<double> weights() const;
  /// Throws ContractViolation when the schedule is malformed.
  void validate() const;
  std::string describe() const;
};

}  // namespace ncvr
