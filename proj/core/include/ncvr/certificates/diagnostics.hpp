#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncvr/oracle.hpp"

namespace ncvr {

struct VarianceOptions {
  /// Largest n^b handled by exhaustive enumeration.
  std::uint64_t enumeration_limit = 1'000'000;
  /// Fall back to Monte Carlo when n^b exceeds the limit; otherwise throw.
  bool allow_monte_carlo = false;
  std::size_t monte_carlo_samples = 100'000;
  std::uint64_t seed = 0;
  /// Smoothness constant used in the bound; defaults to problem.smoothness().
  std::optional<double> smoothness;
};

/// Second moment of the mini-batch variance-reduced direction
///   u = (1/b) sum_{i in I} (grad f_i(x) - grad f_i(x_snap)) + grad f(x_snap)
/// over batches I drawn uniformly with replacement, next to the bound
///   2 ||grad f(x)||^2 + (2 L^2 / b) ||x - x_snap||^2.
struct VarianceDiagnostic {
  double mean_sq = 0.0;
  double bound = 0.0;
  /// Standard error of mean_sq; 0 for exact enumeration.
  double std_error = 0.0;
  bool exact = true;
  std::size_t batch_size = 1;
  std::uint64_t batches_evaluated = 0;
  double grad_norm_sq = 0.0;
  double distance_sq = 0.0;
  /// E[u]; equals grad f(x) up to rounding when exact.
  Vector mean_direction;

  /// E||u - E u||^2.
  double variance() const {
    return mean_sq - mean_direction.squaredNorm();
  }
};

/// Ledger-exempt. Enumerates all n^b ordered batches when feasible.
VarianceDiagnostic variance_diagnostic(const FiniteSum& problem,
                                       const Vector& x, const Vector& x_snapshot,
                                       std::size_t batch_size,
                                       const VarianceOptions& options = {});

/// Diagnostic variant with the batch pinned to all n indices, so the
/// direction is deterministic and equals grad f(x) up to rounding.
VarianceDiagnostic full_batch_variance_diagnostic(const FiniteSum& problem,
                                                  const Vector& x,
                                                  const Vector& x_snapshot);

/// 4 L [f(x) - f* + f(x_snap) - f*], the second-moment bound for convex
/// components.
double convex_variance_bound(const FiniteSum& problem, const Vector& x,
                             const Vector& x_snapshot, double f_star);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tolerance) const { return lhs <= rhs + tolerance; }
};

/// For g = f_i: ||grad g(x) - grad g(y)||^2 versus
/// 2 L [g(x) - g(y) - <grad g(y), x - y>]. Holds for convex L-smooth g.
InequalitySides smoothness_gap(const FiniteSum& problem, std::size_t i,
                               const Vector& x, const Vector& y);

/// ||z_1 + ... + z_r||^2 versus r (||z_1||^2 + ... + ||z_r||^2).
InequalitySides sum_of_squares_bound(std::span<const Vector> z);

struct GradientDominanceReport {
  /// max (f(x) - f*) / ||grad f(x)||^2 over non-stationary points.
  double worst_ratio = 0.0;
  /// max (f(x) - f*) - tau ||grad f(x)||^2.
  double worst_excess = 0.0;
  std::size_t evaluated = 0;
  /// Points with ||grad f||^2 < 1e-12, skipped and counted.
  std::size_t skipped = 0;
  /// Empty when f* is unknown: the scan is empirical only.
  std::optional<bool> passed;
};

/// Evaluates f(x) - f* <= tau ||grad f(x)||^2 at each point. f* comes from
/// `f_star` or problem.optimal_value(); when neither is available, the ratio
/// is computed against problem.value_lower_bound() (or 0) and no pass/fail
/// verdict is given.
GradientDominanceReport gradient_dominance_check(
    const FiniteSum& problem, double tau, std::span<const Vector> points,
    std::optional<double> f_star = std::nullopt, double tolerance = 1e-9);

}  // namespace ncvr
