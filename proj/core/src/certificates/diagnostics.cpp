#include "ncvr/certificates/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent,
                            std::uint64_t cap) {
  std::uint64_t result = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

// Walks every ordered batch (i_1, ..., i_b) in lexicographic order while
// keeping partial sums of the per-index differences, so each batch costs
// O(d) instead of O(b d).
void enumerate_batches(const std::vector<Vector>& diffs, std::size_t depth,
                       std::size_t batch_size, std::vector<Vector>& partial,
                       const Vector& offset, double inv_b, double& sum_sq,
                       Vector& sum_dir, std::uint64_t& count) {
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (depth == 0) {
      partial[0] = diffs[i];
    } else {
      partial[depth] = partial[depth - 1] + diffs[i];
    }
    if (depth + 1 == batch_size) {
      const Vector u = inv_b * partial[depth] + offset;
      sum_sq += u.squaredNorm();
      sum_dir += u;
      ++count;
    } else {
      enumerate_batches(diffs, depth + 1, batch_size, partial, offset, inv_b,
                        sum_sq, sum_dir, count);
    }
  }
}

struct Prepared {
  std::vector<Vector> diffs;
  Vector snapshot_gradient;
  Vector gradient;
};

Prepared prepare(const FiniteSum& problem, const Vector& x,
                 const Vector& x_snapshot) {
  require_dimension(x, problem.dimension(), "variance_diagnostic x");
  require_dimension(x_snapshot, problem.dimension(),
                    "variance_diagnostic x_snapshot");
  Prepared p;
  p.diffs.resize(problem.size());
  Vector gx;
  Vector gs;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    problem.component_gradient(i, x, gx);
    problem.component_gradient(i, x_snapshot, gs);
    p.diffs[i] = gx - gs;
  }
  p.snapshot_gradient = mean_gradient(problem, x_snapshot);
  p.gradient = mean_gradient(problem, x);
  return p;
}

}  // namespace

VarianceDiagnostic variance_diagnostic(const FiniteSum& problem,
                                       const Vector& x, const Vector& x_snapshot,
                                       std::size_t batch_size,
                                       const VarianceOptions& options) {
  require(batch_size >= 1, "variance_diagnostic: batch size must be >= 1");
  const std::size_t n = problem.size();
  const std::uint64_t batches =
      checked_power(n, batch_size, options.enumeration_limit);
  const bool enumerate = batches <= options.enumeration_limit;
  if (!enumerate && !options.allow_monte_carlo) {
    throw ContractViolation(
        "variance_diagnostic: n^b exceeds the enumeration limit; enable Monte "
        "Carlo estimation explicitly");
  }

  const Prepared p = prepare(problem, x, x_snapshot);
  const double l = options.smoothness.value_or(problem.smoothness());
  const double inv_b = 1.0 / static_cast<double>(batch_size);

  VarianceDiagnostic out;
  out.batch_size = batch_size;
  out.grad_norm_sq = p.gradient.squaredNorm();
  out.distance_sq = (x - x_snapshot).squaredNorm();
  out.bound = 2.0 * out.grad_norm_sq + 2.0 * l * l * inv_b * out.distance_sq;

  const auto d = static_cast<Eigen::Index>(problem.dimension());
  Vector sum_dir = Vector::Zero(d);
  if (enumerate) {
    std::vector<Vector> partial(batch_size, Vector::Zero(d));
    double sum_sq = 0.0;
    std::uint64_t count = 0;
    enumerate_batches(p.diffs, 0, batch_size, partial, p.snapshot_gradient,
                      inv_b, sum_sq, sum_dir, count);
    out.exact = true;
    out.batches_evaluated = count;
    out.mean_sq = sum_sq / static_cast<double>(count);
    out.mean_direction = sum_dir / static_cast<double>(count);
    return out;
  }

  require(options.monte_carlo_samples >= 2,
          "variance_diagnostic: need at least 2 Monte Carlo samples");
  RngStream rng(options.seed);
  double mean = 0.0;
  double m2 = 0.0;
  Vector acc(d);
  for (std::size_t s = 0; s < options.monte_carlo_samples; ++s) {
    acc.setZero();
    for (std::size_t k = 0; k < batch_size; ++k) {
      acc += p.diffs[static_cast<std::size_t>(rng.uniform_index(n))];
    }
    const Vector u = inv_b * acc + p.snapshot_gradient;
    const double value = u.squaredNorm();
    sum_dir += u;
    const double delta = value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (value - mean);
  }
  const auto samples = static_cast<double>(options.monte_carlo_samples);
  out.exact = false;
  out.batches_evaluated = options.monte_carlo_samples;
  out.mean_sq = mean;
  out.std_error = std::sqrt(m2 / (samples - 1.0) / samples);
  out.mean_direction = sum_dir / samples;
  return out;
}

VarianceDiagnostic full_batch_variance_diagnostic(const FiniteSum& problem,
                                                  const Vector& x,
                                                  const Vector& x_snapshot) {
  const Prepared p = prepare(problem, x, x_snapshot);
  const double l = problem.smoothness();
  const double n = static_cast<double>(problem.size());
  Vector total = Vector::Zero(static_cast<Eigen::Index>(problem.dimension()));
  for (const auto& diff : p.diffs) total += diff;
  const Vector u = total / n + p.snapshot_gradient;

  VarianceDiagnostic out;
  out.batch_size = problem.size();
  out.batches_evaluated = 1;
  out.grad_norm_sq = p.gradient.squaredNorm();
  out.distance_sq = (x - x_snapshot).squaredNorm();
  out.bound = 2.0 * out.grad_norm_sq + 2.0 * l * l / n * out.distance_sq;
  out.mean_sq = u.squaredNorm();
  out.mean_direction = u;
  return out;
}

double convex_variance_bound(const FiniteSum& problem, const Vector& x,
                             const Vector& x_snapshot, double f_star) {
  return 4.0 * problem.smoothness() *
         (mean_value(problem, x) - f_star + mean_value(problem, x_snapshot) -
          f_star);
}

InequalitySides smoothness_gap(const FiniteSum& problem, std::size_t i,
                               const Vector& x, const Vector& y) {
  require(i < problem.size(), "smoothness_gap: component index out of range");
  Vector gx;
  Vector gy;
  problem.component_gradient(i, x, gx);
  problem.component_gradient(i, y, gy);
  InequalitySides sides;
  sides.lhs = (gx - gy).squaredNorm();
  sides.rhs = 2.0 * problem.smoothness() *
              (problem.component_value(i, x) - problem.component_value(i, y) -
               gy.dot(x - y));
  return sides;
}

InequalitySides sum_of_squares_bound(std::span<const Vector> z) {
  require(!z.empty(), "sum_of_squares_bound: need at least one vector");
  Vector total = Vector::Zero(z.front().size());
  double squares = 0.0;
  for (const auto& v : z) {
    require(v.size() == total.size(), "sum_of_squares_bound: size mismatch");
    total += v;
    squares += v.squaredNorm();
  }
  return {total.squaredNorm(), static_cast<double>(z.size()) * squares};
}

GradientDominanceReport gradient_dominance_check(
    const FiniteSum& problem, double tau, std::span<const Vector> points,
    std::optional<double> f_star, double tolerance) {
  require(tau > 0.0, "gradient_dominance_check: tau must be positive");
  std::optional<double> reference = f_star ? f_star : problem.optimal_value();
  const bool claim = reference.has_value();
  const double baseline =
      reference.value_or(problem.value_lower_bound().value_or(0.0));

  GradientDominanceReport report;
  report.worst_ratio = -std::numeric_limits<double>::infinity();
  report.worst_excess = -std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    const double gap = mean_value(problem, x) - baseline;
    const double grad_sq = mean_gradient(problem, x).squaredNorm();
    if (grad_sq < 1e-12) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    report.worst_ratio = std::max(report.worst_ratio, gap / grad_sq);
    report.worst_excess = std::max(report.worst_excess, gap - tau * grad_sq);
  }
  if (claim) report.passed = report.evaluated == 0 || report.worst_excess <= tolerance;
  return report;
}

}  // namespace ncvr
