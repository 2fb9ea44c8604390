#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncvr/oracle.hpp"

namespace ncvr {

/// f_i(x) = 1/2 x^T A_i x - b_i^T x with symmetric PSD A_i.
///
/// Construction computes L = max_i ||A_i||_2, the strong-convexity modulus
/// lambda = lambda_min((1/n) sum A_i) and, when lambda > 0, the minimizer
/// x* = Abar^{-1} bbar with its exact value.
class QuadraticProblem final : public FiniteSum {
 public:
  QuadraticProblem(std::vector<Matrix> hessians, std::vector<Vector> linear);

  std::size_t size() const override { return hessians_.size(); }
  std::size_t dimension() const override { return dim_; }
  double component_value(std::size_t i, const Vector& x) const override;
  void component_gradient(std::size_t i, const Vector& x,
                          Vector& out) const override;
  double smoothness() const override { return smoothness_; }
  std::optional<double> optimal_value() const override { return optimal_value_; }
  std::string describe() const override;

  const Matrix& hessian(std::size_t i) const { return hessians_[i]; }
  const Vector& linear_term(std::size_t i) const { return linear_[i]; }
  const Matrix& mean_hessian() const { return mean_hessian_; }

  /// lambda_min of the mean Hessian.
  double strong_convexity() const { return strong_convexity_; }
  /// tau = 1/(2 lambda); empty unless lambda > 0.
  std::optional<double> gradient_dominance() const;
  const std::optional<Vector>& minimizer() const { return minimizer_; }

 private:
  std::vector<Matrix> hessians_;
  std::vector<Vector> linear_;
  std::size_t dim_ = 0;
  Matrix mean_hessian_;
  double smoothness_ = 0.0;
  double strong_convexity_ = 0.0;
  std::optional<Vector> minimizer_;
  std::optional<double> optimal_value_;
  std::string label_;
};

/// Random strongly convex instance with lambda_min(mean Hessian) equal to
/// `lambda_target` and max_i ||A_i||_2 equal to `smoothness_target`.
///
/// A_i = lambda I + s G_i G_i^T where every G_i has a shared random unit
/// vector u in its left null space, so u is an exact eigenvector of the mean
/// Hessian with eigenvalue lambda. The linear terms have zero mean, which
/// places the minimizer at x* = 0 with f(x*) = 0. For d = 1 every A_i equals
/// lambda and the smoothness target is ignored.
QuadraticProblem make_quadratic(std::size_t n, std::size_t d,
                                double lambda_target, std::uint64_t seed,
                                double smoothness_target = 1.0);

}  // namespace ncvr
