#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncvr/oracle.hpp"
#include "ncvr/problems/dataset.hpp"

namespace ncvr {

/// Logistic loss with a smooth nonconvex penalty:
///
///   f_i(x) = log(1 + exp(-y_i <a_i, x>)) + r * sum_j x_j^2 / (1 + x_j^2)
///
/// with labels y_i in {-1, +1}. The penalty's second derivative lies in
/// [-1/2, 2] per coordinate, so each f_i is L-smooth with
/// L = ||a_i||^2 / 4 + 2 r, and the gradient of the penalty is bounded by
/// 2 r * 9 / (16 sqrt 3) per coordinate, giving a global sigma bound.
/// Every f_i is nonnegative.
class NonconvexLogisticProblem final : public FiniteSum {
 public:
  NonconvexLogisticProblem(Matrix rows, std::vector<int> labels,
                           double regularization);
  /// Labels > 0 map to +1, everything else to -1.
  NonconvexLogisticProblem(const Dataset& data, double regularization);

  std::size_t size() const override { return labels_.size(); }
  std::size_t dimension() const override {
    return static_cast<std::size_t>(rows_.cols());
  }
  double component_value(std::size_t i, const Vector& x) const override;
  void component_gradient(std::size_t i, const Vector& x,
                          Vector& out) const override;
  double smoothness() const override { return smoothness_; }
  std::optional<double> gradient_bound() const override { return sigma_; }
  std::optional<double> value_lower_bound() const override { return 0.0; }
  std::string describe() const override;

  double regularization() const { return regularization_; }
  const Matrix& rows() const { return rows_; }
  const std::vector<int>& labels() const { return labels_; }

  /// Fraction of examples with sign(<a_i, x>) == y_i.
  double accuracy(const Vector& x) const;

 private:
  Matrix rows_;  // n x d, row i is a_i
  std::vector<int> labels_;
  double regularization_;
  double smoothness_ = 0.0;
  double sigma_ = 0.0;
};

struct LogisticInstanceConfig {
  std::size_t n = 1000;
  std::size_t d = 20;
  double regularization = 0.01;
  /// When set, every row is rescaled to exactly this Euclidean norm.
  std::optional<double> row_norm;
  /// Norm of the planted teacher vector; labels are drawn as +1 with
  /// probability sigmoid(<a_i, w_teacher>), so the data is not separable.
  double teacher_norm = 3.0;
  std::uint64_t seed = 1;
};

/// Rows have i.i.d. N(0, 1/d) entries (unit expected norm) unless row_norm
/// pins the norm.
NonconvexLogisticProblem make_logistic(const LogisticInstanceConfig& config);

}  // namespace ncvr
