#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncvr/oracle.hpp"
#include "ncvr/problems/dataset.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

/// One-hidden-layer tanh network with softmax cross-entropy loss:
///
///   h = tanh(W1 a_i + b1),  z = W2 h + b2,
///   f_i(x) = -log softmax(z)[y_i] + (l2/2)(||W1||_F^2 + ||W2||_F^2).
///
/// Parameters are packed as [W1 (column-major, H x d), b1, W2 (column-major,
/// C x H), b2]. Biases are not regularized. There is no closed-form
/// smoothness constant; smoothness() returns an empirical estimate and
/// smoothness_is_bound() is false.
class MlpProblem final : public FiniteSum {
 public:
  /// Labels must be class indices in [0, classes).
  MlpProblem(Matrix inputs, std::vector<int> labels, std::size_t classes,
             std::size_t hidden, double l2, double smoothness_estimate = 1.0);

  std::size_t size() const override { return labels_.size(); }
  std::size_t dimension() const override { return param_count_; }
  double component_value(std::size_t i, const Vector& x) const override;
  void component_gradient(std::size_t i, const Vector& x,
                          Vector& out) const override;
  double smoothness() const override { return smoothness_; }
  bool smoothness_is_bound() const override { return false; }
  std::optional<double> value_lower_bound() const override { return 0.0; }
  std::string describe() const override;

  void set_smoothness_estimate(double value);

  std::size_t inputs() const { return static_cast<std::size_t>(inputs_.cols()); }
  std::size_t hidden() const { return hidden_; }
  std::size_t classes() const { return classes_; }
  double l2() const { return l2_; }

  /// Glorot/Xavier normalized initialization: each weight uniform on
  /// [-sqrt(6/(fan_in + fan_out)), +sqrt(6/(fan_in + fan_out))], biases zero.
  Vector glorot_initialization(RngStream& rng) const;

  /// Fraction of examples whose arg-max logit equals the label.
  double accuracy(const Vector& x) const;

 private:
  Matrix inputs_;  // n x d
  std::vector<int> labels_;
  std::size_t classes_;
  std::size_t hidden_;
  double l2_;
  double smoothness_;
  std::size_t param_count_;
};

/// Builds an MLP instance from class-labelled data (labels remapped to
/// 0..C-1 in sorted order) and sets its smoothness to the empirical estimate
/// from estimate_smoothness around Glorot-initialized points.
MlpProblem make_mlp(const Dataset& data, std::size_t hidden, double l2,
                    std::uint64_t seed, std::size_t smoothness_trials = 200);

}  // namespace ncvr
