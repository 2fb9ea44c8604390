#pragma once

#include <vector>

#include "ncvr/problems/logistic.hpp"
#include "ncvr/problems/quadratic.hpp"
#include "ncvr/rng.hpp"

namespace ncvr::testing {

// f_i(x) = (a_i / 2) ||x||^2 in dimension d.
inline QuadraticProblem scaled_identity(std::vector<double> a, std::size_t d = 1,
                                        std::vector<double> b = {}) {
  std::vector<Matrix> hessians;
  std::vector<Vector> linear;
  const auto dim = static_cast<Eigen::Index>(d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    hessians.push_back(a[i] * Matrix::Identity(dim, dim));
    linear.push_back(Vector::Constant(dim, b.empty() ? 0.0 : b[i]));
  }
  return QuadraticProblem(std::move(hessians), std::move(linear));
}

inline Vector random_vector(RngStream& rng, std::size_t d, double scale = 1.0) {
  Vector x(static_cast<Eigen::Index>(d));
  for (auto& v : x) v = scale * rng.normal();
  return x;
}

inline Vector scalar(double v) { return Vector::Constant(1, v); }

inline NonconvexLogisticProblem small_logistic(std::size_t n, std::size_t d,
                                               std::uint64_t seed = 1,
                                               double reg = 0.05) {
  LogisticInstanceConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.seed = seed;
  cfg.regularization = reg;
  return make_logistic(cfg);
}

}  // namespace ncvr::testing
