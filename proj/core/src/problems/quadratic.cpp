#include "ncvr/problems/quadratic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

namespace {

double spectral_norm_symmetric(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

QuadraticProblem::QuadraticProblem(std::vector<Matrix> hessians,
                                   std::vector<Vector> linear)
    : hessians_(std::move(hessians)), linear_(std::move(linear)) {
  require(!hessians_.empty(), "quadratic problem needs at least one component");
  require(hessians_.size() == linear_.size(),
          "quadratic problem: hessian and linear term counts differ");
  dim_ = static_cast<std::size_t>(hessians_.front().rows());
  require(dim_ >= 1, "quadratic problem: dimension must be at least 1");

  const auto d = static_cast<Eigen::Index>(dim_);
  mean_hessian_ = Matrix::Zero(d, d);
  Vector mean_linear = Vector::Zero(d);
  for (std::size_t i = 0; i < hessians_.size(); ++i) {
    const Matrix& a = hessians_[i];
    require(a.rows() == d && a.cols() == d,
            "quadratic problem: hessian " + std::to_string(i) + " is not d x d");
    require(linear_[i].size() == d,
            "quadratic problem: linear term " + std::to_string(i) +
                " has wrong dimension");
    require((a - a.transpose()).cwiseAbs().maxCoeff() <=
                1e-12 * (1.0 + a.cwiseAbs().maxCoeff()),
            "quadratic problem: hessian " + std::to_string(i) +
                " is not symmetric");
    smoothness_ = std::max(smoothness_, spectral_norm_symmetric(a));
    mean_hessian_ += a;
    mean_linear += linear_[i];
  }
  const double inv_n = 1.0 / static_cast<double>(hessians_.size());
  mean_hessian_ *= inv_n;
  mean_linear *= inv_n;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(mean_hessian_,
                                               Eigen::EigenvaluesOnly);
  strong_convexity_ = solver.eigenvalues().minCoeff();
  if (strong_convexity_ > 0.0) {
    Vector x_star = mean_hessian_.ldlt().solve(mean_linear);
    optimal_value_ = 0.5 * x_star.dot(mean_hessian_ * x_star) -
                     mean_linear.dot(x_star);
    minimizer_ = std::move(x_star);
  }

  std::ostringstream os;
  os << "quadratic(n=" << hessians_.size() << ",d=" << dim_
     << ",lambda=" << strong_convexity_ << ",L=" << smoothness_ << ")";
  label_ = os.str();
}

double QuadraticProblem::component_value(std::size_t i, const Vector& x) const {
  return 0.5 * x.dot(hessians_[i] * x) - linear_[i].dot(x);
}

void QuadraticProblem::component_gradient(std::size_t i, const Vector& x,
                                          Vector& out) const {
  out.noalias() = hessians_[i] * x;
  out -= linear_[i];
}

std::optional<double> QuadraticProblem::gradient_dominance() const {
  if (strong_convexity_ <= 0.0) return std::nullopt;
  return 1.0 / (2.0 * strong_convexity_);
}

std::string QuadraticProblem::describe() const { return label_; }

QuadraticProblem make_quadratic(std::size_t n, std::size_t d,
                                double lambda_target, std::uint64_t seed,
                                double smoothness_target) {
  require(n >= 1 && d >= 1, "make_quadratic: n and d must be at least 1");
  require(lambda_target > 0.0, "make_quadratic: lambda_target must be > 0");
  require(d == 1 || smoothness_target > lambda_target,
          "make_quadratic: smoothness_target must exceed lambda_target");

  RngStream rng(seed);
  const auto dd = static_cast<Eigen::Index>(d);

  Vector u(dd);
  for (Eigen::Index j = 0; j < dd; ++j) u[j] = rng.normal();
  u.normalize();
  const Matrix projector = Matrix::Identity(dd, dd) - u * u.transpose();

  std::vector<Matrix> curvature(n);
  double largest = 0.0;
  for (auto& p : curvature) {
    Matrix r(dd, dd);
    for (Eigen::Index a = 0; a < dd; ++a) {
      for (Eigen::Index b = 0; b < dd; ++b) r(a, b) = rng.normal();
    }
    const Matrix g = projector * r;
    p = g * g.transpose();
    p = 0.5 * (p + p.transpose());
    largest = std::max(largest, spectral_norm_symmetric(p));
  }

  const double scale =
      (d == 1 || largest == 0.0) ? 0.0 : (smoothness_target - lambda_target) / largest;
  std::vector<Matrix> hessians;
  hessians.reserve(n);
  for (const auto& p : curvature) {
    hessians.push_back(lambda_target * Matrix::Identity(dd, dd) + scale * p);
  }

  std::vector<Vector> linear(n, Vector(dd));
  Vector mean = Vector::Zero(dd);
  for (auto& b : linear) {
    for (Eigen::Index j = 0; j < dd; ++j) b[j] = rng.normal();
    mean += b;
  }
  mean /= static_cast<double>(n);
  for (auto& b : linear) b -= mean;

  return QuadraticProblem(std::move(hessians), std::move(linear));
}

}  // namespace ncvr
