#include "ncvr/problems/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

namespace {

// max_x |x / (1 + x^2)^2|, attained at x = 1/sqrt(3).
const double kPenaltySlopeMax = 9.0 / (16.0 * std::sqrt(3.0));

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<int> to_signed_labels(const std::vector<int>& labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int y : labels) out.push_back(y > 0 ? 1 : -1);
  return out;
}

}  // namespace

NonconvexLogisticProblem::NonconvexLogisticProblem(Matrix rows,
                                                   std::vector<int> labels,
                                                   double regularization)
    : rows_(std::move(rows)),
      labels_(std::move(labels)),
      regularization_(regularization) {
  require(!labels_.empty(), "logistic problem needs at least one example");
  require(static_cast<std::size_t>(rows_.rows()) == labels_.size(),
          "logistic problem: row and label counts differ");
  require(rows_.cols() >= 1, "logistic problem: dimension must be at least 1");
  require(regularization_ >= 0.0,
          "logistic problem: regularization must be nonnegative");
  require(rows_.allFinite(), "logistic problem: rows must be finite");
  for (int y : labels_) {
    require(y == 1 || y == -1, "logistic problem: labels must be -1 or +1");
  }
  const double max_sq_norm = rows_.rowwise().squaredNorm().maxCoeff();
  smoothness_ = max_sq_norm / 4.0 + 2.0 * regularization_;
  if (smoothness_ == 0.0) smoothness_ = 1e-12;
  sigma_ = std::sqrt(max_sq_norm) +
           2.0 * regularization_ * kPenaltySlopeMax *
               std::sqrt(static_cast<double>(rows_.cols()));
}

NonconvexLogisticProblem::NonconvexLogisticProblem(const Dataset& data,
                                                   double regularization)
    : NonconvexLogisticProblem(data.features, to_signed_labels(data.labels),
                               regularization) {}

double NonconvexLogisticProblem::component_value(std::size_t i,
                                                 const Vector& x) const {
  const auto row = static_cast<Eigen::Index>(i);
  const double margin = labels_[i] * rows_.row(row).dot(x);
  const auto sq = x.array().square();
  return softplus(-margin) + regularization_ * (sq / (1.0 + sq)).sum();
}

void NonconvexLogisticProblem::component_gradient(std::size_t i,
                                                  const Vector& x,
                                                  Vector& out) const {
  const auto row = static_cast<Eigen::Index>(i);
  const double y = labels_[i];
  const double margin = y * rows_.row(row).dot(x);
  const double weight = -y * sigmoid(-margin);
  const auto denom = (1.0 + x.array().square());
  out = (2.0 * regularization_) * (x.array() / denom.square()).matrix();
  out.noalias() += weight * rows_.row(row).transpose();
}

double NonconvexLogisticProblem::accuracy(const Vector& x) const {
  const Vector scores = rows_ * x;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double s = scores[static_cast<Eigen::Index>(i)];
    if ((s > 0.0 && labels_[i] > 0) || (s <= 0.0 && labels_[i] < 0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels_.size());
}

std::string NonconvexLogisticProblem::describe() const {
  std::ostringstream os;
  os << "nonconvex-logistic(n=" << size() << ",d=" << dimension()
     << ",reg=" << regularization_ << ",L=" << smoothness_ << ")";
  return os.str();
}

NonconvexLogisticProblem make_logistic(const LogisticInstanceConfig& config) {
  require(config.n >= 1 && config.d >= 1,
          "make_logistic: n and d must be at least 1");
  require(!config.row_norm || *config.row_norm > 0.0,
          "make_logistic: row_norm must be positive");
  RngStream rng(config.seed);
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto d = static_cast<Eigen::Index>(config.d);
  const double entry_scale = 1.0 / std::sqrt(static_cast<double>(config.d));

  Vector teacher(d);
  for (Eigen::Index j = 0; j < d; ++j) teacher[j] = rng.normal();
  teacher *= config.teacher_norm / std::max(teacher.norm(), 1e-300);

  Matrix rows(n, d);
  std::vector<int> labels(config.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) rows(i, j) = entry_scale * rng.normal();
    if (config.row_norm) {
      const double norm = rows.row(i).norm();
      if (norm > 0.0) rows.row(i) *= *config.row_norm / norm;
    }
    const double p = sigmoid(rows.row(i).dot(teacher));
    labels[static_cast<std::size_t>(i)] = rng.uniform01() < p ? 1 : -1;
  }
  return NonconvexLogisticProblem(std::move(rows), std::move(labels),
                                  config.regularization);
}

}  // namespace ncvr
