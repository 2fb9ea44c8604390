#include "ncvr/problems/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/problems/smoothness.hpp"

namespace ncvr {

namespace {

struct Views {
  Eigen::Map<const Matrix> w1;
  Eigen::Map<const Vector> b1;
  Eigen::Map<const Matrix> w2;
  Eigen::Map<const Vector> b2;
};

Views unpack(const Vector& x, Eigen::Index d, Eigen::Index h, Eigen::Index c) {
  const double* p = x.data();
  return Views{Eigen::Map<const Matrix>(p, h, d),
               Eigen::Map<const Vector>(p + h * d, h),
               Eigen::Map<const Matrix>(p + h * d + h, c, h),
               Eigen::Map<const Vector>(p + h * d + h + c * h, c)};
}

}  // namespace

MlpProblem::MlpProblem(Matrix inputs, std::vector<int> labels,
                       std::size_t classes, std::size_t hidden, double l2,
                       double smoothness_estimate)
    : inputs_(std::move(inputs)),
      labels_(std::move(labels)),
      classes_(classes),
      hidden_(hidden),
      l2_(l2),
      smoothness_(smoothness_estimate) {
  require(!labels_.empty(), "mlp problem needs at least one example");
  require(static_cast<std::size_t>(inputs_.rows()) == labels_.size(),
          "mlp problem: input and label counts differ");
  require(classes_ >= 2, "mlp problem needs at least 2 classes");
  require(hidden_ >= 1, "mlp problem needs at least 1 hidden unit");
  require(l2_ >= 0.0, "mlp problem: l2 must be nonnegative");
  require(smoothness_ > 0.0, "mlp problem: smoothness estimate must be > 0");
  for (int y : labels_) {
    require(y >= 0 && static_cast<std::size_t>(y) < classes_,
            "mlp problem: label out of range");
  }
  const std::size_t d = static_cast<std::size_t>(inputs_.cols());
  param_count_ = hidden_ * d + hidden_ + classes_ * hidden_ + classes_;
}

double MlpProblem::component_value(std::size_t i, const Vector& x) const {
  const auto d = inputs_.cols();
  const auto h = static_cast<Eigen::Index>(hidden_);
  const auto c = static_cast<Eigen::Index>(classes_);
  const Views v = unpack(x, d, h, c);
  const Vector hidden_act =
      (v.w1 * inputs_.row(static_cast<Eigen::Index>(i)).transpose() + v.b1)
          .array()
          .tanh()
          .matrix();
  const Vector logits = v.w2 * hidden_act + v.b2;
  const double top = logits.maxCoeff();
  const double log_norm = top + std::log((logits.array() - top).exp().sum());
  const double loss = log_norm - logits[labels_[i]];
  return loss + 0.5 * l2_ * (v.w1.squaredNorm() + v.w2.squaredNorm());
}

void MlpProblem::component_gradient(std::size_t i, const Vector& x,
                                    Vector& out) const {
  const auto d = inputs_.cols();
  const auto h = static_cast<Eigen::Index>(hidden_);
  const auto c = static_cast<Eigen::Index>(classes_);
  const Views v = unpack(x, d, h, c);
  const auto a = inputs_.row(static_cast<Eigen::Index>(i)).transpose();

  const Vector hidden_act = (v.w1 * a + v.b1).array().tanh().matrix();
  const Vector logits = v.w2 * hidden_act + v.b2;
  const double top = logits.maxCoeff();
  Vector probs = (logits.array() - top).exp().matrix();
  probs /= probs.sum();

  // dL/dz = softmax - onehot
  Vector dz = probs;
  dz[labels_[i]] -= 1.0;
  const Vector dh = (v.w2.transpose() * dz).array() *
                    (1.0 - hidden_act.array().square());

  out.resize(static_cast<Eigen::Index>(param_count_));
  double* p = out.data();
  Eigen::Map<Matrix> gw1(p, h, d);
  Eigen::Map<Vector> gb1(p + h * d, h);
  Eigen::Map<Matrix> gw2(p + h * d + h, c, h);
  Eigen::Map<Vector> gb2(p + h * d + h + c * h, c);
  gw1.noalias() = dh * a.transpose();
  gw1 += l2_ * v.w1;
  gb1 = dh;
  gw2.noalias() = dz * hidden_act.transpose();
  gw2 += l2_ * v.w2;
  gb2 = dz;
}

void MlpProblem::set_smoothness_estimate(double value) {
  require(value > 0.0 && std::isfinite(value),
          "mlp smoothness estimate must be positive and finite");
  smoothness_ = value;
}

Vector MlpProblem::glorot_initialization(RngStream& rng) const {
  const auto d = inputs_.cols();
  const auto h = static_cast<Eigen::Index>(hidden_);
  const auto c = static_cast<Eigen::Index>(classes_);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(param_count_));
  const double limit1 = std::sqrt(6.0 / static_cast<double>(d + h));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + c));
  for (Eigen::Index k = 0; k < h * d; ++k) x[k] = rng.uniform(-limit1, limit1);
  const Eigen::Index w2_offset = h * d + h;
  for (Eigen::Index k = 0; k < c * h; ++k) {
    x[w2_offset + k] = rng.uniform(-limit2, limit2);
  }
  return x;
}

double MlpProblem::accuracy(const Vector& x) const {
  const auto d = inputs_.cols();
  const auto h = static_cast<Eigen::Index>(hidden_);
  const auto c = static_cast<Eigen::Index>(classes_);
  const Views v = unpack(x, d, h, c);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const Vector act =
        (v.w1 * inputs_.row(static_cast<Eigen::Index>(i)).transpose() + v.b1)
            .array()
            .tanh()
            .matrix();
    const Vector logits = v.w2 * act + v.b2;
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    if (best == labels_[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels_.size());
}

std::string MlpProblem::describe() const {
  std::ostringstream os;
  os << "mlp(n=" << size() << ",inputs=" << inputs() << ",hidden=" << hidden_
     << ",classes=" << classes_ << ",l2=" << l2_ << ")";
  return os.str();
}

MlpProblem make_mlp(const Dataset& data, std::size_t hidden, double l2,
                    std::uint64_t seed, std::size_t smoothness_trials) {
  std::map<int, int> remap;
  for (int y : data.labels) remap.emplace(y, 0);
  int next = 0;
  for (auto& [label, index] : remap) index = next++;
  std::vector<int> labels;
  labels.reserve(data.labels.size());
  for (int y : data.labels) labels.push_back(remap.at(y));

  MlpProblem problem(data.features, std::move(labels), remap.size(), hidden,
                     l2);
  RngStream rng(seed);
  const Vector center = problem.glorot_initialization(rng);
  SmoothnessSampling sampling;
  sampling.center = center;
  sampling.scale = 0.5;
  const double estimate =
      estimate_smoothness(problem, smoothness_trials, seed ^ 0x5EEDULL, sampling);
  problem.set_smoothness_estimate(std::max(estimate, 1e-8));
  return problem;
}

}  // namespace ncvr
