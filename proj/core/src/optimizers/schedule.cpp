#include "ncvr/optimizers/schedule.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "ncvr/certificates/certificate.hpp"
#include "ncvr/errors.hpp"

namespace ncvr {

StepSizes StepSizes::constant(double eta) {
  require(eta > 0.0 && std::isfinite(eta), "step size must be positive");
  StepSizes s;
  s.kind_ = Kind::kConstant;
  s.eta0_ = eta;
  std::ostringstream os;
  os << std::setprecision(17) << "constant(" << eta << ")";
  s.label_ = os.str();
  return s;
}

StepSizes StepSizes::inverse_sqrt_horizon(double f_gap, double smoothness,
                                          double sigma, std::uint64_t horizon) {
  StepSizes s = constant(sgd_step_size(f_gap, smoothness, sigma, horizon));
  std::ostringstream os;
  os << std::setprecision(17) << "c/sqrt(T)(eta=" << s.eta0_ << ",T=" << horizon
     << ")";
  s.label_ = os.str();
  return s;
}

StepSizes StepSizes::t_inverse(double eta0, double decay, std::size_t n) {
  require(eta0 > 0.0 && std::isfinite(eta0), "eta0 must be positive");
  require(decay >= 0.0, "t-inverse decay must be nonnegative");
  require(n >= 1, "t-inverse period n must be at least 1");
  StepSizes s;
  s.kind_ = Kind::kTInverse;
  s.eta0_ = eta0;
  s.decay_ = decay;
  s.period_ = n;
  std::ostringstream os;
  os << std::setprecision(17) << "t-inverse(eta0=" << eta0 << ",decay=" << decay
     << ",n=" << n << ")";
  s.label_ = os.str();
  return s;
}

StepSizes StepSizes::sequence(std::vector<double> steps) {
  require(!steps.empty(), "step size sequence must not be empty");
  for (double eta : steps) {
    require(eta > 0.0 && std::isfinite(eta), "step sizes must be positive");
  }
  StepSizes s;
  s.kind_ = Kind::kSequence;
  s.steps_ = std::move(steps);
  s.label_ = "sequence(" + std::to_string(s.steps_.size()) + ")";
  return s;
}

double StepSizes::operator()(std::uint64_t t) const {
  switch (kind_) {
    case Kind::kConstant:
      return eta0_;
    case Kind::kTInverse:
      return eta0_ / (1.0 + decay_ * static_cast<double>(t / period_));
    case Kind::kSequence:
      return t < steps_.size() ? steps_[t] : steps_.back();
  }
  return eta0_;
}

std::string StepSizes::describe() const { return label_; }

SvrgSchedule SvrgSchedule::constant(double eta, std::size_t epoch_length,
                                    std::uint64_t total_inner_iterations,
                                    SnapshotRule rule, std::size_t batch_size) {
  SvrgSchedule s;
  s.step_sizes = {eta};
  s.epoch_length = epoch_length;
  s.total_inner_iterations = total_inner_iterations;
  s.snapshot = rule;
  s.batch_size = batch_size;
  s.validate();
  return s;
}

std::uint64_t SvrgSchedule::epochs() const {
  return (total_inner_iterations + epoch_length - 1) / epoch_length;
}

double SvrgSchedule::step(std::size_t t) const {
  return step_sizes.size() == 1 ? step_sizes.front() : step_sizes[t];
}

std::vector<double> SvrgSchedule::weights() const {
  std::vector<double> p(epoch_length + 1, 0.0);
  switch (snapshot) {
    case SnapshotRule::kLastIterate:
      p[epoch_length] = 1.0;
      break;
    case SnapshotRule::kUniformAverage:
      for (std::size_t i = 0; i < epoch_length; ++i) {
        p[i] = 1.0 / static_cast<double>(epoch_length);
      }
      break;
    case SnapshotRule::kCustom:
      p = snapshot_weights;
      break;
  }
  return p;
}

void SvrgSchedule::validate() const {
  require(epoch_length >= 1, "SVRG epoch length m must be at least 1");
  require(total_inner_iterations >= 1, "SVRG horizon T must be at least 1");
  require(batch_size >= 1, "SVRG batch size b must be at least 1");
  require(step_sizes.size() == 1 || step_sizes.size() == epoch_length,
          "SVRG step sizes: need one entry or exactly m entries");
  for (double eta : step_sizes) {
    require(eta > 0.0 && std::isfinite(eta), "SVRG step sizes must be positive");
  }
  if (snapshot == SnapshotRule::kCustom) {
    require(snapshot_weights.size() == epoch_length + 1,
            "custom snapshot distribution needs m + 1 weights");
    double total = 0.0;
    for (double p : snapshot_weights) {
      require(p >= 0.0 && std::isfinite(p),
              "snapshot probabilities must be nonnegative");
      total += p;
    }
    require(std::fabs(total - 1.0) <= 1e-12,
            "snapshot probabilities must sum to 1");
  }
}

std::string SvrgSchedule::describe() const {
  std::ostringstream os;
  os << std::setprecision(17) << "svrg(eta=";
  if (step_sizes.size() == 1) {
    os << step_sizes.front();
  } else {
    os << "per-step[" << step_sizes.size() << "]";
  }
  os << ",m=" << epoch_length << ",T=" << total_inner_iterations
     << ",b=" << batch_size << ",snapshot=";
  switch (snapshot) {
    case SnapshotRule::kLastIterate: os << "last"; break;
    case SnapshotRule::kUniformAverage: os << "uniform"; break;
    case SnapshotRule::kCustom: os << "custom"; break;
  }
  if (full_batch) os << ",full-batch";
  os << ")";
  return os.str();
}

}  // namespace ncvr
