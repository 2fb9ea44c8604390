#include "ncvr/certificates/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ncvr/errors.hpp"

namespace ncvr {

double UniversalConstants::nu_bar() const {
  return std::max(2.0 * nu / mu, mu / (2.0 * nu));
}

namespace {

// Double-double accumulator for the affine recursion c <- c (1 + a) + k.
// The product is formed as c + (a c + k) so that 1 + a is never rounded,
// which matters because a is O(n^{-3/2}) for long epochs.
struct Compensated {
  double hi = 0.0;
  double lo = 0.0;

  double value() const { return hi + lo; }

  void affine_step(double a, double k) {
    const double delta = std::fma(a, hi, std::fma(a, lo, k));
    const double sum = hi + delta;
    const double bb = sum - hi;
    const double err = (hi - (sum - bb)) + (delta - bb);
    hi = sum;
    lo += err;
  }
};

struct StepTracker {
  double eta;
  double beta;
  double eta_sq_l;
  double slope;  // eta / beta + 2 eta^2
  double gamma_min = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  bool decreasing = true;

  // Gamma_t from c_{t+1}.
  void observe(std::size_t t, double c_next) {
    const double gamma = eta - c_next * slope - eta_sq_l;
    if (gamma <= gamma_min) {
      gamma_min = gamma;
      argmin = t;
    }
  }
};

double floor_count(double x) {
  // pow() can land a few ulps below an exact integer.
  return std::floor(x * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()));
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ContractViolation(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

RateCertificate compute_c_sequence(double eta, double beta, double smoothness,
                                   std::size_t epoch_length,
                                   std::size_t batch_size,
                                   const CertificateOptions& options) {
  require_positive(eta, "eta");
  require_positive(beta, "beta");
  require_positive(smoothness, "L");
  require(epoch_length >= 1, "epoch length m must be at least 1");
  require(batch_size >= 1, "batch size b must be at least 1");
  require(options.direct_step_limit >= 2, "direct_step_limit must be >= 2");

  const double b = static_cast<double>(batch_size);
  const double l = smoothness;
  const double theta = eta * beta + 2.0 * eta * eta * l * l / b;
  const double increment = eta * eta * l * l * l / b;
  const std::size_t m = epoch_length;

  if (static_cast<double>(m) * std::log1p(theta) >
      std::log(std::numeric_limits<double>::max()) - 1.0) {
    throw NumericError(
        "certificate recursion overflows: (1 + theta)^m is not representable; "
        "use a smaller epoch length m or step size eta");
  }

  RateCertificate cert;
  cert.eta = eta;
  cert.beta = beta;
  cert.smoothness = smoothness;
  cert.epoch_length = m;
  cert.batch_size = batch_size;
  cert.theta = theta;
  cert.sequences_stored = m + 1 <= options.max_stored_length &&
                          m <= options.direct_step_limit;
  if (cert.sequences_stored) {
    cert.c.assign(m + 1, 0.0);
    cert.gamma.assign(m, 0.0);
  }

  StepTracker tracker{eta, beta, eta * eta * l, eta / beta + 2.0 * eta * eta};
  Compensated c;  // c_m = 0
  double c1 = 0.0;

  // One backward step from c_{t+1} to c_t, recording Gamma_t.
  auto single_step = [&](std::size_t t) {
    const double c_next = c.value();
    if (t == 0) c1 = c_next;
    tracker.observe(t, c_next);
    if (cert.sequences_stored) {
      cert.gamma[t] = eta - c_next * tracker.slope - tracker.eta_sq_l;
    }
    c.affine_step(theta, increment);
    if (!(c.value() > c_next)) tracker.decreasing = false;
    if (cert.sequences_stored) cert.c[t] = c.value();
  };

  std::size_t t = m;  // c currently holds c_t
  if (m > options.direct_step_limit) {
    const auto block = static_cast<std::size_t>(
        std::max(2.0, std::floor(std::sqrt(static_cast<double>(m)))));
    // Block map c_{t-B} = c_t (1 + A) + K, built by the one-step recursion.
    Compensated growth;
    Compensated offset;
    for (std::size_t s = 0; s < block; ++s) {
      growth.affine_step(theta, theta);
      offset.affine_step(theta, increment);
    }
    const double a_block = growth.value();
    const double k_block = offset.value();
    // Leave the final stretch (> 0 and <= block steps) for single steps.
    while (t > block) {
      tracker.observe(t - 1, c.value());
      const double before = c.value();
      c.affine_step(a_block, k_block);
      if (!(c.value() > before)) tracker.decreasing = false;
      t -= block;
    }
  }
  while (t > 0) {
    --t;
    single_step(t);
  }

  cert.c0 = c.value();
  if (!std::isfinite(cert.c0)) {
    throw NumericError(
        "certificate recursion overflowed; use a smaller m or eta");
  }
  if (cert.sequences_stored) cert.c[m] = 0.0;
  cert.c1 = c1;
  cert.gamma_n = tracker.gamma_min;
  cert.gamma_argmin = tracker.argmin;
  cert.strictly_decreasing = tracker.decreasing;
  return cert;
}

double closed_form_c0(double eta, double beta, double smoothness,
                      std::size_t epoch_length, std::size_t batch_size) {
  require_positive(eta, "eta");
  require_positive(beta, "beta");
  require_positive(smoothness, "L");
  require(epoch_length >= 1, "epoch length m must be at least 1");
  require(batch_size >= 1, "batch size b must be at least 1");
  const double b = static_cast<double>(batch_size);
  const double l = smoothness;
  const double theta = eta * beta + 2.0 * eta * eta * l * l / b;
  const double growth =
      std::expm1(static_cast<double>(epoch_length) * std::log1p(theta));
  if (!std::isfinite(growth)) {
    throw NumericError("(1 + theta)^m overflows; use a smaller m or eta");
  }
  return (eta * eta * l * l * l / b) * growth / theta;
}

SvrgParameters theoretical_svrg_params(std::size_t n, double smoothness,
                                       double alpha, double mu0) {
  require(n >= 1, "n must be at least 1");
  require_positive(smoothness, "L");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(mu0 > 0.0 && mu0 < 1.0, "mu0 must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  SvrgParameters p;
  p.eta = mu0 / (smoothness * std::pow(nd, alpha));
  p.beta = smoothness / std::pow(nd, alpha / 2.0);
  const double m = floor_count(std::pow(nd, 1.5 * alpha) / (3.0 * mu0));
  if (m < 1.0) {
    throw ContractViolation(
        "theoretical epoch length floor(n^(3 alpha/2) / (3 mu0)) is 0; "
        "use a larger n or a smaller mu0");
  }
  p.epoch_length = static_cast<std::size_t>(m);
  return p;
}

SvrgParameters theoretical_minibatch_params(std::size_t n, double smoothness,
                                            std::size_t batch_size, double mu2) {
  require(n >= 1, "n must be at least 1");
  require_positive(smoothness, "L");
  require(mu2 > 0.0 && mu2 < 1.0, "mu2 must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  const double b = static_cast<double>(batch_size);
  if (batch_size < 1 || !(b < std::cbrt(nd * nd))) {
    throw ContractViolation(
        "mini-batch schedule requires 1 <= b < n^(2/3) (b = " +
        std::to_string(batch_size) + ", n = " + std::to_string(n) + ")");
  }
  SvrgParameters p;
  p.eta = mu2 * b / (smoothness * std::cbrt(nd * nd));
  p.beta = smoothness / std::cbrt(nd);
  const double m = floor_count(nd / (3.0 * b * mu2));
  if (m < 1.0) {
    throw ContractViolation(
        "theoretical epoch length floor(n / (3 b mu2)) is 0; "
        "use a larger n or a smaller mu2");
  }
  p.epoch_length = static_cast<std::size_t>(m);
  return p;
}

double sgd_step_size(double f_gap, double smoothness, double sigma,
                     std::uint64_t horizon) {
  require_positive(f_gap, "f_gap");
  require_positive(smoothness, "L");
  require_positive(sigma, "sigma");
  require(horizon >= 1, "horizon T must be at least 1");
  const double c = std::sqrt(2.0 * f_gap / (smoothness * sigma * sigma));
  return c / std::sqrt(static_cast<double>(horizon));
}

CertificateReport certify_schedule(std::size_t n, double smoothness,
                                   double alpha, std::size_t batch_size,
                                   const UniversalConstants& constants,
                                   const CertificateOptions& options) {
  require(batch_size >= 1, "batch size b must be at least 1");
  SvrgParameters params;
  if (batch_size == 1) {
    params = theoretical_svrg_params(n, smoothness, alpha, constants.mu);
  } else {
    require(std::fabs(alpha - 2.0 / 3.0) < 1e-9,
            "mini-batch schedules are defined for alpha = 2/3 only");
    params =
        theoretical_minibatch_params(n, smoothness, batch_size, constants.mu);
  }
  CertificateReport report;
  report.n = n;
  report.alpha = alpha;
  report.batch_size = batch_size;
  report.mu = constants.mu;
  report.nu = constants.nu;
  report.certificate = compute_c_sequence(params.eta, params.beta, smoothness,
                                          params.epoch_length, batch_size,
                                          options);
  const double nd = static_cast<double>(n);
  report.bound = constants.nu * static_cast<double>(batch_size) /
                 (smoothness * std::pow(nd, alpha));
  report.c0_bound = std::pow(nd, -alpha / 2.0) * constants.mu * smoothness *
                    (std::numbers::e - 1.0);
  return report;
}

std::string CertificateReport::csv_header() {
  return "n,alpha,b,eta,beta,m,gamma_n,bound,valid";
}

std::string CertificateReport::to_csv_row() const {
  std::ostringstream os;
  os << std::setprecision(17) << n << ',' << alpha << ',' << batch_size << ','
     << certificate.eta << ',' << certificate.beta << ','
     << certificate.epoch_length << ',' << certificate.gamma_n << ',' << bound
     << ',' << (meets_bound() ? "true" : "false");
  return os.str();
}

std::string CertificateReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "rate certificate\n"
     << "  n          = " << n << '\n'
     << "  alpha      = " << alpha << '\n'
     << "  b          = " << batch_size << '\n'
     << "  L          = " << certificate.smoothness << '\n'
     << "  mu, nu     = " << mu << ", " << nu << '\n'
     << "  eta        = " << certificate.eta << '\n'
     << "  beta       = " << certificate.beta << '\n'
     << "  m          = " << certificate.epoch_length << '\n'
     << "  theta      = " << certificate.theta << '\n'
     << "  c_0        = " << certificate.c0 << "  (bound " << c0_bound << ")\n"
     << "  gamma_n    = " << certificate.gamma_n << "  (t = "
     << certificate.gamma_argmin << ")\n"
     << "  required   = " << bound << '\n'
     << "  all Gamma_t > 0 : " << (certificate.valid() ? "yes" : "no") << '\n'
     << "  meets bound     : " << (meets_bound() ? "yes" : "no") << '\n';
  return os.str();
}

}  // namespace ncvr
