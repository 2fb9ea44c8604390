#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ncvr {

/// The constants the convergence proofs leave as "universal": mu scales the
/// step size (eta = mu / (L n^alpha)) and nu lower-bounds the certificate
/// (gamma_n >= nu / (L n^alpha)). The default instantiation mu = 1/4,
/// nu = 1/40 is the one the nonconvex SVRG rate proof works out explicitly.
struct UniversalConstants {
  double mu = 0.25;
  double nu = 1.0 / 40.0;

  /// max{2 nu / mu, mu / (2 nu)}, the constant in the MSVRG bound.
  double nu_bar() const;
};

/// Backward recursion behind the nonconvex SVRG rate:
///
///   c_m = 0,  c_t = c_{t+1} (1 + theta) + eta^2 L^3 / b,
///   theta = eta beta + 2 eta^2 L^2 / b,
///   Gamma_t = eta - c_{t+1} eta / beta - eta^2 L - 2 c_{t+1} eta^2,
///   gamma_n = min_t Gamma_t.
///
/// b = 1 gives the single-sample recursion; b > 1 the mini-batch one.
struct RateCertificate {
  double eta = 0.0;
  double beta = 0.0;
  double smoothness = 0.0;
  std::size_t epoch_length = 0;
  std::size_t batch_size = 1;
  double theta = 0.0;

  double c0 = 0.0;
  /// c_1, the coefficient that enters Gamma_0 (0 when m == 1).
  double c1 = 0.0;
  /// c_0 ... c_m and Gamma_0 ... Gamma_{m-1}; empty when the epoch is too
  /// long to store (see sequences_stored).
  std::vector<double> c;
  std::vector<double> gamma;
  bool sequences_stored = false;

  double gamma_n = 0.0;
  std::size_t gamma_argmin = 0;
  /// Every evaluated step satisfied c_t > c_{t+1}.
  bool strictly_decreasing = true;

  /// All Gamma_t > 0.
  bool valid() const { return gamma_n > 0.0; }
};

struct CertificateOptions {
  /// Longest epoch for which c and gamma are returned in full.
  std::size_t max_stored_length = std::size_t{1} << 20;
  /// Longest epoch evaluated one step at a time. Longer epochs apply the
  /// recursion in blocks: the B-step affine map is itself produced by running
  /// the one-step recursion B times, then applied ~m/B times, and the last
  /// block before t = 0 is again stepped one at a time so c_1 and Gamma_0 are
  /// exact. Gamma is then tracked at block boundaries and on the final block;
  /// since c_t decreases in t the minimum sits at t = 0 either way.
  std::size_t direct_step_limit = std::size_t{1} << 26;
};

/// Runs the recursion with compensated (double-double) accumulation. Throws
/// ContractViolation on nonpositive inputs and NumericError when
/// (1 + theta)^m overflows.
RateCertificate compute_c_sequence(double eta, double beta, double smoothness,
                                   std::size_t epoch_length,
                                   std::size_t batch_size = 1,
                                   const CertificateOptions& options = {});

/// c_0 = (eta^2 L^3 / b) ((1 + theta)^m - 1) / theta, with (1 + theta)^m - 1
/// evaluated as expm1(m log1p(theta)).
double closed_form_c0(double eta, double beta, double smoothness,
                      std::size_t epoch_length, std::size_t batch_size = 1);

struct SvrgParameters {
  double eta = 0.0;
  double beta = 0.0;
  std::size_t epoch_length = 0;
};

/// eta = mu0 / (L n^alpha), beta = L / n^(alpha/2), m = floor(n^(3 alpha/2) / (3 mu0)).
SvrgParameters theoretical_svrg_params(std::size_t n, double smoothness,
                                       double alpha, double mu0);

/// eta = mu2 b / (L n^(2/3)), beta = L / n^(1/3), m = floor(n / (3 b mu2)).
/// Requires 1 <= b < n^(2/3).
SvrgParameters theoretical_minibatch_params(std::size_t n, double smoothness,
                                            std::size_t batch_size, double mu2);

/// Constant SGD step c / sqrt(T) with c = sqrt(2 f_gap / (L sigma^2)).
double sgd_step_size(double f_gap, double smoothness, double sigma,
                     std::uint64_t horizon);

/// A certificate evaluated for a theoretical schedule together with the
/// lower bound gamma_n >= nu b / (L n^alpha) it is expected to meet.
struct CertificateReport {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t batch_size = 1;
  double mu = 0.0;
  double nu = 0.0;
  RateCertificate certificate;
  double bound = 0.0;
  /// c_0 upper bound n^(-alpha/2) mu L (e - 1).
  double c0_bound = 0.0;

  bool meets_bound() const {
    return certificate.valid() && certificate.gamma_n >= bound;
  }
  std::string to_text() const;
  std::string to_csv_row() const;
  static std::string csv_header();
};

/// b == 1: single-sample schedule for any alpha in (0, 1].
/// b > 1: mini-batch schedule; alpha must be 2/3.
CertificateReport certify_schedule(std::size_t n, double smoothness,
                                   double alpha, std::size_t batch_size,
                                   const UniversalConstants& constants = {},
                                   const CertificateOptions& options = {});

}  // namespace ncvr
