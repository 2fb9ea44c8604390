#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncvr/certificates/certificate.hpp"
#include "ncvr/errors.hpp"

using namespace ncvr;

TEST(CSequence, SingleStep) {
  const auto c = compute_c_sequence(0.1, 0.1, 1.0, 1);
  EXPECT_NEAR(c.c0, 0.01, 1e-17);
  EXPECT_EQ(c.c1, 0.0);
  ASSERT_TRUE(c.sequences_stored);
  ASSERT_EQ(c.c.size(), 2u);
  EXPECT_EQ(c.c[1], 0.0);
}

TEST(CSequence, TwoSteps) {
  const auto c = compute_c_sequence(0.1, 0.1, 1.0, 2);
  EXPECT_NEAR(c.theta, 0.03, 1e-16);
  EXPECT_NEAR(c.c1, 0.01, 1e-17);
  EXPECT_NEAR(c.c0, 0.0203, 1e-16);
  EXPECT_NEAR(closed_form_c0(0.1, 0.1, 1.0, 2), 0.0203, 1e-16);
  // Gamma_0 = eta - c1 eta / beta - eta^2 L - 2 c1 eta^2
  EXPECT_NEAR(c.gamma[0], 0.1 - 0.01 - 0.01 - 2 * 0.01 * 0.01, 1e-16);
  EXPECT_NEAR(c.gamma[1], 0.1 - 0.01, 1e-16);
}

TEST(CSequence, ClosedFormAgreementUpToTenThousand) {
  for (std::size_t m : {1u, 2u, 7u, 100u, 1333u, 10000u}) {
    for (std::size_t b : {1u, 4u}) {
      const double eta = 0.0025 * static_cast<double>(b);
      const auto c = compute_c_sequence(eta, 0.1, 1.0, m, b);
      const double closed = closed_form_c0(eta, 0.1, 1.0, m, b);
      EXPECT_LE(std::fabs(c.c0 - closed), 1e-12 * closed) << "m=" << m << " b=" << b;
    }
  }
}

TEST(CSequence, StrictlyDecreasingAndGammaMinimum) {
  const auto c = compute_c_sequence(0.01, 0.2, 1.5, 500);
  ASSERT_TRUE(c.sequences_stored);
  EXPECT_EQ(c.c.back(), 0.0);
  EXPECT_TRUE(c.strictly_decreasing);
  for (std::size_t t = 0; t + 1 < c.c.size(); ++t) EXPECT_GT(c.c[t], c.c[t + 1]);
  double mn = c.gamma[0];
  for (double g : c.gamma) mn = std::min(mn, g);
  EXPECT_EQ(c.gamma_n, mn);
  EXPECT_EQ(c.gamma_argmin, 0u);
}

TEST(CSequence, InvalidWhenStepTooLarge) {
  const auto c = compute_c_sequence(1.0, 1.0, 1.0, 10);
  EXPECT_FALSE(c.valid());
}

TEST(CSequence, RejectsBadInputs) {
  EXPECT_THROW(compute_c_sequence(0.0, 0.1, 1.0, 2), ContractViolation);
  EXPECT_THROW(compute_c_sequence(0.1, -0.1, 1.0, 2), ContractViolation);
  EXPECT_THROW(compute_c_sequence(0.1, 0.1, 0.0, 2), ContractViolation);
  EXPECT_THROW(compute_c_sequence(0.1, 0.1, 1.0, 0), ContractViolation);
  EXPECT_THROW(compute_c_sequence(0.1, 0.1, 1.0, 2, 0), ContractViolation);
}

TEST(CSequence, OverflowIsNumericError) {
  EXPECT_THROW(compute_c_sequence(1.0, 1.0, 1.0, 1'000'000), NumericError);
}

TEST(CSequence, BlockedPathMatchesClosedForm) {
  CertificateOptions small;
  small.direct_step_limit = 1000;
  const auto p = theoretical_svrg_params(100000, 1.0, 1.0, 0.25);
  const auto blocked = compute_c_sequence(p.eta, p.beta, 1.0, p.epoch_length, 1, small);
  const auto direct = compute_c_sequence(p.eta, p.beta, 1.0, p.epoch_length, 1);
  const double closed = closed_form_c0(p.eta, p.beta, 1.0, p.epoch_length);
  EXPECT_LE(std::fabs(blocked.c0 - closed), 1e-12 * closed);
  EXPECT_LE(std::fabs(blocked.c1 - direct.c1), 1e-12 * direct.c1);
  EXPECT_LE(std::fabs(blocked.gamma_n - direct.gamma_n), 1e-12 * direct.gamma_n);
  EXPECT_FALSE(blocked.sequences_stored);
}

TEST(TheoreticalParams, SingleSampleExample) {
  const auto p = theoretical_svrg_params(1000, 1.0, 2.0 / 3.0, 0.25);
  EXPECT_NEAR(p.eta, 0.0025, 1e-15);
  EXPECT_NEAR(p.beta, 0.1, 1e-15);
  EXPECT_EQ(p.epoch_length, 1333u);
}

TEST(TheoreticalParams, SingleComponent) {
  for (double alpha : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
    EXPECT_EQ(theoretical_svrg_params(1, 1.0, alpha, 0.25).epoch_length, 1u);
  }
}

TEST(TheoreticalParams, ZeroEpochIsContractViolation) {
  EXPECT_THROW(theoretical_svrg_params(1, 1.0, 1.0, 0.5), ContractViolation);
}

TEST(TheoreticalParams, MiniBatchExample) {
  const auto p = theoretical_minibatch_params(1000, 1.0, 4, 0.25);
  EXPECT_NEAR(p.eta, 0.01, 1e-15);
  EXPECT_EQ(p.epoch_length, 333u);
}

TEST(TheoreticalParams, MiniBatchOfOneMatchesSingleSample) {
  for (std::size_t n : {10u, 1000u, 54321u}) {
    const auto a = theoretical_minibatch_params(n, 2.0, 1, 0.25);
    const auto b = theoretical_svrg_params(n, 2.0, 2.0 / 3.0, 0.25);
    EXPECT_NEAR(a.eta, b.eta, 1e-15 * b.eta);
    EXPECT_NEAR(a.beta, b.beta, 1e-15 * b.beta);
    EXPECT_EQ(a.epoch_length, b.epoch_length);
  }
}

TEST(TheoreticalParams, MiniBatchPreconditionEnforced) {
  // 1000^(2/3) = 100.
  EXPECT_THROW(theoretical_minibatch_params(1000, 1.0, 100, 0.25), ContractViolation);
  EXPECT_NO_THROW(theoretical_minibatch_params(1000, 1.0, 99, 0.25));
}

TEST(TheoreticalParams, MiniBatchCertificatesPositive) {
  for (std::size_t b : {1u, 2u, 4u, 8u, 16u}) {
    const auto report = certify_schedule(10000, 1.0, 2.0 / 3.0, b);
    EXPECT_TRUE(report.certificate.valid()) << "b=" << b;
    EXPECT_TRUE(report.meets_bound()) << "b=" << b;
    EXPECT_LE(report.certificate.c0, report.c0_bound) << "b=" << b;
    const double closed = closed_form_c0(report.certificate.eta, report.certificate.beta, 1.0,
                                         report.certificate.epoch_length, b);
    EXPECT_LE(std::fabs(report.certificate.c0 - closed), 1e-12 * closed);
  }
}

TEST(TheoreticalParams, GridMeetsProofConstants) {
  for (double n : {10.0, 1e2, 1e3, 1e4, 1e5}) {
    for (double alpha : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
      const auto r = certify_schedule(static_cast<std::size_t>(n), 1.0, alpha, 1);
      EXPECT_TRUE(r.meets_bound()) << n << " " << alpha;
      EXPECT_GE(r.certificate.gamma_n, (1.0 / 40.0) / std::pow(n, alpha));
      EXPECT_LE(r.certificate.c0, std::pow(n, -alpha / 2.0) * 0.25 * (std::exp(1.0) - 1.0));
    }
  }
}

TEST(TheoreticalParams, MiniBatchRejectsOtherAlpha) {
  EXPECT_THROW(certify_schedule(1000, 1.0, 0.5, 4), ContractViolation);
}

TEST(SgdStep, Example) {
  EXPECT_DOUBLE_EQ(sgd_step_size(2.0, 1.0, 2.0, 4), 0.5);
}

TEST(SgdStep, DecreasesInSigma) {
  double previous = sgd_step_size(1.0, 1.0, 0.1, 100);
  for (double sigma : {1.0, 10.0, 100.0, 1e4}) {
    const double eta = sgd_step_size(1.0, 1.0, sigma, 100);
    EXPECT_LT(eta, previous);
    previous = eta;
  }
}

TEST(SgdStep, RejectsNonPositive) {
  EXPECT_THROW(sgd_step_size(0.0, 1.0, 1.0, 4), ContractViolation);
  EXPECT_THROW(sgd_step_size(1.0, 0.0, 1.0, 4), ContractViolation);
  EXPECT_THROW(sgd_step_size(1.0, 1.0, -1.0, 4), ContractViolation);
  EXPECT_THROW(sgd_step_size(1.0, 1.0, 1.0, 0), ContractViolation);
}

TEST(Constants, NuBar) {
  UniversalConstants c;
  EXPECT_DOUBLE_EQ(c.nu_bar(), 5.0);
}

TEST(Report, CsvRowMatchesHeader) {
  const auto r = certify_schedule(1000, 1.0, 2.0 / 3.0, 1);
  EXPECT_EQ(CertificateReport::csv_header(), "n,alpha,b,eta,beta,m,gamma_n,bound,valid");
  const std::string row = r.to_csv_row();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8);
  EXPECT_EQ(row.substr(0, 5), "1000,");
  EXPECT_NE(row.find(",1333,"), std::string::npos);
  EXPECT_EQ(row.substr(row.size() - 4), "true");
  EXPECT_NE(r.to_text().find("gamma_n"), std::string::npos);
}
