#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncvr/errors.hpp"
#include "ncvr/optimizers/optimizers.hpp"
#include "support.hpp"

using namespace ncvr;
using ncvr::testing::random_vector;
using ncvr::testing::scalar;
using ncvr::testing::scaled_identity;

namespace {

std::vector<Vector> trajectory(const std::function<RunRecord(const RunOptions&)>& run,
                               RunOptions options = {}) {
  std::vector<Vector> out;
  options.observer = [&](const IterateEvent& e) { out.push_back(e.iterate); };
  run(options);
  return out;
}

void expect_same_record(const RunRecord& a, const RunRecord& b) {
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.final_iterate, b.final_iterate);
  EXPECT_EQ(a.ifo_calls, b.ifo_calls);
  EXPECT_EQ(a.updates, b.updates);
  EXPECT_EQ(a.output_position, b.output_position);
  ASSERT_EQ(a.checkpoints.size(), b.checkpoints.size());
  for (std::size_t k = 0; k < a.checkpoints.size(); ++k) {
    EXPECT_EQ(a.checkpoints[k].ifo_count, b.checkpoints[k].ifo_count);
    EXPECT_EQ(a.checkpoints[k].f_value, b.checkpoints[k].f_value);
    EXPECT_EQ(a.checkpoints[k].grad_norm_sq, b.checkpoints[k].grad_norm_sq);
  }
}

}  // namespace

TEST(Sgd, IdenticalComponentsSingleStep) {
  const auto q = scaled_identity({1.0, 1.0, 1.0});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Oracle oracle(q);
    const auto r = run_sgd(oracle, scalar(1.0), 1, StepSizes::constant(0.1), seed);
    EXPECT_DOUBLE_EQ(r.output[0], 0.9);
    EXPECT_EQ(r.ifo_calls, 1u);
  }
}

TEST(Sgd, ExactlyTIfoCalls) {
  const auto p = ncvr::testing::small_logistic(30, 4);
  Oracle oracle(p);
  const auto r = run_sgd(oracle, Vector::Zero(4), 1234, StepSizes::constant(0.05), 9);
  EXPECT_EQ(oracle.ifo_calls(), 1234u);
  EXPECT_EQ(r.ifo_calls, 1234u);
  EXPECT_EQ(r.updates, 1234u);
  Oracle batched(p);
  run_sgd(batched, Vector::Zero(4), 100, StepSizes::constant(0.05), 9, {}, 5);
  EXPECT_EQ(batched.ifo_calls(), 500u);
}

TEST(Sgd, ReplaysIndexSequence) {
  const auto q = scaled_identity({1.0, 4.0}, 1, {0.5, -1.0});
  const double eta = 0.1;
  Oracle oracle(q);
  const auto r = run_sgd(oracle, scalar(2.0), 50, StepSizes::constant(eta), 77);
  RngStream rng(77);
  double x = 2.0;
  const double a[2] = {1.0, 4.0};
  const double b[2] = {0.5, -1.0};
  for (int t = 0; t < 50; ++t) {
    const auto i = rng.uniform_index(2);
    x = x - eta * (a[i] * x - b[i]);
  }
  EXPECT_EQ(r.output[0], x);
}

TEST(Sgd, InverseSqrtHorizonStep) {
  const auto s = StepSizes::inverse_sqrt_horizon(2.0, 1.0, 2.0, 4);
  EXPECT_DOUBLE_EQ(s(0), 0.5);
  EXPECT_DOUBLE_EQ(s(3), 0.5);
  EXPECT_DOUBLE_EQ(s(0), sgd_step_size(2.0, 1.0, 2.0, 4));
}

TEST(Sgd, TInverseSchedule) {
  const auto s = StepSizes::t_inverse(1.0, 0.5, 10);
  EXPECT_DOUBLE_EQ(s(0), 1.0);
  EXPECT_DOUBLE_EQ(s(9), 1.0);
  EXPECT_DOUBLE_EQ(s(10), 1.0 / 1.5);
  EXPECT_DOUBLE_EQ(s(25), 1.0 / 2.0);
}

TEST(Sgd, CheckpointsOncePerPassWithRunningMinimum) {
  const auto p = ncvr::testing::small_logistic(20, 3);
  Oracle oracle(p);
  const auto r = run_sgd(oracle, Vector::Zero(3), 100, StepSizes::constant(0.5), 1);
  ASSERT_EQ(r.checkpoints.size(), 6u);
  for (std::size_t k = 1; k < r.checkpoints.size(); ++k) {
    EXPECT_GT(r.checkpoints[k].ifo_count, r.checkpoints[k - 1].ifo_count);
    EXPECT_LE(r.checkpoints[k].min_grad_norm_sq, r.checkpoints[k - 1].min_grad_norm_sq);
    EXPECT_GE(r.checkpoints[k].grad_norm_sq, 0.0);
  }
}

TEST(Sgd, DivergenceAbortsWithPartialRecord) {
  const auto q = scaled_identity({1.0, 1.0});
  Oracle oracle(q);
  const auto r = run_sgd(oracle, scalar(1.0), 1000, StepSizes::constant(5.0), 1);
  EXPECT_EQ(r.status, RunStatus::kDiverged);
  ASSERT_TRUE(r.diverged_at.has_value());
  EXPECT_LT(*r.diverged_at, 1000u);
  EXPECT_EQ(r.updates, *r.diverged_at);  // zero-based index of the rejected update
  EXPECT_TRUE(all_finite(r.output));
  EXPECT_LE(r.output.norm(), 1e12);
}

TEST(Gd, NewtonStepOnUnitQuadratic) {
  const auto q = scaled_identity({1.0});
  Oracle oracle(q);
  const auto r = run_gd(oracle, scalar(5.0), 1, 1.0);
  EXPECT_EQ(r.output[0], 0.0);
  EXPECT_EQ(oracle.ifo_calls(), 1u);
}

TEST(Gd, MonotoneOnConvexQuadratic) {
  const auto q = make_quadratic(20, 5, 0.1, 2);
  Oracle oracle(q);
  RngStream rng(1);
  const auto r = run_gd(oracle, random_vector(rng, 5), 100, 1.0 / q.smoothness());
  EXPECT_EQ(oracle.ifo_calls(), 2000u);
  for (std::size_t k = 1; k < r.checkpoints.size(); ++k) {
    EXPECT_LE(r.checkpoints[k].f_value, r.checkpoints[k - 1].f_value + 1e-15);
  }
}

TEST(Svrg, EpochLengthOneEqualsGradientDescent) {
  const auto q = make_quadratic(15, 4, 0.1, 3);
  RngStream rng(2);
  const Vector x0 = random_vector(rng, 4);
  const double eta = 0.5;
  const auto gd = trajectory([&](const RunOptions& o) {
    Oracle oracle(q);
    return run_gd(oracle, x0, 100, eta, o);
  });
  const auto svrg = trajectory([&](const RunOptions& o) {
    Oracle oracle(q);
    return run_svrg(oracle, x0, SvrgSchedule::constant(eta, 1, 100), 5, o);
  });
  ASSERT_EQ(gd.size(), 100u);
  ASSERT_EQ(svrg.size(), 100u);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_LE((gd[k] - svrg[k]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Svrg, FirstInnerDirectionIsFullGradient) {
  const auto p = ncvr::testing::small_logistic(10, 3);
  const Vector x0 = Vector::Constant(3, 0.3);
  const double eta = 0.1;
  std::vector<Vector> iterates;
  RunOptions o;
  o.observer = [&](const IterateEvent& e) {
    if (e.step == 0) iterates.push_back(e.iterate);
  };
  Oracle oracle(p);
  run_svrg(oracle, x0, SvrgSchedule::constant(eta, 4, 4), 3, o);
  ASSERT_EQ(iterates.size(), 1u);
  const Vector expected = x0 - eta * mean_gradient(p, x0);
  EXPECT_EQ(iterates[0], expected);
}

TEST(Svrg, ReplaysIndexSequenceOnScalarQuadratic) {
  const auto q = scaled_identity({1.0, 2.0, 5.0}, 1, {1.0, 0.0, -2.0});
  const double eta = 0.05;
  const std::uint64_t seed = 13;
  Oracle oracle(q);
  const auto r = run_svrg(oracle, scalar(3.0), SvrgSchedule::constant(eta, 2, 2), seed);

  const double a[3] = {1.0, 2.0, 5.0};
  const double b[3] = {1.0, 0.0, -2.0};
  auto grad = [&](std::size_t i, double x) { return a[i] * x - b[i]; };
  RngStream rng(seed);
  const auto position = rng.uniform_index(2);
  const double snap = 3.0;
  const double g = (grad(0, snap) + grad(1, snap) + grad(2, snap)) / 3.0;
  double x = snap;
  double xa = x;
  for (std::size_t t = 0; t < 2; ++t) {
    if (t == position) xa = x;
    const auto i = rng.uniform_index(3);
    x = x - eta * ((grad(i, x) - grad(i, snap)) / 1.0 + g);
  }
  EXPECT_EQ(r.final_iterate[0], x);
  EXPECT_EQ(r.output[0], xa);
  EXPECT_EQ(r.output_position->second, position);
}

TEST(Svrg, IfoAccountingPerEpoch) {
  const auto p = ncvr::testing::small_logistic(40, 3);
  for (std::size_t b : {1u, 3u}) {
    Oracle oracle(p);
    const auto sched = SvrgSchedule::constant(0.05, 7, 30, SnapshotRule::kLastIterate, b);
    const auto r = run_minibatch_svrg(oracle, Vector::Zero(3), sched, 4);
    const std::uint64_t S = 5;  // ceil(30 / 7)
    EXPECT_EQ(sched.epochs(), S);
    EXPECT_EQ(oracle.ifo_calls(), S * (40 + 7 * 2 * b));
    EXPECT_EQ(r.updates, S * 7);
    EXPECT_EQ(r.checkpoints.size(), S + 1);
    EXPECT_DOUBLE_EQ(r.checkpoints.back().effective_passes,
                     static_cast<double>(S * (40 + 14 * b)) / 40.0);
  }
}

TEST(Svrg, HorizonShorterThanEpochRunsOneEpoch) {
  const auto p = ncvr::testing::small_logistic(10, 2);
  Oracle oracle(p);
  const auto r = run_svrg(oracle, Vector::Zero(2), SvrgSchedule::constant(0.05, 8, 3), 1);
  EXPECT_EQ(r.updates, 8u);
}

TEST(Svrg, MiniBatchOfOneIsBitIdentical) {
  const auto p = ncvr::testing::small_logistic(25, 4);
  const auto sched = SvrgSchedule::constant(0.05, 10, 50);
  Oracle a(p), b(p);
  const Vector x0 = Vector::Constant(4, 0.2);
  expect_same_record(run_svrg(a, x0, sched, 21), run_minibatch_svrg(b, x0, sched, 21));
}

TEST(Svrg, FullBatchDirectionIsExactGradient) {
  const auto p = ncvr::testing::small_logistic(6, 3);
  auto sched = SvrgSchedule::constant(0.1, 3, 3);
  sched.full_batch = true;
  const Vector x0 = Vector::Constant(3, 0.5);
  std::vector<Vector> iterates{x0};
  RunOptions o;
  o.observer = [&](const IterateEvent& e) { iterates.push_back(e.iterate); };
  Oracle oracle(p);
  run_minibatch_svrg(oracle, x0, sched, 1, o);
  EXPECT_EQ(oracle.ifo_calls(), 6u + 3u * 12u);
  for (std::size_t t = 0; t + 1 < iterates.size(); ++t) {
    const Vector expected = iterates[t] - 0.1 * mean_gradient(p, iterates[t]);
    EXPECT_LE((iterates[t + 1] - expected).norm(), 1e-14);
  }
}

TEST(Svrg, RejectsBatchedScheduleInSingleSampleEntry) {
  const auto p = ncvr::testing::small_logistic(6, 3);
  Oracle oracle(p);
  EXPECT_THROW(run_svrg(oracle, Vector::Zero(3),
                        SvrgSchedule::constant(0.1, 3, 3, SnapshotRule::kLastIterate, 2), 1),
               ContractViolation);
}

TEST(Svrg, Deterministic) {
  const auto p = ncvr::testing::small_logistic(30, 5);
  const auto sched = SvrgSchedule::constant(0.05, 9, 45);
  Oracle a(p), b(p);
  expect_same_record(run_svrg(a, Vector::Zero(5), sched, 3), run_svrg(b, Vector::Zero(5), sched, 3));
}

TEST(Svrg, CheckpointsDoNotPerturbIterates) {
  const auto p = ncvr::testing::small_logistic(30, 5);
  const auto sched = SvrgSchedule::constant(0.05, 9, 45);
  RunOptions none;
  none.checkpoints.enabled = false;
  RunOptions dense;
  dense.checkpoints.every_updates = 1;
  const auto run = [&](const RunOptions& o) {
    Oracle oracle(p);
    return run_svrg(oracle, Vector::Zero(5), sched, 3, o);
  };
  EXPECT_EQ(trajectory(run, none), trajectory(run, dense));
  Oracle with(p), without(p);
  run_svrg(with, Vector::Zero(5), sched, 3, dense);
  run_svrg(without, Vector::Zero(5), sched, 3, none);
  EXPECT_EQ(with.ifo_calls(), without.ifo_calls());
}

TEST(Svrg, OutputIndexIsUniformOverInnerIterates) {
  const auto q = scaled_identity({1.0});
  const auto sched = SvrgSchedule::constant(0.1, 3, 6);
  std::vector<int> counts(6, 0);
  const int runs = 6000;
  for (int s = 0; s < runs; ++s) {
    Oracle oracle(q);
    RunOptions o;
    o.checkpoints.enabled = false;
    const auto r = run_svrg(oracle, scalar(1.0), sched, static_cast<std::uint64_t>(s), o);
    ++counts[r.output_position->first * 3 + r.output_position->second];
  }
  for (int c : counts) EXPECT_NEAR(c, runs / 6.0, 5.0 * std::sqrt(runs / 6.0));
}

TEST(Svrg, OutputIsTheDrawnIterate) {
  const auto p = ncvr::testing::small_logistic(12, 3);
  const auto sched = SvrgSchedule::constant(0.05, 4, 12);
  const Vector x0 = Vector::Constant(3, 0.7);
  std::vector<Vector> inner;
  Vector current = x0;
  RunOptions o;
  o.observer = [&](const IterateEvent& e) {
    inner.push_back(current);  // x_t before the update
    current = e.iterate;
  };
  Oracle oracle(p);
  const auto r = run_svrg(oracle, x0, sched, 8, o);
  const auto [s, t] = *r.output_position;
  EXPECT_EQ(r.output, inner[s * 4 + t]);
}

TEST(Svrg, UniformAverageSnapshot) {
  const auto p = ncvr::testing::small_logistic(12, 3);
  const auto sched = SvrgSchedule::constant(0.05, 4, 4, SnapshotRule::kUniformAverage);
  const Vector x0 = Vector::Constant(3, 0.7);
  std::vector<Vector> xs{x0};
  RunOptions o;
  o.observer = [&](const IterateEvent& e) { xs.push_back(e.iterate); };
  Oracle oracle(p);
  const auto r = run_svrg(oracle, x0, sched, 8, o);
  Vector avg = Vector::Zero(3);
  for (int i = 0; i < 4; ++i) avg += xs[i] / 4.0;
  EXPECT_LE((r.final_iterate - avg).norm(), 1e-15);
}

TEST(Schedule, Validation) {
  auto s = SvrgSchedule::constant(0.1, 3, 9);
  s.snapshot = SnapshotRule::kCustom;
  s.snapshot_weights = {0.5, 0.0, 0.0, 0.4};
  EXPECT_THROW(s.validate(), ContractViolation);
  s.snapshot_weights = {0.5, 0.0, 0.0, 0.5};
  EXPECT_NO_THROW(s.validate());
  s.snapshot_weights = {-0.5, 0.0, 0.0, 1.5};
  EXPECT_THROW(s.validate(), ContractViolation);
  EXPECT_THROW(SvrgSchedule::constant(0.0, 3, 9), ContractViolation);
  EXPECT_THROW(SvrgSchedule::constant(0.1, 0, 9), ContractViolation);
  const auto last = SvrgSchedule::constant(0.1, 3, 9).weights();
  EXPECT_EQ(last, (std::vector<double>{0.0, 0.0, 0.0, 1.0}));
  const auto avg = SvrgSchedule::constant(0.1, 4, 8, SnapshotRule::kUniformAverage).weights();
  EXPECT_EQ(avg, (std::vector<double>{0.25, 0.25, 0.25, 0.25, 0.0}));
}

TEST(GdSvrg, TheoreticalHorizon) {
  const auto s = theoretical_gd_svrg_schedule(100, 1.0, 10.0);
  // 2 * 10 * 100^(2/3) * 40 = 17235.48...
  EXPECT_EQ(s.total_inner_iterations, 17236u);
  EXPECT_EQ(s.epoch_length, 133u);
  EXPECT_NEAR(s.step_sizes[0], 0.25 / std::cbrt(10000.0), 1e-15);
}

TEST(GdSvrg, SingleOuterIterationEqualsSvrg) {
  const auto p = ncvr::testing::small_logistic(20, 3);
  const auto inner = SvrgSchedule::constant(0.05, 5, 20);
  GdSvrgConfig cfg;
  cfg.outer_iterations = 1;
  cfg.inner = inner;
  Oracle a(p), b(p);
  const auto g = run_gd_svrg(a, Vector::Zero(3), cfg, 4);
  const auto s = run_svrg(b, Vector::Zero(3), inner, 4);
  EXPECT_EQ(g.output, s.output);
  EXPECT_EQ(a.ifo_calls(), b.ifo_calls());
  ASSERT_EQ(g.outer_iterates.size(), 2u);
  EXPECT_EQ(g.outer_iterates[1], s.output);
}

TEST(GdSvrg, OuterIteratesChainThroughOneStream) {
  const auto p = ncvr::testing::small_logistic(20, 3);
  const auto inner = SvrgSchedule::constant(0.05, 5, 10);
  GdSvrgConfig cfg;
  cfg.outer_iterations = 3;
  cfg.inner = inner;
  Oracle a(p);
  const auto g = run_gd_svrg(a, Vector::Zero(3), cfg, 4);
  RngStream rng(4);
  Vector x = Vector::Zero(3);
  for (int k = 0; k < 3; ++k) {
    Oracle o(p);
    x = run_svrg(o, x, inner, rng).output;
    EXPECT_EQ(g.outer_iterates[k + 1], x);
  }
  EXPECT_EQ(g.checkpoints.size(), 4u);
}

TEST(GdSvrg, WarnsBelowDominancePrecondition) {
  const auto q = make_quadratic(1000, 3, 0.5, 1);  // tau = 1 <= 10
  GdSvrgConfig cfg;
  cfg.tau = 1.0;
  Oracle oracle(q);
  RngStream rng(1);
  const auto r = run_gd_svrg(oracle, random_vector(rng, 3), cfg, 1);
  EXPECT_EQ(r.status, RunStatus::kWarning);
  EXPECT_FALSE(r.status_message.empty());
}

TEST(Msvrg, BranchSelectionAndCrossover) {
  const auto p = ncvr::testing::small_logistic(300, 5);
  const double sigma = *p.gradient_bound();
  const double gap = mean_value(p, Vector::Zero(5));
  const auto probe = msvrg_step_size(300, p.smoothness(), 1, sigma, gap);
  const auto m = probe.epoch_length;
  EXPECT_EQ(m, 400u);
  const double c = std::sqrt(gap / (2.0 * p.smoothness() * sigma * sigma));
  EXPECT_NEAR(probe.c, c, 1e-15);
  const double crossover =
      c * c * p.smoothness() * p.smoothness() * std::pow(300.0, 4.0 / 3.0) / 0.0625;
  EXPECT_NEAR(probe.crossover_horizon, crossover, 1e-9 * crossover);
  const auto at = msvrg_step_size(300, p.smoothness(), static_cast<std::uint64_t>(crossover), sigma, gap);
  EXPECT_NEAR(at.stochastic_branch, at.variance_reduced_branch, 1e-3 * at.eta);

  const auto small = msvrg_step_size(300, p.smoothness(), m, sigma, gap);
  const auto large = msvrg_step_size(300, p.smoothness(), m * 1000000, sigma, gap);
  EXPECT_EQ(small.branch, MsvrgBranch::kStochasticGradient);
  EXPECT_EQ(large.branch, MsvrgBranch::kVarianceReduced);
  EXPECT_EQ(small.eta, std::max(small.stochastic_branch, small.variance_reduced_branch));
  EXPECT_EQ(large.eta, std::max(large.stochastic_branch, large.variance_reduced_branch));
}

TEST(Msvrg, LargeHorizonMatchesTheoreticalSvrg) {
  const auto p = ncvr::testing::small_logistic(30, 3);
  const double sigma = 1e3;  // c / sqrt(T) tiny, variance-reduced branch wins
  const std::size_t m = 40;
  Oracle a(p), b(p);
  const auto r = run_msvrg(a, Vector::Zero(3), 2 * m, sigma, 1.0, 6);
  EXPECT_EQ(*r.msvrg_branch, MsvrgBranch::kVarianceReduced);
  const double eta = 0.25 / (p.smoothness() * std::cbrt(900.0));
  const auto s = run_svrg(b, Vector::Zero(3), SvrgSchedule::constant(eta, m, 2 * m), 6);
  EXPECT_EQ(r.output, s.output);
  EXPECT_EQ(r.final_iterate, s.final_iterate);
}

TEST(Msvrg, Contracts) {
  const auto p = ncvr::testing::small_logistic(30, 3);
  Oracle oracle(p);
  EXPECT_THROW(run_msvrg(oracle, Vector::Zero(3), 41, 1.0, 1.0, 1), ContractViolation);
  EXPECT_THROW(run_msvrg(oracle, Vector::Zero(3), 40, 0.0, 1.0, 1), ContractViolation);
  EXPECT_THROW(run_msvrg(oracle, Vector::Zero(3), 40, 1.0, -1.0, 1), ContractViolation);
}

TEST(Records, RngIdentifierRecorded) {
  const auto q = scaled_identity({1.0});
  Oracle oracle(q);
  const auto r = run_sgd(oracle, scalar(1.0), 3, StepSizes::constant(0.1), 1);
  EXPECT_EQ(r.rng_algorithm, std::string(RngStream::kAlgorithm));
  EXPECT_FALSE(r.schedule.empty());
}
