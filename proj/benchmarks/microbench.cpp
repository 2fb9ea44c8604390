#include <benchmark/benchmark.h>

#include "ncvr/certificates/certificate.hpp"
#include "ncvr/optimizers/optimizers.hpp"
#include "ncvr/problems/logistic.hpp"
#include "ncvr/problems/quadratic.hpp"

namespace {

ncvr::NonconvexLogisticProblem logistic(std::size_t n, std::size_t d) {
  ncvr::LogisticInstanceConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.seed = 3;
  return ncvr::make_logistic(cfg);
}

void BM_LogisticComponentGradient(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto problem = logistic(1000, d);
  ncvr::Vector x = ncvr::Vector::Constant(static_cast<Eigen::Index>(d), 0.1);
  ncvr::Vector g;
  std::size_t i = 0;
  for (auto _ : state) {
    problem.component_gradient(i, x, g);
    benchmark::DoNotOptimize(g.data());
    i = (i + 1) % problem.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LogisticComponentGradient)->Arg(10)->Arg(50)->Arg(200);

void BM_QuadraticComponentGradient(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto problem = ncvr::make_quadratic(100, d, 0.05, 1);
  ncvr::Vector x = ncvr::Vector::Ones(static_cast<Eigen::Index>(d));
  ncvr::Vector g;
  std::size_t i = 0;
  for (auto _ : state) {
    problem.component_gradient(i, x, g);
    benchmark::DoNotOptimize(g.data());
    i = (i + 1) % problem.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QuadraticComponentGradient)->Arg(10)->Arg(50);

void BM_SvrgEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problem = logistic(n, 20);
  const auto params = ncvr::theoretical_svrg_params(n, problem.smoothness(), 2.0 / 3.0, 0.25);
  const auto schedule =
      ncvr::SvrgSchedule::constant(params.eta, params.epoch_length, params.epoch_length);
  ncvr::RunOptions options;
  options.checkpoints.enabled = false;
  const ncvr::Vector x0 = ncvr::Vector::Zero(20);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    ncvr::Oracle oracle(problem);
    auto record = ncvr::run_svrg(oracle, x0, schedule, seed++, options);
    benchmark::DoNotOptimize(record.output.data());
  }
}
BENCHMARK(BM_SvrgEpoch)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Certificate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto report = ncvr::certify_schedule(n, 1.0, 1.0, 1);
    benchmark::DoNotOptimize(report.certificate.gamma_n);
  }
}
BENCHMARK(BM_Certificate)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
