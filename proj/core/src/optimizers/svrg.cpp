#include <vector>

#include "ncvr/errors.hpp"
#include "ncvr/optimizers/optimizers.hpp"
#include "recorder.hpp"

namespace ncvr {

RunRecord run_svrg(Oracle& oracle, const Vector& x0,
                   const SvrgSchedule& schedule, RngStream& rng,
                   const RunOptions& options) {
  schedule.validate();
  require_dimension(x0, oracle.dimension(), "initial point");
  require(all_finite(x0), "initial point has non-finite coordinates");

  const std::size_t n = oracle.size();
  const std::size_t m = schedule.epoch_length;
  const std::size_t b = schedule.full_batch ? n : schedule.batch_size;
  const std::uint64_t epochs = schedule.epochs();
  const std::vector<double> p = schedule.weights();

  RunRecord record;
  record.algorithm = schedule.full_batch ? "svrg-full-batch"
                     : b == 1            ? "svrg"
                                         : "minibatch-svrg";
  record.schedule = schedule.describe();
  record.seed = rng.seed();
  if (schedule.step_sizes.size() == 1) record.step_size = schedule.step_sizes[0];

  detail::Recorder rec(oracle, record, options);

  const std::uint64_t position = rng.uniform_index(epochs * m);
  const std::uint64_t out_epoch = position / m;
  const std::size_t out_step = static_cast<std::size_t>(position % m);
  record.output_position = std::make_pair(out_epoch, out_step);

  Vector snapshot = x0;
  Vector x = x0;
  Vector g;
  Vector gx(x0.size());
  Vector gs(x0.size());
  Vector correction(x0.size());
  Vector next(x0.size());
  Vector accumulated(x0.size());
  record.output = x0;

  bool ok = rec.checkpoint(snapshot, 0);
  std::uint64_t update = 0;
  for (std::uint64_t s = 0; ok && s < epochs; ++s) {
    try {
      full_gradient(oracle, snapshot, g);
    } catch (const NumericError& e) {
      rec.mark_diverged(update, e.what());
      break;
    }
    accumulated.setZero();
    if (p[0] != 0.0) accumulated += p[0] * x;

    for (std::size_t t = 0; t < m; ++t) {
      if (s == out_epoch && t == out_step) record.output = x;
      correction.setZero();
      for (std::size_t j = 0; j < b; ++j) {
        const std::size_t i =
            schedule.full_batch ? j : static_cast<std::size_t>(rng.uniform_index(n));
        oracle.gradient(i, x, gx);
        oracle.gradient(i, snapshot, gs);
        correction += gx - gs;
      }
      next = x - schedule.step(t) * (correction / static_cast<double>(b) + g);
      if (!rec.accept(next, update + 1)) {
        ok = false;
        break;
      }
      x.swap(next);
      ++update;
      record.updates = update;
      if (p[t + 1] != 0.0) accumulated += p[t + 1] * x;
      rec.notify(update, s, t, x);
      if (options.checkpoints.every_updates > 0 && rec.due(update, 0)) {
        ok = rec.checkpoint(x, update);
        if (!ok) break;
      }
    }
    if (!ok) break;
    snapshot = accumulated;
    if (!rec.accept(snapshot, update)) break;
    if (options.checkpoints.every_updates == 0) ok = rec.checkpoint(snapshot, update);
  }

  record.final_iterate = snapshot;
  rec.finish();
  return record;
}

RunRecord run_svrg(Oracle& oracle, const Vector& x0,
                   const SvrgSchedule& schedule, std::uint64_t seed,
                   const RunOptions& options) {
  require(schedule.batch_size == 1 && !schedule.full_batch,
          "run_svrg takes single-sample schedules; use run_minibatch_svrg");
  RngStream rng(seed);
  RunRecord record = run_svrg(oracle, x0, schedule, rng, options);
  record.seed = seed;
  return record;
}

RunRecord run_minibatch_svrg(Oracle& oracle, const Vector& x0,
                             const SvrgSchedule& schedule, std::uint64_t seed,
                             const RunOptions& options) {
  RngStream rng(seed);
  RunRecord record = run_svrg(oracle, x0, schedule, rng, options);
  record.seed = seed;
  return record;
}

}  // namespace ncvr
