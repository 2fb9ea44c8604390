#include <sstream>

#include "ncvr/errors.hpp"
#include "ncvr/optimizers/optimizers.hpp"
#include "recorder.hpp"

namespace ncvr {

RunRecord run_sgd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                  const StepSizes& step_sizes, std::uint64_t seed,
                  const RunOptions& options, std::size_t batch_size) {
  RngStream rng(seed);
  RunRecord record = run_sgd(oracle, x0, steps, step_sizes, rng, options, batch_size);
  record.seed = seed;
  return record;
}

RunRecord run_sgd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                  const StepSizes& step_sizes, RngStream& rng,
                  const RunOptions& options, std::size_t batch_size) {
  require_dimension(x0, oracle.dimension(), "initial point");
  require(batch_size >= 1, "SGD batch size must be at least 1");
  require(all_finite(x0), "initial point has non-finite coordinates");

  RunRecord record;
  record.algorithm = batch_size == 1 ? "sgd" : "minibatch-sgd";
  record.schedule = step_sizes.describe();
  if (batch_size > 1) record.schedule += " b=" + std::to_string(batch_size);
  record.seed = rng.seed();
  if (step_sizes.kind() == StepSizes::Kind::kConstant) record.step_size = step_sizes(0);

  detail::Recorder rec(oracle, record, options);
  const std::size_t n = oracle.size();
  const std::uint64_t period = (n + batch_size - 1) / batch_size;

  Vector x = x0;
  Vector next(x.size());
  Vector grad(x.size());
  Vector direction(x.size());
  rec.checkpoint(x, 0);

  bool ok = record.status != RunStatus::kDiverged;
  for (std::uint64_t t = 0; ok && t < steps; ++t) {
    if (batch_size == 1) {
      oracle.gradient(rng.uniform_index(n), x, direction);
    } else {
      direction.setZero();
      for (std::size_t j = 0; j < batch_size; ++j) {
        oracle.gradient(rng.uniform_index(n), x, grad);
        direction += grad;
      }
      direction /= static_cast<double>(batch_size);
    }
    next = x - step_sizes(t) * direction;
    const std::uint64_t update = t + 1;
    if (!rec.accept(next, update)) break;
    x.swap(next);
    record.updates = update;
    rec.notify(update, 0, static_cast<std::size_t>(t), x);
    if (rec.due(update, period) || update == steps) ok = rec.checkpoint(x, update);
  }

  record.output = x;
  record.final_iterate = x;
  rec.finish();
  return record;
}

RunRecord run_gd(Oracle& oracle, const Vector& x0, std::uint64_t steps,
                 double eta, const RunOptions& options) {
  require_dimension(x0, oracle.dimension(), "initial point");
  require(eta > 0.0, "gradient descent step size must be positive");

  RunRecord record;
  record.algorithm = "gd";
  std::ostringstream s;
  s << "constant eta=" << eta;
  record.schedule = s.str();
  record.step_size = eta;

  detail::Recorder rec(oracle, record, options);
  Vector x = x0;
  Vector g;
  Vector next;
  bool ok = rec.checkpoint(x, 0);
  for (std::uint64_t k = 0; ok && k < steps; ++k) {
    full_gradient(oracle, x, g);
    next = x - eta * g;
    const std::uint64_t update = k + 1;
    if (!rec.accept(next, update)) break;
    x.swap(next);
    record.updates = update;
    rec.notify(update, 0, static_cast<std::size_t>(k), x);
    if (rec.due(update, 1) || update == steps) ok = rec.checkpoint(x, update);
  }
  record.output = x;
  record.final_iterate = x;
  rec.finish();
  return record;
}

}  // namespace ncvr
