#include "ncvr/problems/smoothness.hpp"

#include <algorithm>
#include <cmath>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

double estimate_smoothness(const FiniteSum& problem, std::size_t trials,
                           std::uint64_t seed,
                           const SmoothnessSampling& sampling) {
  require(trials >= 1, "estimate_smoothness: trials must be at least 1");
  require(sampling.scale > 0.0, "estimate_smoothness: scale must be positive");
  const auto d = static_cast<Eigen::Index>(problem.dimension());
  if (sampling.center) {
    require_dimension(*sampling.center, problem.dimension(),
                      "estimate_smoothness center");
  }

  RngStream rng(seed);
  double best = 0.0;
  Vector x(d);
  Vector y(d);
  Vector direction(d);
  Vector gx;
  Vector gy;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto i = static_cast<std::size_t>(rng.uniform_index(problem.size()));
    for (Eigen::Index j = 0; j < d; ++j) {
      x[j] = sampling.scale * rng.normal();
      direction[j] = rng.normal();
    }
    if (sampling.center) x += *sampling.center;
    const double delta =
        sampling.scale * std::pow(10.0, rng.uniform(-3.0, 0.0));
    problem.component_gradient(i, x, gx);

    for (std::size_t step = 0; step <= sampling.refinements; ++step) {
      const double norm = direction.norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      direction /= norm;
      y = x + delta * direction;
      const double gap = (y - x).norm();
      if (!(gap > 0.0)) break;
      problem.component_gradient(i, y, gy);
      direction = gy - gx;
      const double ratio = direction.norm() / gap;
      if (std::isfinite(ratio)) best = std::max(best, ratio);
    }
  }
  return best;
}

double max_component_gradient_norm(const FiniteSum& problem, const Vector& x) {
  require_dimension(x, problem.dimension(), "max_component_gradient_norm");
  double best = 0.0;
  Vector g;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    problem.component_gradient(i, x, g);
    best = std::max(best, g.norm());
  }
  return best;
}

}  // namespace ncvr
