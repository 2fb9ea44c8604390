#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ncvr/oracle.hpp"

namespace ncvr {

struct SmoothnessSampling {
  /// Points are drawn as center + scale * N(0, I); center defaults to 0.
  std::optional<Vector> center;
  double scale = 1.0;
  /// Power-iteration refinements per trial. Each refinement is itself a
  /// sampled pair (x, x + delta r) whose direction r follows the previous
  /// gradient difference, steering probes toward high-curvature directions.
  std::size_t refinements = 8;
};

/// Empirical lower estimate of the per-component gradient Lipschitz constant:
/// the maximum of ||grad f_i(x) - grad f_i(y)|| / ||x - y|| over sampled
/// (i, x, y). Never charges a ledger. Pairs with x == y are skipped.
double estimate_smoothness(const FiniteSum& problem, std::size_t trials,
                           std::uint64_t seed,
                           const SmoothnessSampling& sampling = {});

/// max_i ||grad f_i(x)||, for checking sigma-boundedness at a point.
double max_component_gradient_norm(const FiniteSum& problem, const Vector& x);

}  // namespace ncvr
