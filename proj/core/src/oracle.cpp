#include "ncvr/oracle.hpp"

#include <cmath>

#include "ncvr/errors.hpp"

namespace ncvr {

void require_dimension(const Vector& x, std::size_t d, const char* what) {
  if (static_cast<std::size_t>(x.size()) != d) {
    throw ContractViolation(std::string(what) + ": expected dimension " +
                            std::to_string(d) + ", got " +
                            std::to_string(x.size()));
  }
}

namespace {

void accumulate_mean_gradient(const FiniteSum& problem, const Vector& x,
                              Vector& out, bool check) {
  const std::size_t n = problem.size();
  out.setZero(static_cast<Eigen::Index>(problem.dimension()));
  Vector g;
  for (std::size_t i = 0; i < n; ++i) {
    problem.component_gradient(i, x, g);
    if (check && !g.allFinite()) {
      throw NumericError(
          "non-finite gradient from component " + std::to_string(i), i);
    }
    out += g;
  }
  out /= static_cast<double>(n);
}

}  // namespace

void full_gradient(Oracle& oracle, const Vector& x, Vector& out) {
  require_dimension(x, oracle.dimension(), "full_gradient");
  oracle.ledger().charge(oracle.size());
  accumulate_mean_gradient(oracle.problem(), x, out, true);
}

Vector full_gradient(Oracle& oracle, const Vector& x) {
  Vector out;
  full_gradient(oracle, x, out);
  return out;
}

double mean_value(const FiniteSum& problem, const Vector& x) {
  require_dimension(x, problem.dimension(), "mean_value");
  double total = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    total += problem.component_value(i, x);
  }
  return total / static_cast<double>(problem.size());
}

Vector mean_gradient(const FiniteSum& problem, const Vector& x) {
  require_dimension(x, problem.dimension(), "mean_gradient");
  Vector out;
  accumulate_mean_gradient(problem, x, out, false);
  return out;
}

namespace {

template <typename Fn>
Vector central_difference(const Vector& x, double h, Fn&& fn) {
  require(h > 0.0, "finite difference step h must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double original = probe[j];
    probe[j] = original + h;
    const double forward = fn(probe);
    probe[j] = original - h;
    const double backward = fn(probe);
    probe[j] = original;
    grad[j] = (forward - backward) / (2.0 * h);
  }
  return grad;
}

}  // namespace

Vector finite_difference_gradient(const FiniteSum& problem, const Vector& x,
                                  double h) {
  require_dimension(x, problem.dimension(), "finite_difference_gradient");
  return central_difference(
      x, h, [&](const Vector& p) { return mean_value(problem, p); });
}

Vector finite_difference_component_gradient(const FiniteSum& problem,
                                            std::size_t i, const Vector& x,
                                            double h) {
  require_dimension(x, problem.dimension(),
                    "finite_difference_component_gradient");
  require(i < problem.size(), "component index out of range");
  return central_difference(
      x, h, [&](const Vector& p) { return problem.component_value(i, p); });
}

}  // namespace ncvr
