#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ncvr/vector.hpp"

namespace ncvr {

/// A finite-sum objective f(x) = (1/n) sum_i f_i(x) over R^d.
///
/// Implementations are immutable after construction, and component
/// evaluations are pure functions of (i, x), so concurrent calls for distinct
/// (or equal) indices are safe.
class FiniteSum {
 public:
  virtual ~FiniteSum() = default;

  /// Number of component functions n.
  virtual std::size_t size() const = 0;
  /// Dimension d of the parameter space.
  virtual std::size_t dimension() const = 0;

  virtual double component_value(std::size_t i, const Vector& x) const = 0;
  /// Writes grad f_i(x) into `out` (resized as needed).
  virtual void component_gradient(std::size_t i, const Vector& x,
                                  Vector& out) const = 0;

  /// Per-component gradient Lipschitz constant L.
  virtual double smoothness() const = 0;
  /// False when smoothness() is an empirical estimate rather than a bound.
  virtual bool smoothness_is_bound() const { return true; }

  /// sigma with ||grad f_i(x)|| <= sigma everywhere, when one is known.
  virtual std::optional<double> gradient_bound() const { return std::nullopt; }
  /// Exact f(x*), when known in closed form.
  virtual std::optional<double> optimal_value() const { return std::nullopt; }
  /// A lower bound on f, when known (defaults to optimal_value()).
  virtual std::optional<double> value_lower_bound() const {
    return optimal_value();
  }

  /// Short human readable descriptor, also used to key comparison tables.
  virtual std::string describe() const = 0;
};

/// Monotone count of incremental first-order oracle calls.
class IfoLedger {
 public:
  IfoLedger() = default;
  IfoLedger(const IfoLedger&) = delete;
  IfoLedger& operator=(const IfoLedger&) = delete;

  void charge(std::uint64_t calls = 1) {
    count_.fetch_add(calls, std::memory_order_relaxed);
  }
  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

/// Counting access to a FiniteSum. Every component gradient costs one IFO
/// unit; values are reporting instrumentation and are not charged.
class Oracle {
 public:
  explicit Oracle(const FiniteSum& problem) : problem_(&problem) {}

  const FiniteSum& problem() const { return *problem_; }
  std::size_t size() const { return problem_->size(); }
  std::size_t dimension() const { return problem_->dimension(); }
  double smoothness() const { return problem_->smoothness(); }

  IfoLedger& ledger() { return ledger_; }
  const IfoLedger& ledger() const { return ledger_; }
  std::uint64_t ifo_calls() const { return ledger_.count(); }
  /// IFO calls divided by n.
  double effective_passes() const {
    return static_cast<double>(ledger_.count()) /
           static_cast<double>(problem_->size());
  }

  void gradient(std::size_t i, const Vector& x, Vector& out) {
    ledger_.charge();
    problem_->component_gradient(i, x, out);
  }
  Vector gradient(std::size_t i, const Vector& x) {
    Vector out;
    gradient(i, x, out);
    return out;
  }

 private:
  const FiniteSum* problem_;
  IfoLedger ledger_;
};

/// (1/n) sum_i grad f_i(x); charges exactly n IFO units.
///
/// Throws ContractViolation on a dimension mismatch and NumericError naming
/// the first component whose gradient is not finite.
void full_gradient(Oracle& oracle, const Vector& x, Vector& out);
Vector full_gradient(Oracle& oracle, const Vector& x);

/// Ledger-exempt f(x) used for reporting.
double mean_value(const FiniteSum& problem, const Vector& x);
/// Ledger-exempt grad f(x) used for reporting. Summation order matches
/// full_gradient so the two agree bit for bit.
Vector mean_gradient(const FiniteSum& problem, const Vector& x);

/// Central-difference estimate of grad f(x) with step h (> 0). Test oracle;
/// never touches a ledger.
Vector finite_difference_gradient(const FiniteSum& problem, const Vector& x,
                                  double h);
/// Same, for a single component f_i.
Vector finite_difference_component_gradient(const FiniteSum& problem,
                                            std::size_t i, const Vector& x,
                                            double h);

}  // namespace ncvr
