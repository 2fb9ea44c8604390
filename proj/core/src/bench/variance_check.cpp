#include "ncvr/bench/variance_check.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "ncvr/certificates/diagnostics.hpp"
#include "ncvr/errors.hpp"
#include "ncvr/problems/quadratic.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

VarianceCheckSpec parse_variance_check(ConfigFile& config) {
  VarianceCheckSpec spec;
  std::vector<std::string> issues;
  try {
    if (auto* p = config.find("problem")) {
      spec.problem = parse_problem(*p, issues);
    } else {
      issues.push_back("missing [problem] section");
    }
    if (auto* v = config.find("variance")) {
      spec.pairs = v->count("pairs").value_or(spec.pairs);
      if (auto b = v->count_list("batches")) spec.batches = *b;
      spec.seed = v->count("seed").value_or(spec.seed);
      spec.scale = v->real("scale").value_or(spec.scale);
      spec.monte_carlo = v->flag("monte_carlo").value_or(false);
      spec.samples = v->count("samples").value_or(spec.samples);
      spec.tolerance = v->real("tolerance").value_or(spec.tolerance);
      for (auto& u : v->unused()) issues.push_back(u);
    }
  } catch (const ParseError& e) {
    issues.push_back(e.what());
  }
  if (spec.pairs == 0) issues.push_back("'pairs' must be positive");
  for (auto b : spec.batches) {
    if (b == 0) issues.push_back("batch sizes must be positive");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return spec;
}

VarianceCheckSpec load_variance_check(const std::filesystem::path& path) {
  ConfigFile config = load_config(path);
  return parse_variance_check(config);
}

bool VarianceCheckResult::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const VarianceCheckRow& r) {
    return r.violations == 0 && r.convex_violations == 0;
  });
}

std::string VarianceCheckResult::to_text() const {
  std::ostringstream out;
  out << "problem: " << problem << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "b=%zu  pairs=%zu  %s  worst E||u||^2/bound=%.6f  violations=%zu",
                  r.batch_size, r.pairs, r.exact ? "exact" : "monte-carlo", r.worst_ratio,
                  r.violations);
    out << buf;
    if (r.convex_checked) {
      std::snprintf(buf, sizeof buf, "  convex worst=%.6f violations=%zu",
                    r.convex_worst_ratio, r.convex_violations);
      out << buf;
    }
    out << '\n';
  }
  out << (passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

VarianceCheckResult run_variance_check(const VarianceCheckSpec& spec) {
  const Problem problem = build_problem(spec.problem);
  const FiniteSum& f = *problem.objective;
  VarianceCheckResult result;
  result.problem = f.describe();

  RngStream rng(spec.seed);
  const auto d = static_cast<Eigen::Index>(f.dimension());
  std::vector<std::pair<Vector, Vector>> pairs;
  for (std::size_t k = 0; k < spec.pairs; ++k) {
    Vector x = problem.initial_point;
    Vector xs = problem.initial_point;
    for (Eigen::Index j = 0; j < d; ++j) x[j] += spec.scale * rng.normal();
    for (Eigen::Index j = 0; j < d; ++j) xs[j] += spec.scale * rng.normal();
    pairs.emplace_back(std::move(x), std::move(xs));
  }

  const bool convex = dynamic_cast<const QuadraticProblem*>(&f) != nullptr &&
                      f.optimal_value().has_value();
  VarianceOptions options;
  options.allow_monte_carlo = spec.monte_carlo;
  options.monte_carlo_samples = spec.samples;
  options.seed = spec.seed;

  for (auto b : spec.batches) {
    VarianceCheckRow row;
    row.batch_size = static_cast<std::size_t>(b);
    row.convex_checked = convex && b == 1;
    for (const auto& [x, xs] : pairs) {
      const VarianceDiagnostic v = variance_diagnostic(f, x, xs, row.batch_size, options);
      row.exact = row.exact && v.exact;
      ++row.pairs;
      // Monte Carlo estimates get a three-standard-error allowance.
      const double slack = spec.tolerance + 3.0 * v.std_error;
      if (v.mean_sq > v.bound + slack) ++row.violations;
      if (v.bound > 0.0) row.worst_ratio = std::max(row.worst_ratio, v.mean_sq / v.bound);
      if (row.convex_checked) {
        const double cb = convex_variance_bound(f, x, xs, *f.optimal_value());
        if (v.mean_sq > cb + slack) ++row.convex_violations;
        if (cb > 0.0) row.convex_worst_ratio = std::max(row.convex_worst_ratio, v.mean_sq / cb);
      }
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace ncvr
