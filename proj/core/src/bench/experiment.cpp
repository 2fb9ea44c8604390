#include "ncvr/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ncvr/errors.hpp"
#include "ncvr/problems/dataset.hpp"
#include "ncvr/problems/logistic.hpp"
#include "ncvr/problems/mlp.hpp"
#include "ncvr/problems/quadratic.hpp"
#include "ncvr/rng.hpp"

namespace ncvr {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == '.';
  });
}

Vector initial_point(const ProblemSpec& spec, const FiniteSum& f) {
  std::string init = spec.init;
  if (init.empty()) {
    init = spec.type == "quadratic" ? "gaussian" : spec.type == "mlp" ? "glorot" : "zeros";
  }
  RngStream rng = RngStream(spec.seed).derive(kInitStream);
  const auto d = static_cast<Eigen::Index>(f.dimension());
  if (init == "zeros") return Vector::Zero(d);
  if (init == "gaussian") {
    Vector x(d);
    for (Eigen::Index j = 0; j < d; ++j) x[j] = spec.init_scale * rng.normal();
    return x;
  }
  if (init == "glorot") {
    const auto* mlp = dynamic_cast<const MlpProblem*>(&f);
    if (mlp == nullptr) throw ContractViolation("init = glorot needs an mlp problem");
    return spec.init_scale * mlp->glorot_initialization(rng);
  }
  throw ContractViolation("unknown init '" + init + "' (zeros | gaussian | glorot)");
}

std::optional<AlgorithmKind> parse_kind(const std::string& s) {
  if (s == "sgd") return AlgorithmKind::kSgd;
  if (s == "gd") return AlgorithmKind::kGd;
  if (s == "svrg") return AlgorithmKind::kSvrg;
  if (s == "gd_svrg" || s == "gd-svrg") return AlgorithmKind::kGdSvrg;
  if (s == "msvrg") return AlgorithmKind::kMsvrg;
  return std::nullopt;
}

// Runs `body`, turning library errors into an issue prefixed with `where`.
template <typename F>
void collect(std::vector<std::string>& issues, const std::string& where, F&& body) {
  try {
    body();
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) issues.push_back(where + ": " + issue);
  } catch (const Error& e) {
    issues.push_back(where + ": " + e.what());
  }
}

AlgorithmSpec parse_algorithm(ConfigSection& s, std::vector<std::string>& issues) {
  AlgorithmSpec a;
  a.name = s.name();
  if (!valid_name(a.name)) {
    issues.push_back("line " + std::to_string(s.line()) +
                     ": algorithm sections need a name of [A-Za-z0-9._-], e.g. [algorithm svrg-1]");
  }
  const auto kind = s.text("kind");
  if (!kind) {
    issues.push_back(s.label() + ": missing 'kind' (sgd | gd | svrg | gd_svrg | msvrg)");
  } else if (auto k = parse_kind(*kind)) {
    a.kind = *k;
  } else {
    issues.push_back(s.label() + ": unknown kind '" + *kind + "'");
  }
  a.schedule = s.text("schedule").value_or("");
  a.eta = s.real("eta");
  a.decay = s.real("decay").value_or(0.0);
  a.batch = s.count("batch").value_or(1);
  a.alpha = s.real("alpha").value_or(2.0 / 3.0);
  a.constants.mu = s.real("mu").value_or(a.constants.mu);
  a.constants.nu = s.real("nu").value_or(a.constants.nu);
  if (auto m = s.count("epoch_length")) a.epoch_length = *m;
  a.snapshot = s.text("snapshot").value_or("last");
  a.warm_start = s.count("warm_start").value_or(0);
  a.warm_eta = s.real("warm_eta");
  if (auto k = s.count("outer")) a.outer = *k;
  a.tau = s.real("tau");
  a.inner_epochs = s.count("inner_epochs").value_or(1);
  a.sigma = s.real("sigma");
  a.f_gap = s.real("f_gap");
  for (auto& u : s.unused()) issues.push_back(u);
  return a;
}

}  // namespace

std::filesystem::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return "ncvr-output";
}

std::string to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kSgd: return "sgd";
    case AlgorithmKind::kGd: return "gd";
    case AlgorithmKind::kSvrg: return "svrg";
    case AlgorithmKind::kGdSvrg: return "gd_svrg";
    case AlgorithmKind::kMsvrg: return "msvrg";
  }
  return "unknown";
}

Problem build_problem(const ProblemSpec& spec) {
  Problem p;
  if (spec.type == "quadratic") {
    auto q = std::make_shared<QuadraticProblem>(
        make_quadratic(spec.n, spec.d, spec.lambda, spec.seed, spec.smoothness));
    p.tau = q->gradient_dominance();
    p.objective = q;
  } else if (spec.type == "logistic") {
    LogisticInstanceConfig cfg;
    cfg.n = spec.n;
    cfg.d = spec.d;
    cfg.regularization = spec.regularization;
    cfg.row_norm = spec.row_norm;
    cfg.teacher_norm = spec.teacher_norm;
    cfg.seed = spec.seed;
    p.objective = std::make_shared<NonconvexLogisticProblem>(make_logistic(cfg));
  } else if (spec.type == "libsvm") {
    require(!spec.data.empty(), "libsvm problems need 'data'");
    p.objective = std::make_shared<NonconvexLogisticProblem>(load_libsvm(spec.data),
                                                             spec.regularization);
  } else if (spec.type == "mlp") {
    const Dataset data =
        spec.data.empty()
            ? make_synthetic_classification(spec.n, spec.d, spec.classes, spec.seed,
                                            spec.separation)
            : load_libsvm(spec.data);
    p.objective = std::make_shared<MlpProblem>(make_mlp(data, spec.hidden, spec.l2, spec.seed));
  } else {
    throw ContractViolation("unknown problem type '" + spec.type +
                            "' (quadratic | logistic | libsvm | mlp)");
  }
  p.initial_point = initial_point(spec, *p.objective);
  return p;
}

ProblemSpec parse_problem(ConfigSection& s, std::vector<std::string>& issues) {
  ProblemSpec p;
  p.type = s.text("type").value_or(p.type);
  p.n = s.count("n").value_or(p.n);
  p.d = s.count("d").value_or(p.d);
  p.seed = s.count("seed").value_or(p.seed);
  p.lambda = s.real("lambda").value_or(p.lambda);
  p.smoothness = s.real("smoothness").value_or(p.smoothness);
  p.regularization = s.real("regularization").value_or(p.regularization);
  p.row_norm = s.real("row_norm");
  p.teacher_norm = s.real("teacher_norm").value_or(p.teacher_norm);
  if (auto path = s.text("data")) p.data = *path;
  p.classes = s.count("classes").value_or(p.classes);
  p.hidden = s.count("hidden").value_or(p.hidden);
  p.l2 = s.real("l2").value_or(p.l2);
  p.separation = s.real("separation").value_or(p.separation);
  p.init = s.text("init").value_or("");
  p.init_scale = s.real("init_scale").value_or(p.init_scale);
  for (auto& u : s.unused()) issues.push_back(u);
  return p;
}

ExperimentSpec parse_experiment(ConfigFile& config) {
  ExperimentSpec spec;
  std::vector<std::string> issues;
  auto guarded = [&](ConfigSection& section, auto&& body) {
    try {
      body(section);
    } catch (const ParseError& e) {
      issues.push_back(e.what());
    }
  };

  static const std::set<std::string> known{"experiment", "problem", "algorithm", "variance"};
  for (auto& s : config.sections) {
    if (!known.count(s.kind())) {
      issues.push_back("line " + std::to_string(s.line()) + ": unknown section " + s.label());
    }
  }
  if (config.all("experiment").size() > 1) issues.push_back("more than one [experiment] section");
  if (config.all("problem").size() > 1) issues.push_back("more than one [problem] section");

  bool have_output = false;
  if (auto* e = config.find("experiment")) {
    guarded(*e, [&](ConfigSection& s) {
      spec.name = s.text("name").value_or(spec.name);
      if (auto seeds = s.count_list("seeds")) spec.seeds = *seeds;
      spec.budget_passes = s.real("budget_passes").value_or(spec.budget_passes);
      spec.checkpoint_every = s.count("checkpoint_every").value_or(0);
      if (auto out = s.text("output")) {
        spec.output_dir = *out;
        have_output = true;
      }
      spec.jobs = static_cast<unsigned>(s.count("jobs").value_or(1));
      for (auto& u : s.unused()) issues.push_back(u);
    });
  }
  if (!have_output) spec.output_dir = default_output_dir() / spec.name;

  if (auto* p = config.find("problem")) {
    guarded(*p, [&](ConfigSection& s) { spec.problem = parse_problem(s, issues); });
  } else {
    issues.push_back("missing [problem] section");
  }

  std::set<std::string> names;
  for (auto* a : config.all("algorithm")) {
    guarded(*a, [&](ConfigSection& s) {
      AlgorithmSpec alg = parse_algorithm(s, issues);
      if (!names.insert(alg.name).second) {
        issues.push_back(s.label() + ": duplicate algorithm name");
      }
      spec.algorithms.push_back(std::move(alg));
    });
  }
  if (config.all("algorithm").empty()) issues.push_back("no [algorithm NAME] sections");
  if (spec.seeds.empty()) issues.push_back("'seeds' is empty");
  if (std::set<std::uint64_t>(spec.seeds.begin(), spec.seeds.end()).size() != spec.seeds.size()) {
    issues.push_back("'seeds' has duplicates");
  }
  if (!(spec.budget_passes > 0.0)) issues.push_back("'budget_passes' must be positive");
  if (spec.jobs == 0) issues.push_back("'jobs' must be at least 1");
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  ConfigFile config = load_config(path);
  return parse_experiment(config);
}

std::vector<ResolvedAlgorithm> resolve_algorithms(const ExperimentSpec& spec,
                                                  const Problem& problem) {
  const FiniteSum& f = *problem.objective;
  const std::size_t n = f.size();
  const double L = f.smoothness();
  const auto budget = static_cast<std::uint64_t>(std::floor(spec.budget_passes * n));
  std::vector<std::string> issues;
  std::vector<ResolvedAlgorithm> out;

  auto sigma_and_gap = [&](const AlgorithmSpec& a, ResolvedAlgorithm& r) {
    if (a.sigma) {
      r.sigma = *a.sigma;
    } else if (auto s = f.gradient_bound()) {
      r.sigma = *s;
    } else {
      throw ContractViolation("needs 'sigma': the problem has no known gradient bound");
    }
    if (a.f_gap) {
      r.f_gap = *a.f_gap;
    } else if (auto lb = f.value_lower_bound()) {
      r.f_gap = mean_value(f, problem.initial_point) - *lb;
    } else {
      throw ContractViolation("needs 'f_gap': the problem has no known lower bound");
    }
    require(r.sigma > 0.0 && r.f_gap > 0.0, "sigma and f_gap must be positive");
  };

  for (const auto& a : spec.algorithms) {
    ResolvedAlgorithm r;
    r.spec = a;
    const std::string where = "[algorithm " + a.name + "]";
    collect(issues, where, [&] {
      require(a.batch >= 1, "'batch' must be at least 1");
      switch (a.kind) {
        case AlgorithmKind::kSgd: {
          r.steps = budget / a.batch;
          require(r.steps >= 1, "budget is below one SGD step");
          const std::string sched = a.schedule.empty() ? "constant" : a.schedule;
          if (sched == "constant") {
            require(a.eta && *a.eta > 0.0, "constant schedule needs a positive 'eta'");
            r.step_sizes = StepSizes::constant(*a.eta);
          } else if (sched == "sqrt_t") {
            sigma_and_gap(a, r);
            r.step_sizes = StepSizes::inverse_sqrt_horizon(r.f_gap, L, r.sigma, r.steps);
          } else if (sched == "t_inverse") {
            require(a.eta && *a.eta > 0.0, "t_inverse schedule needs a positive 'eta'");
            require(a.decay >= 0.0, "'decay' must be non-negative");
            r.step_sizes = StepSizes::t_inverse(*a.eta, a.decay, n);
          } else {
            throw ContractViolation("unknown SGD schedule '" + sched +
                                    "' (constant | sqrt_t | t_inverse)");
          }
          r.planned_ifo = r.steps * a.batch;
          r.schedule = r.step_sizes->describe();
          break;
        }
        case AlgorithmKind::kGd: {
          const double eta = a.eta.value_or(1.0 / L);
          require(eta > 0.0, "'eta' must be positive");
          r.steps = budget / n;
          require(r.steps >= 1, "budget is below one gradient descent step");
          r.step_sizes = StepSizes::constant(eta);
          r.planned_ifo = r.steps * n;
          r.schedule = "constant eta=" + format_real(eta);
          break;
        }
        case AlgorithmKind::kSvrg: {
          const std::string sched = a.schedule.empty() ? "theoretical" : a.schedule;
          double eta = 0.0;
          std::size_t m = 0;
          if (sched == "theoretical") {
            const double alpha = a.batch == 1 ? a.alpha : 2.0 / 3.0;
            CertificateReport report = certify_schedule(n, L, alpha, a.batch, a.constants);
            if (!report.meets_bound()) {
              throw ContractViolation("theoretical schedule fails its certificate: " +
                                      report.to_text());
            }
            eta = report.certificate.eta;
            m = report.certificate.epoch_length;
            r.certificate = std::move(report);
          } else if (sched == "constant") {
            require(a.eta && *a.eta > 0.0, "constant schedule needs a positive 'eta'");
            eta = *a.eta;
            m = a.epoch_length.value_or(std::max<std::size_t>(1, n / 10));
            require(m >= 1, "'epoch_length' must be at least 1");
            const double nd = static_cast<double>(n);
            CertificateReport report;
            report.n = n;
            report.alpha = a.alpha;
            report.batch_size = a.batch;
            report.nu = a.constants.nu;
            report.mu = eta * L * std::pow(nd, a.alpha) / static_cast<double>(a.batch);
            report.bound = a.constants.nu * static_cast<double>(a.batch) / (L * std::pow(nd, a.alpha));
            report.c0_bound = std::pow(nd, -a.alpha / 2.0) * report.mu * L * (std::exp(1.0) - 1.0);
            try {
              report.certificate = compute_c_sequence(eta, L / std::pow(nd, a.alpha / 2.0), L, m,
                                                      a.batch);
              if (!report.certificate.valid()) {
                r.warnings.push_back("advisory certificate: some Gamma_t <= 0 for this schedule");
              }
              r.certificate = std::move(report);
            } catch (const NumericError& e) {
              r.warnings.push_back(std::string("advisory certificate not evaluated: ") + e.what());
            }
          } else {
            throw ContractViolation("unknown SVRG schedule '" + sched +
                                    "' (theoretical | constant)");
          }
          require(m >= 1, "'epoch_length' must be at least 1");
          SnapshotRule rule;
          if (a.snapshot == "last") {
            rule = SnapshotRule::kLastIterate;
          } else if (a.snapshot == "average") {
            rule = SnapshotRule::kUniformAverage;
          } else {
            throw ContractViolation("unknown snapshot '" + a.snapshot + "' (last | average)");
          }
          if (a.warm_start > 0) {
            require(a.warm_eta && *a.warm_eta > 0.0, "'warm_start' needs a positive 'warm_eta'");
          }
          const std::uint64_t epoch_cost = n + 2 * a.batch * m;
          const std::uint64_t after_warm = budget > a.warm_start ? budget - a.warm_start : 0;
          const std::uint64_t epochs = after_warm / epoch_cost;
          if (epochs < 1) {
            throw ContractViolation("budget of " + std::to_string(budget) +
                                    " IFO calls does not cover one epoch (" +
                                    std::to_string(epoch_cost) + " IFO after " +
                                    std::to_string(a.warm_start) + " warm-start calls)");
          }
          r.svrg = SvrgSchedule::constant(eta, m, epochs * m, rule, a.batch);
          r.svrg->validate();
          r.planned_ifo = a.warm_start + epochs * epoch_cost;
          r.schedule = r.svrg->describe();
          if (a.warm_start > 0) {
            r.schedule += " after " + std::to_string(a.warm_start) +
                          " SGD steps eta=" + format_real(*a.warm_eta);
          }
          break;
        }
        case AlgorithmKind::kGdSvrg: {
          const std::string sched = a.schedule.empty() ? "theoretical" : a.schedule;
          GdSvrgConfig cfg;
          cfg.constants = a.constants;
          SvrgSchedule inner;
          if (sched == "theoretical") {
            if (a.tau) {
              cfg.tau = *a.tau;
            } else if (problem.tau) {
              cfg.tau = *problem.tau;
            } else {
              throw ContractViolation("theoretical mode needs 'tau': the problem has no known one");
            }
            inner = theoretical_gd_svrg_schedule(n, L, cfg.tau, a.constants);
          } else if (sched == "constant") {
            require(a.eta && *a.eta > 0.0, "constant schedule needs a positive 'eta'");
            const std::size_t m = a.epoch_length.value_or(std::max<std::size_t>(1, n / 10));
            require(a.inner_epochs >= 1, "'inner_epochs' must be at least 1");
            inner = SvrgSchedule::constant(*a.eta, m, m * a.inner_epochs);
            cfg.inner = inner;
          } else {
            throw ContractViolation("unknown GD-SVRG schedule '" + sched +
                                    "' (theoretical | constant)");
          }
          const std::uint64_t outer_cost = inner.epochs() * (n + 2 * inner.epoch_length);
          const std::uint64_t fit = budget / outer_cost;
          cfg.outer_iterations = a.outer.value_or(fit);
          if (cfg.outer_iterations < 1 || cfg.outer_iterations > fit) {
            throw ContractViolation("budget of " + std::to_string(budget) +
                                    " IFO calls does not cover " +
                                    std::to_string(std::max<std::size_t>(1, cfg.outer_iterations)) +
                                    " outer iterations of " + std::to_string(outer_cost));
          }
          r.planned_ifo = cfg.outer_iterations * outer_cost;
          r.schedule = "K=" + std::to_string(cfg.outer_iterations) + " inner{" +
                       inner.describe() + "}";
          r.gd_svrg = cfg;
          break;
        }
        case AlgorithmKind::kMsvrg: {
          sigma_and_gap(a, r);
          const MsvrgStep probe = msvrg_step_size(n, L, 1, r.sigma, r.f_gap, a.constants);
          const std::size_t m = probe.epoch_length;
          require(m >= 1, "MSVRG epoch length floor(n / (3 mu)) is zero");
          const std::uint64_t epochs = budget / (n + 2 * m);
          require(epochs >= 1, "budget does not cover one MSVRG epoch");
          r.horizon = epochs * m;
          const MsvrgStep step = msvrg_step_size(n, L, r.horizon, r.sigma, r.f_gap, a.constants);
          r.planned_ifo = epochs * (n + 2 * m);
          r.schedule = std::string(step.branch == MsvrgBranch::kStochasticGradient
                                       ? "sgd-branch"
                                       : "svrg-branch") +
                       " eta=" + format_real(step.eta) + " m=" + std::to_string(m) +
                       " T=" + std::to_string(r.horizon);
          break;
        }
      }
    });
    out.push_back(std::move(r));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return out;
}

RunRecord execute(const ResolvedAlgorithm& r, const Problem& problem, std::uint64_t seed,
                  const RunOptions& options) {
  Oracle oracle(*problem.objective);
  const Vector& x0 = problem.initial_point;
  const AlgorithmSpec& a = r.spec;
  RunRecord record;
  switch (a.kind) {
    case AlgorithmKind::kSgd:
      record = run_sgd(oracle, x0, r.steps, *r.step_sizes, seed, options, a.batch);
      break;
    case AlgorithmKind::kGd:
      record = run_gd(oracle, x0, r.steps, (*r.step_sizes)(0), options);
      break;
    case AlgorithmKind::kSvrg: {
      RngStream rng(seed);
      Vector start = x0;
      std::uint64_t warm_updates = 0;
      if (a.warm_start > 0) {
        RunOptions quiet = options;
        quiet.checkpoints.enabled = false;
        RunRecord warm =
            run_sgd(oracle, x0, a.warm_start, StepSizes::constant(*a.warm_eta), rng, quiet);
        if (warm.status == RunStatus::kDiverged) {
          warm.notes.push_back("diverged during SGD warm start");
          record = std::move(warm);
          break;
        }
        start = warm.output;
        warm_updates = warm.updates;
      }
      record = run_svrg(oracle, start, *r.svrg, rng, options);
      record.updates += warm_updates;
      if (a.warm_start > 0) {
        record.notes.push_back("SGD warm start of " + std::to_string(a.warm_start) +
                               " steps precedes the first epoch");
      }
      break;
    }
    case AlgorithmKind::kGdSvrg:
      record = run_gd_svrg(oracle, x0, *r.gd_svrg, seed, options);
      break;
    case AlgorithmKind::kMsvrg:
      record = run_msvrg(oracle, x0, r.horizon, r.sigma, r.f_gap, seed, a.constants, options);
      break;
  }
  record.seed = seed;
  return record;
}

void write_run_csv(const RunRecord& record, std::ostream& out) {
  const bool diverged = record.status == RunStatus::kDiverged;
  out << kRunCsvHeader << (diverged ? ",status" : "") << '\n';
  bool marked = false;
  for (const auto& cp : record.checkpoints) {
    out << format_real(cp.effective_passes) << ',' << cp.ifo_count << ','
        << format_real(cp.f_value) << ',' << format_real(cp.grad_norm_sq);
    if (diverged) {
      const bool bad = record.diverged_at && cp.update_index >= *record.diverged_at;
      marked = marked || bad;
      out << ',' << (bad ? "diverged" : "ok");
    }
    out << '\n';
  }
  if (diverged && !marked) {
    const double passes = record.checkpoints.empty()
                              ? 0.0
                              : record.checkpoints.back().effective_passes *
                                    static_cast<double>(record.ifo_calls) /
                                    static_cast<double>(std::max<std::uint64_t>(
                                        1, record.checkpoints.back().ifo_count));
    out << format_real(passes) << ',' << record.ifo_calls << ",nan,nan,diverged\n";
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const Problem problem = build_problem(spec.problem);
  const std::vector<ResolvedAlgorithm> resolved = resolve_algorithms(spec, problem);

  std::error_code ec;
  std::filesystem::create_directories(spec.output_dir, ec);
  if (ec) {
    throw ContractViolation("cannot create output directory " + spec.output_dir.string() +
                            ": " + ec.message());
  }

  RunOptions options;
  options.checkpoints.every_updates = spec.checkpoint_every;

  struct Task {
    std::size_t algorithm;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < resolved.size(); ++a) {
    for (auto seed : spec.seeds) tasks.push_back({a, seed});
  }

  ExperimentResult result;
  result.runs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        const Task& t = tasks[k];
        RunArtifact& art = result.runs[k];
        art.algorithm = resolved[t.algorithm].spec.name;
        art.seed = t.seed;
        art.record = execute(resolved[t.algorithm], problem, t.seed, options);
        art.csv = spec.output_dir / (art.algorithm + "_seed" + std::to_string(t.seed) + ".csv");
        std::ofstream out(art.csv);
        if (!out) throw ContractViolation("cannot write " + art.csv.string());
        write_run_csv(art.record, out);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs,
                                                        static_cast<unsigned>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw Error(first_error);

  using nlohmann::ordered_json;
  ordered_json manifest;
  manifest["name"] = spec.name;
  manifest["rng_algorithm"] = std::string(RngStream::kAlgorithm);
  manifest["csv_header"] = kRunCsvHeader;
  const FiniteSum& f = *problem.objective;
  manifest["problem"] = {
      {"type", spec.problem.type},
      {"descriptor", f.describe()},
      {"n", f.size()},
      {"d", f.dimension()},
      {"seed", spec.problem.seed},
      {"smoothness", f.smoothness()},
      {"smoothness_is_bound", f.smoothness_is_bound()},
  };
  if (auto s = f.gradient_bound()) manifest["problem"]["gradient_bound"] = *s;
  if (auto v = f.optimal_value()) manifest["problem"]["optimal_value"] = *v;
  if (problem.tau) manifest["problem"]["tau"] = *problem.tau;
  manifest["budget_passes"] = spec.budget_passes;
  manifest["seeds"] = spec.seeds;

  ordered_json algorithms = ordered_json::array();
  for (const auto& r : resolved) {
    ordered_json entry = {{"name", r.spec.name},
                          {"kind", to_string(r.spec.kind)},
                          {"schedule", r.schedule},
                          {"planned_ifo", r.planned_ifo}};
    if (r.certificate) {
      const auto& c = *r.certificate;
      entry["certificate"] = {{"valid", c.certificate.valid()},
                              {"meets_bound", c.meets_bound()},
                              {"eta", c.certificate.eta},
                              {"beta", c.certificate.beta},
                              {"epoch_length", c.certificate.epoch_length},
                              {"batch_size", c.certificate.batch_size},
                              {"gamma_n", c.certificate.gamma_n},
                              {"bound", c.bound},
                              {"c0", c.certificate.c0}};
    } else {
      entry["certificate"] = nullptr;
    }
    if (!r.warnings.empty()) entry["warnings"] = r.warnings;
    algorithms.push_back(std::move(entry));
  }
  manifest["algorithms"] = std::move(algorithms);

  ordered_json runs = ordered_json::array();
  for (const auto& art : result.runs) {
    const RunRecord& rec = art.record;
    ordered_json entry = {{"algorithm", art.algorithm},
                          {"seed", art.seed},
                          {"file", art.csv.filename().string()},
                          {"status", to_string(rec.status)},
                          {"ifo_calls", rec.ifo_calls},
                          {"updates", rec.updates}};
    if (!rec.status_message.empty()) entry["status_message"] = rec.status_message;
    if (!rec.checkpoints.empty()) {
      entry["final_grad_norm_sq"] = rec.checkpoints.back().grad_norm_sq;
      entry["min_grad_norm_sq"] = rec.checkpoints.back().min_grad_norm_sq;
    }
    if (rec.step_size) entry["step_size"] = *rec.step_size;
    if (rec.output_position) {
      entry["output_position"] = {{"epoch", rec.output_position->first},
                                  {"step", rec.output_position->second}};
    }
    if (rec.msvrg_branch) {
      entry["msvrg_branch"] =
          *rec.msvrg_branch == MsvrgBranch::kStochasticGradient ? "sgd" : "svrg";
    }
    if (!rec.notes.empty()) entry["notes"] = rec.notes;
    runs.push_back(std::move(entry));
  }
  manifest["runs"] = std::move(runs);

  result.manifest = spec.output_dir / "manifest.json";
  std::ofstream out(result.manifest);
  if (!out) throw ContractViolation("cannot write " + result.manifest.string());
  out << manifest.dump(2) << '\n';
  return result;
}

}  // namespace ncvr
