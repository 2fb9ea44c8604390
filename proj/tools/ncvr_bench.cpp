#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncvr/bench/analysis.hpp"
#include "ncvr/bench/experiment.hpp"
#include "ncvr/bench/variance_check.hpp"
#include "ncvr/certificates/certificate.hpp"
#include "ncvr/errors.hpp"

namespace {

enum Exit {
  kOk = 0,
  kFailed = 1,      // the command ran and its check did not pass
  kInvalid = 2,     // bad arguments, spec or input files
  kNumeric = 3,     // overflow or non-finite values
  kInternal = 4,
};

int report(const char* kind, const std::string& message, int code) {
  std::cerr << "ncvr-bench: error[" << kind << "]: " << message << '\n';
  return code;
}

int cmd_run(const std::string& spec_path, const std::string& output, unsigned jobs) {
  ncvr::ExperimentSpec spec = ncvr::load_experiment(spec_path);
  if (!output.empty()) spec.output_dir = output;
  if (jobs > 0) spec.jobs = jobs;
  const ncvr::ExperimentResult result = ncvr::run_experiment(spec);
  for (const auto& run : result.runs) {
    std::cout << run.algorithm << " seed=" << run.seed
              << " status=" << ncvr::to_string(run.record.status)
              << " ifo=" << run.record.ifo_calls;
    if (!run.record.checkpoints.empty()) {
      std::cout << " final_grad_norm_sq=" << run.record.checkpoints.back().grad_norm_sq;
    }
    std::cout << " -> " << run.csv.string() << '\n';
    if (!run.record.status_message.empty()) {
      std::cout << "  " << run.record.status_message << '\n';
    }
  }
  std::cout << "manifest: " << result.manifest.string() << '\n';
  return kOk;
}

int cmd_certify(std::size_t n, double L, double alpha, std::size_t b, double mu, double nu,
                bool csv) {
  ncvr::UniversalConstants constants;
  constants.mu = mu;
  constants.nu = nu;
  const ncvr::CertificateReport report = ncvr::certify_schedule(n, L, alpha, b, constants);
  if (csv) {
    std::cout << ncvr::CertificateReport::csv_header() << '\n' << report.to_csv_row() << '\n';
  } else {
    std::cout << report.to_text();
  }
  return report.meets_bound() ? kOk : kFailed;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv_path,
                const std::string& format, double min_passes) {
  std::vector<ncvr::RunSeries> runs;
  for (const auto& dir : dirs) {
    auto loaded = ncvr::load_runs(dir);
    runs.insert(runs.end(), loaded.begin(), loaded.end());
  }
  ncvr::RateWindow window;
  window.min_passes = min_passes;
  const ncvr::ComparisonTable table =
      ncvr::compare(runs, ncvr::default_epsilon_ladder(), window);
  std::cout << (format == "csv" ? table.to_csv() : table.to_text());
  const std::string target =
      csv_path.empty() ? (std::filesystem::path(dirs.front()) / "comparison.csv").string()
                       : csv_path;
  std::ofstream out(target);
  if (!out) return report("io", "cannot write " + target, kInvalid);
  out << table.to_csv();
  return kOk;
}

int cmd_variance_check(const std::string& spec_path) {
  const ncvr::VarianceCheckSpec spec = ncvr::load_variance_check(spec_path);
  const ncvr::VarianceCheckResult result = ncvr::run_variance_check(spec);
  std::cout << result.to_text();
  return result.passed() ? kOk : kFailed;
}

int cmd_fit_rate(const std::string& csv_path, double min_passes, double max_passes) {
  const auto checkpoints = ncvr::read_run_csv(std::filesystem::path(csv_path));
  ncvr::RateWindow window;
  window.min_passes = min_passes;
  window.max_passes = max_passes;
  const ncvr::RateFit fit = ncvr::fit_rate(checkpoints, window);
  std::cout << "slope=" << fit.slope << " intercept=" << fit.intercept
            << " points=" << fit.points << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sum variance-reduction experiments and certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ncvr-bench 0.1.0");

  std::string spec_path;
  std::string output;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write CSVs plus a manifest");
  run->add_option("spec", spec_path, "Experiment spec file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output,
                  std::string("Output directory (default: $") + ncvr::kOutputDirEnv +
                      "/<name> or ncvr-output/<name>)");
  run->add_option("-j,--jobs", jobs, "Parallel runs (overrides jobs in the experiment file)");

  std::size_t n = 0;
  double L = 0.0;
  double alpha = 0.0;
  std::size_t b = 1;
  double mu = 0.25;
  double nu = 1.0 / 40.0;
  bool csv = false;
  auto* certify = app.add_subcommand("certify", "Evaluate the rate certificate of a theoretical schedule");
  certify->add_option("n", n, "Number of components")->required();
  certify->add_option("L", L, "Smoothness constant")->required();
  certify->add_option("alpha", alpha, "Step-size exponent in (0, 1]")->required();
  certify->add_option("b", b, "Mini-batch size")->required();
  certify->add_option("mu", mu, "Step-size constant")->required();
  certify->add_option("--nu", nu, "Constant in the gamma_n lower bound");
  certify->add_flag("--csv", csv, "Print a CSV row instead of text");

  std::vector<std::string> dirs;
  std::string compare_csv;
  std::string format = "text";
  double compare_min_passes = 1.0;
  auto* compare = app.add_subcommand("compare", "Tabulate runs listed in one or more manifests");
  compare->add_option("dir", dirs, "Experiment output directories")->required()->check(CLI::ExistingDirectory);
  compare->add_option("--csv", compare_csv, "CSV output path (default: <dir>/comparison.csv)");
  compare->add_option("--format", format, "Console format")->check(CLI::IsMember({"text", "csv"}));
  compare->add_option("--min-passes", compare_min_passes, "Rate fit window start");

  std::string variance_spec;
  auto* variance = app.add_subcommand("variance-check", "Check the variance bound on random point pairs");
  variance->add_option("spec", variance_spec, "Spec with [problem] and optional [variance]")
      ->required()
      ->check(CLI::ExistingFile);

  std::string rate_csv;
  double min_passes = 0.0;
  double max_passes = std::numeric_limits<double>::infinity();
  auto* fit = app.add_subcommand("fit-rate", "Fit log(min grad_norm_sq) against log(passes)");
  fit->add_option("csv", rate_csv, "Per-run CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--min-passes", min_passes, "Window start");
  fit->add_option("--max-passes", max_passes, "Window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report("usage", e.what(), kInvalid);
    std::cerr << "run with --help for usage\n";
    return kInvalid;
  }

  try {
    if (*run) return cmd_run(spec_path, output, jobs);
    if (*certify) return cmd_certify(n, L, alpha, b, mu, nu, csv);
    if (*compare) return cmd_compare(dirs, compare_csv, format, compare_min_passes);
    if (*variance) return cmd_variance_check(variance_spec);
    if (*fit) return cmd_fit_rate(rate_csv, min_passes, max_passes);
  } catch (const ncvr::ValidationError& e) {
    return report("validation", e.what(), kInvalid);
  } catch (const ncvr::ParseError& e) {
    return report("parse", e.what(), kInvalid);
  } catch (const ncvr::ContractViolation& e) {
    return report("contract", e.what(), kInvalid);
  } catch (const ncvr::NumericError& e) {
    return report("numeric", e.what(), kNumeric);
  } catch (const std::exception& e) {
    return report("internal", e.what(), kInternal);
  }
  return kInternal;
}
