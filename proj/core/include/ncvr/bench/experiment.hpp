#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncvr/bench/config.hpp"
#include "ncvr/certificates/certificate.hpp"
#include "ncvr/oracle.hpp"
#include "ncvr/optimizers/optimizers.hpp"

namespace ncvr {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "NCVR_OUTPUT_DIR";
/// $NCVR_OUTPUT_DIR when set and non-empty, otherwise "ncvr-output".
std::filesystem::path default_output_dir();

/// Header of every per-run CSV. Diverged runs append a `status` column.
inline constexpr const char* kRunCsvHeader =
    "effective_passes,ifo_calls,f_value,grad_norm_sq";

struct ProblemSpec {
  /// quadratic | logistic | libsvm | mlp
  std::string type = "quadratic";
  std::size_t n = 100;
  std::size_t d = 10;
  std::uint64_t seed = 1;

  // quadratic
  double lambda = 0.05;
  double smoothness = 1.0;

  // logistic / libsvm
  double regularization = 0.01;
  std::optional<double> row_norm;
  double teacher_norm = 3.0;
  std::filesystem::path data;

  // mlp (synthetic data unless `data` is set)
  std::size_t classes = 3;
  std::size_t hidden = 16;
  double l2 = 1e-3;
  double separation = 6.0;

  /// zeros | gaussian | glorot; empty picks gaussian for quadratics, glorot
  /// for MLPs and zeros otherwise.
  std::string init;
  double init_scale = 1.0;
};

struct Problem {
  std::shared_ptr<const FiniteSum> objective;
  Vector initial_point;
  /// Gradient dominance constant, when known.
  std::optional<double> tau;
};

Problem build_problem(const ProblemSpec& spec);

enum class AlgorithmKind { kSgd, kGd, kSvrg, kGdSvrg, kMsvrg };

std::string to_string(AlgorithmKind kind);

struct AlgorithmSpec {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::kSgd;
  /// sgd: constant | sqrt_t | t_inverse. svrg, gd_svrg: theoretical | constant.
  std::string schedule;
  std::optional<double> eta;
  double decay = 0.0;
  std::size_t batch = 1;

  double alpha = 2.0 / 3.0;
  UniversalConstants constants;
  std::optional<std::size_t> epoch_length;
  /// last | average
  std::string snapshot = "last";
  /// SGD iterations run before SVRG, sharing the ledger and random stream.
  std::uint64_t warm_start = 0;
  std::optional<double> warm_eta;

  std::optional<std::size_t> outer;
  std::optional<double> tau;
  std::size_t inner_epochs = 1;

  std::optional<double> sigma;
  std::optional<double> f_gap;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ProblemSpec problem;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds{1};
  /// IFO budget in effective passes.
  double budget_passes = 10.0;
  /// 0 keeps each algorithm's natural checkpoint cadence.
  std::uint64_t checkpoint_every = 0;
  std::filesystem::path output_dir;
  unsigned jobs = 1;
};

/// Reads [experiment], [problem] and [algorithm NAME] sections. Collects
/// every problem it finds and throws ValidationError listing them all.
ExperimentSpec parse_experiment(ConfigFile& config);
ExperimentSpec load_experiment(const std::filesystem::path& path);
ProblemSpec parse_problem(ConfigSection& section, std::vector<std::string>& issues);

/// An algorithm entry turned into concrete run parameters.
struct ResolvedAlgorithm {
  AlgorithmSpec spec;
  std::string schedule;
  /// Mandatory for theoretical SVRG; advisory for constant SVRG.
  std::optional<CertificateReport> certificate;
  std::vector<std::string> warnings;
  std::uint64_t planned_ifo = 0;

  std::uint64_t steps = 0;  // SGD updates or GD steps
  std::optional<StepSizes> step_sizes;
  std::optional<SvrgSchedule> svrg;
  std::optional<GdSvrgConfig> gd_svrg;
  std::uint64_t horizon = 0;  // MSVRG T
  double sigma = 0.0;
  double f_gap = 0.0;
};

/// Throws ValidationError when any entry cannot be scheduled within the
/// budget or fails its certificate.
std::vector<ResolvedAlgorithm> resolve_algorithms(const ExperimentSpec& spec,
                                                  const Problem& problem);

/// Executes one resolved entry with the given seed on a fresh oracle.
RunRecord execute(const ResolvedAlgorithm& algorithm, const Problem& problem,
                  std::uint64_t seed, const RunOptions& options);

struct RunArtifact {
  std::string algorithm;
  std::uint64_t seed = 0;
  RunRecord record;
  std::filesystem::path csv;
};

struct ExperimentResult {
  std::vector<RunArtifact> runs;
  std::filesystem::path manifest;
};

/// One CSV per (algorithm, seed) named NAME_seedS.csv plus manifest.json.
ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_run_csv(const RunRecord& record, std::ostream& out);

}  // namespace ncvr
