#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nfold/constants.hpp"
#include "nfold/ensembles.hpp"
#include "nfold/matrix.hpp"

namespace nfold {

enum class Algorithm { omp, threshold };
enum class ModelKind { standard, prenoise, prenoise_whitened };

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(ModelKind m) noexcept;
Algorithm parse_algorithm(std::string_view name);

/// One noise-folding experiment. The matrix seed is derived from master_seed,
/// as is every trial's seed (see trial_seed).
struct ExperimentConfig {
  EnsembleSpec ensemble;
  std::size_t s = 0;
  double amplitude = 1.0;
  double sigma = 0.0;
  double sigma0 = 0.0;
  std::size_t trials = 1;
  Algorithm algorithm = Algorithm::omp;
  bool whiten = true;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::uint64_t subset_cap = Tolerances::default_subset_cap;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses flat `key = value` lines; `#` starts a comment. Required keys:
/// family, n, p (or r), s, amplitude, sigma, sigma0, trials, algorithm,
/// master_seed. Unknown keys, duplicates and malformed lines raise ConfigError
/// naming the line number or key.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);
/// Writes a config that parse_config_text reads back unchanged.
std::string format_config(const ExperimentConfig& cfg);
/// Throws ConfigError for an inconsistent config.
void validate(const ExperimentConfig& cfg);

struct TrialRecord {
  std::size_t trial = 0;
  ModelKind model = ModelKind::standard;
  double eta = 0.0;
  double gamma = 0.0;
  double squared_error = 0.0;
  bool support_recovered = false;
};

inline constexpr std::string_view kCsvHeader = "trial,model,eta,gamma,squared_error,support_recovered";

/// Stream seeds of one trial. The signal and the noise draws use independent
/// sub-streams; the three models of a trial share the same noise seed.
struct TrialSeeds {
  std::uint64_t signal;
  std::uint64_t noise;
};
TrialSeeds trial_seed(std::uint64_t master_seed, std::size_t trial) noexcept;
std::uint64_t matrix_seed(std::uint64_t master_seed) noexcept;

/// The measurement matrix described by cfg.ensemble with the derived seed.
Matrix build_matrix(const ExperimentConfig& cfg);

/// Runs every trial under the standard model, the pre-noise model recovered
/// with A, and (if cfg.whiten) the whitened pre-noise model recovered with B.
/// Records are sorted by (trial, model); identical for any worker count.
std::vector<TrialRecord> run_folding_sweep(const ExperimentConfig& cfg, unsigned workers = 1);

/// Standard model y = M x + w with w ~ N(0, noise_std² I) on the given matrix,
/// using the same signal and measurement-noise streams as run_folding_sweep.
/// Returns the squared error of each trial.
std::vector<double> run_standard_control(const ExperimentConfig& cfg, const Matrix& m,
                                         double noise_std, unsigned workers = 1);

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);

/// Seeded Gaussian instances checked against the RIP and coherence transfer
/// theorems, plus covariance, η-concentration and hypothesis-gate checks.
struct VerifyConfig {
  std::size_t n = 16;
  std::size_t p = 1024;
  std::size_t s = 2;
  std::uint64_t first_seed = 1;
  std::size_t instances = 20;
  double sigma = 1.0;
  double sigma0 = 1.0;
  std::uint64_t subset_cap = Tolerances::default_subset_cap;
  std::size_t covariance_draws = 100000;
  double eta_bound_t = 3.0;
  unsigned workers = 1;
};

struct VerificationReport {
  std::vector<std::string> lines;
  std::size_t theorem_checks = 0;
  std::size_t theorem_failures = 0;
  std::size_t out_of_hypothesis = 0;
  std::size_t warnings = 0;  ///< statistical checks outside tolerance (not theorems)

  bool ok() const noexcept { return theorem_failures == 0; }
};

VerificationReport run_verification_suite(const VerifyConfig& cfg);

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitTheoremFailure = 3,
};

}  // namespace nfold
