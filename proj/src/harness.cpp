#include "nfold/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "nfold/analysis.hpp"
#include "nfold/error.hpp"
#include "nfold/io.hpp"
#include "nfold/linalg.hpp"
#include "nfold/model.hpp"
#include "nfold/parallel.hpp"
#include "nfold/recovery.hpp"
#include "nfold/rng.hpp"
#include "nfold/whitening.hpp"

namespace nfold {

std::string_view to_string(Algorithm a) noexcept {
  return a == Algorithm::omp ? "omp" : "threshold";
}

std::string_view to_string(ModelKind m) noexcept {
  switch (m) {
    case ModelKind::standard: return "standard";
    case ModelKind::prenoise: return "prenoise";
    case ModelKind::prenoise_whitened: return "prenoise-whitened";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "omp") return Algorithm::omp;
  if (name == "threshold") return Algorithm::threshold;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected omp or threshold)");
}

// ---------------------------------------------------------------------------
// config

namespace {

constexpr std::string_view kKeys[] = {"family", "n",      "p",     "r",          "s",
                                      "amplitude", "sigma", "sigma0", "trials", "algorithm",
                                      "whiten", "master_seed", "output_path", "subset_cap"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t to_uint(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double to_real(const std::string& key, std::string_view v) {
  try {
    return io::parse_real(v);
  } catch (const ConfigError&) {
    throw ConfigError("key '" + key + "': expected a finite real, got '" + std::string(v) + "'");
  }
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + std::string(v) + "'");
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (std::ranges::find(kKeys, key) == std::end(kKeys))
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  auto required = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("missing required key '") + key + "'");
    return it->second;
  };
  auto optional = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
  };

  ExperimentConfig cfg;
  cfg.ensemble.family = parse_family(required("family"));
  cfg.ensemble.n = to_uint("n", required("n"));
  const auto p = optional("p");
  const auto r = optional("r");
  if (!p && !r) throw ConfigError("missing required key 'p' (or 'r')");
  if (r) cfg.ensemble.p = to_uint("r", *r) * cfg.ensemble.n;
  if (p) {
    const std::uint64_t pv = to_uint("p", *p);
    if (r && pv != cfg.ensemble.p) throw ConfigError("keys 'p' and 'r' disagree (p must equal r*n)");
    cfg.ensemble.p = pv;
  }
  cfg.s = to_uint("s", required("s"));
  cfg.amplitude = to_real("amplitude", required("amplitude"));
  cfg.sigma = to_real("sigma", required("sigma"));
  cfg.sigma0 = to_real("sigma0", required("sigma0"));
  cfg.trials = to_uint("trials", required("trials"));
  cfg.algorithm = parse_algorithm(required("algorithm"));
  cfg.master_seed = to_uint("master_seed", required("master_seed"));
  if (const auto w = optional("whiten")) cfg.whiten = to_bool("whiten", *w);
  if (const auto o = optional("output_path")) cfg.output_path = *o;
  if (const auto c = optional("subset_cap")) cfg.subset_cap = to_uint("subset_cap", *c);
  cfg.ensemble.seed = matrix_seed(cfg.master_seed);
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "family = " << to_string(cfg.ensemble.family) << '\n'
     << "n = " << cfg.ensemble.n << '\n'
     << "p = " << cfg.ensemble.p << '\n'
     << "s = " << cfg.s << '\n'
     << "amplitude = " << io::format_real(cfg.amplitude) << '\n'
     << "sigma = " << io::format_real(cfg.sigma) << '\n'
     << "sigma0 = " << io::format_real(cfg.sigma0) << '\n'
     << "trials = " << cfg.trials << '\n'
     << "algorithm = " << to_string(cfg.algorithm) << '\n'
     << "whiten = " << (cfg.whiten ? "true" : "false") << '\n'
     << "master_seed = " << cfg.master_seed << '\n'
     << "subset_cap = " << cfg.subset_cap << '\n';
  if (!cfg.output_path.empty()) os << "output_path = " << cfg.output_path << '\n';
  return os.str();
}

void validate(const ExperimentConfig& cfg) {
  const auto& e = cfg.ensemble;
  if (e.n == 0 || e.p == 0) throw ConfigError("n and p must be positive");
  if (e.family == Family::concat_orthobases && e.p % e.n != 0)
    throw ConfigError("concat-orthobases needs p to be a multiple of n");
  if (cfg.s == 0 || cfg.s > std::min(e.n, e.p)) throw ConfigError("s must satisfy 1 <= s <= min(n, p)");
  if (!(cfg.amplitude > 0.0)) throw ConfigError("amplitude must be positive");
  if (!(cfg.sigma >= 0.0) || !(cfg.sigma0 >= 0.0)) throw ConfigError("sigma and sigma0 must be >= 0");
  if (cfg.sigma == 0.0 && cfg.sigma0 == 0.0) throw ConfigError("sigma and sigma0 cannot both be zero");
  if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
  if (cfg.subset_cap == 0) throw ConfigError("subset_cap must be positive");
}

// ---------------------------------------------------------------------------
// sweep

TrialSeeds trial_seed(std::uint64_t master_seed, std::size_t trial) noexcept {
  const std::uint64_t t = rng::derive_seed(master_seed, trial + 1);
  return {rng::derive_seed(t, 0), rng::derive_seed(t, 1)};
}

std::uint64_t matrix_seed(std::uint64_t master_seed) noexcept { return rng::derive_seed(master_seed, 0); }

Matrix build_matrix(const ExperimentConfig& cfg) {
  EnsembleSpec spec = cfg.ensemble;
  spec.seed = matrix_seed(cfg.master_seed);
  return generate(spec);
}

namespace {

RecoveryResult recover(Algorithm alg, const Matrix& m, std::span<const double> y, std::size_t s) {
  return alg == Algorithm::omp ? omp(m, y, s) : threshold_recover(m, y, s);
}

bool same_support(std::vector<std::size_t> found, const SparseSignal& x) {
  std::ranges::sort(found);
  return found == x.support;
}

}  // namespace

std::vector<TrialRecord> run_folding_sweep(const ExperimentConfig& cfg, unsigned workers) {
  validate(cfg);
  const Matrix a = build_matrix(cfg);
  const double eta = compute_eta(a);
  const double gamma = folding_gamma(cfg.sigma, cfg.sigma0, a.rows(), a.cols()).gamma;
  const NoiseSpec noise{cfg.sigma, cfg.sigma0};
  std::optional<WhitenedSystem> sys;
  if (cfg.whiten) sys = whiten(a, noise);

  const std::size_t per_trial = cfg.whiten ? 3 : 2;
  std::vector<TrialRecord> records(cfg.trials * per_trial);
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    const TrialSeeds seeds = trial_seed(cfg.master_seed, t);
    const SparseSignal x = gen_sparse_signal(a.cols(), cfg.s, cfg.amplitude, seeds.signal);
    auto record = [&](ModelKind kind, const RecoveryResult& r) {
      return TrialRecord{t, kind, eta, gamma, squared_error(r.xhat, x), same_support(r.support, x)};
    };

    const MeasurementDraw standard = measure_standard(a, x, {cfg.sigma, 0.0}, seeds.noise);
    records[t * per_trial] = record(ModelKind::standard, recover(cfg.algorithm, a, standard.y, cfg.s));

    const MeasurementDraw pre = measure_prenoise(a, x, noise, seeds.noise);
    records[t * per_trial + 1] = record(ModelKind::prenoise, recover(cfg.algorithm, a, pre.y, cfg.s));

    if (sys) {
      const Vector yw = apply_whitening(*sys, pre.y);
      records[t * per_trial + 2] =
          record(ModelKind::prenoise_whitened, recover(cfg.algorithm, sys->b, yw, cfg.s));
    }
  });
  return records;
}

std::vector<double> run_standard_control(const ExperimentConfig& cfg, const Matrix& m,
                                         double noise_std, unsigned workers) {
  validate(cfg);
  std::vector<double> errors(cfg.trials);
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    const TrialSeeds seeds = trial_seed(cfg.master_seed, t);
    const SparseSignal x = gen_sparse_signal(m.cols(), cfg.s, cfg.amplitude, seeds.signal);
    const MeasurementDraw d = measure_standard(m, x, {noise_std, 0.0}, seeds.noise);
    errors[t] = squared_error(recover(cfg.algorithm, m, d.y, cfg.s).xhat, x);
  });
  return errors;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    os << r.trial << ',' << to_string(r.model) << ',' << io::format_real(r.eta) << ','
       << io::format_real(r.gamma) << ',' << io::format_real(r.squared_error) << ','
       << (r.support_recovered ? 1 : 0) << '\n';
  }
}

void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(os, records);
  os.flush();
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// verification suite

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double relative_frobenius(const Matrix& estimate, const Matrix& truth) {
  return frobenius_norm(estimate - truth) / frobenius_norm(truth);
}

}  // namespace

VerificationReport run_verification_suite(const VerifyConfig& cfg) {
  VerificationReport rep;
  const NoiseSpec noise{cfg.sigma, cfg.sigma0};
  Prop1Options p1;
  p1.rip.subset_cap = cfg.subset_cap;
  p1.rip.workers = cfg.workers;

  auto theorem = [&](const std::string& label, bool met, bool holds, const std::string& detail) {
    if (!met) {
      ++rep.out_of_hypothesis;
      rep.lines.push_back(label + " out-of-hypothesis " + detail);
      return;
    }
    ++rep.theorem_checks;
    if (!holds) ++rep.theorem_failures;
    rep.lines.push_back(label + (holds ? " holds " : " FAILED ") + detail);
  };

  const bool bound_applicable =
      cfg.p >= cfg.n && cfg.eta_bound_t > 0.0 && cfg.eta_bound_t <= std::sqrt(static_cast<double>(cfg.n));
  const double bound = bound_applicable ? eta_gaussian_bound(cfg.n, cfg.p, cfg.eta_bound_t) : 0.0;
  std::size_t within_bound = 0;

  for (std::size_t k = 0; k < cfg.instances; ++k) {
    const std::uint64_t seed = cfg.first_seed + k;
    const Matrix a = gen_gaussian(cfg.n, cfg.p, seed);
    const std::string tag = "seed=" + std::to_string(seed);

    const Prop1Result r1 = verify_prop1(a, noise, cfg.s, p1);
    theorem("prop1 " + tag, r1.hypothesis_met(), r1.holds(),
            "eta=" + fmt(r1.eta) + " alpha_a=" + fmt(r1.rip_a.alpha) + " alpha_b=" + fmt(r1.rip_b.alpha) +
                " beta_a=" + fmt(r1.rip_a.beta) + " beta_b=" + fmt(r1.rip_b.beta) +
                " sandwich_violations=" + std::to_string(r1.sandwich_violations));

    const Prop2Result r2 = verify_prop2(a, noise);
    theorem("prop2 " + tag, r2.verdict.hypothesis_met, r2.verdict.holds,
            "eta=" + fmt(r2.eta) + " mu_a=" + fmt(r2.mu_a) + " mu_b=" + fmt(r2.mu_b) +
                " bound=" + fmt(r2.verdict.bound_rhs));

    if (bound_applicable && r1.eta <= bound) ++within_bound;
  }

  if (bound_applicable && cfg.instances > 0) {
    const double frac = static_cast<double>(within_bound) / static_cast<double>(cfg.instances);
    const bool ok = frac >= 0.9;
    if (!ok) ++rep.warnings;
    rep.lines.push_back(std::string("eta-bound ") + (ok ? "ok" : "WARN") + " t=" + fmt(cfg.eta_bound_t) +
                        " bound=" + fmt(bound) + " fraction=" + fmt(frac));
  }

  // Exact special case: concatenated orthonormal bases.
  {
    const std::size_t r = cfg.p % cfg.n == 0 ? cfg.p / cfg.n : 4;
    const Matrix a = gen_concat_orthobases(cfg.n, r, cfg.first_seed);
    const double eta = compute_eta(a);
    const WhitenedSystem sys = whiten(a, noise);
    const double diff = max_abs_diff(sys.b, a);
    const bool ok = eta <= 1e-10 && diff <= 1e-8;
    if (!ok) ++rep.warnings;
    rep.lines.push_back(std::string("orthobases ") + (ok ? "ok" : "WARN") + " r=" + std::to_string(r) +
                        " eta=" + fmt(eta) + " max|B-A|=" + fmt(diff));
  }

  // Effective and whitened noise covariance.
  if (cfg.covariance_draws >= 2) {
    const Matrix a = gen_gaussian(cfg.n, cfg.p, cfg.first_seed);
    const Matrix q = effective_noise_covariance(a, noise);
    const double gamma = folding_gamma(cfg.sigma, cfg.sigma0, cfg.n, cfg.p).gamma;
    const double err_v =
        relative_frobenius(estimate_noise_covariance(a, noise, cfg.covariance_draws, cfg.first_seed, false), q);
    const Matrix qu = estimate_noise_covariance(a, noise, cfg.covariance_draws, cfg.first_seed, true);
    const double err_u = frobenius_norm(qu - gamma * Matrix::identity(cfg.n)) /
                         (gamma * std::sqrt(static_cast<double>(cfg.n)));
    const bool ok = err_v <= 0.05 && err_u <= 0.05;
    if (!ok) ++rep.warnings;
    rep.lines.push_back(std::string("covariance ") + (ok ? "ok" : "WARN") + " draws=" +
                        std::to_string(cfg.covariance_draws) + " rel_err_v=" + fmt(err_v) +
                        " rel_err_u=" + fmt(err_u));
  }

  // Hypothesis gate: a nearly square Gaussian matrix has η well above 3/4.
  {
    const Matrix a = gen_gaussian(8, 10, cfg.first_seed);
    const Prop2Result r2 = verify_prop2(a, noise);
    theorem("gate prop2 n=8 p=10", r2.verdict.hypothesis_met, r2.verdict.holds, "eta=" + fmt(r2.eta));
  }

  rep.lines.push_back("summary theorem_checks=" + std::to_string(rep.theorem_checks) +
                      " failures=" + std::to_string(rep.theorem_failures) +
                      " out_of_hypothesis=" + std::to_string(rep.out_of_hypothesis) +
                      " warnings=" + std::to_string(rep.warnings));
  return rep;
}

}  // namespace nfold
