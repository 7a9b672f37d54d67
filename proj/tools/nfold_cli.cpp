// nfold: command-line front end for the noise-folding library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "nfold/analysis.hpp"
#include "nfold/ensembles.hpp"
#include "nfold/error.hpp"
#include "nfold/harness.hpp"
#include "nfold/io.hpp"
#include "nfold/recovery.hpp"
#include "nfold/simd/kernels.hpp"
#include "nfold/whitening.hpp"

namespace {

using namespace nfold;

/// Either --matrix FILE or an ensemble recipe (--family, --n, --p|--r, --seed).
struct MatrixSource {
  std::string path;
  std::string family = "gaussian";
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t r = 0;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd, bool file_allowed = true) {
    if (file_allowed) cmd->add_option("--matrix", path, "Matrix text file");
    cmd->add_option("--family", family, "gaussian | bernoulli | sphere-columns | concat-orthobases");
    cmd->add_option("--n", n, "Rows");
    cmd->add_option("--p", p, "Columns");
    cmd->add_option("--r", r, "Number of bases (concat-orthobases, p = r n)");
    cmd->add_option("--seed", seed, "Generator seed (required when generating)");
  }

  Matrix load() const {
    if (!path.empty()) return io::load_matrix(path);
    if (!seed) throw ConfigError("--seed is required to generate a matrix (or pass --matrix)");
    if (n == 0) throw ConfigError("--n is required to generate a matrix");
    EnsembleSpec spec{parse_family(family), n, p, *seed};
    if (r != 0) {
      if (p != 0 && p != r * n) throw ConfigError("--p and --r disagree");
      spec.p = r * n;
    }
    if (spec.p == 0) throw ConfigError("--p (or --r) is required to generate a matrix");
    return generate(spec);
  }
};

void write_to(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("write failed: '" + path + "'");
}

std::string kv(const std::string& key, double v) { return key + "=" + io::format_real(v) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise folding in compressed sensing: ensembles, whitening, RIP/coherence checks, sweeps"};
  app.require_subcommand(1);
  std::string simd_choice = "auto";
  app.add_option("--simd", simd_choice, "Kernel variant: auto | scalar | avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // gen
  MatrixSource gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded measurement matrix");
  gen_src.attach(gen, false);
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // eta
  MatrixSource eta_src;
  std::optional<double> eta_t;
  auto* eta = app.add_subcommand("eta", "eta = ||I - (n/p) A A^T||_2 and the Gaussian bound");
  eta_src.attach(eta);
  eta->add_option("--bound-t", eta_t, "Also print 2sqrt(n/p) + n/p + 4t/sqrt(p)");

  // coherence
  MatrixSource coh_src;
  auto* coh = app.add_subcommand("coherence", "Mutual coherence of the columns");
  coh_src.attach(coh);

  // rip
  MatrixSource rip_src;
  std::size_t rip_s = 0;
  std::uint64_t rip_cap = Tolerances::default_subset_cap;
  unsigned rip_workers = 1;
  auto* rip = app.add_subcommand("rip", "Exhaustive RIP constants of order s");
  rip_src.attach(rip);
  rip->add_option("--s", rip_s, "Sparsity order")->required();
  rip->add_option("--cap", rip_cap, "Maximum number of subsets");
  rip->add_option("--workers", rip_workers, "Worker threads");

  // whiten
  MatrixSource wh_src;
  double wh_sigma = 0.0;
  double wh_sigma0 = 0.0;
  std::string wh_out_b, wh_out_w;
  auto* wh = app.add_subcommand("whiten", "Build the whitened system B = Q1^(-1/2) A");
  wh_src.attach(wh);
  wh->add_option("--sigma", wh_sigma, "Measurement noise std")->required();
  wh->add_option("--sigma0", wh_sigma0, "Signal noise std")->required();
  wh->add_option("--out-b", wh_out_b, "Write B to this file");
  wh->add_option("--out-w", wh_out_w, "Write W = Q1^(-1/2) to this file");

  // recover
  MatrixSource rec_src;
  std::string rec_y, rec_out, rec_alg = "omp";
  std::size_t rec_s = 0;
  auto* rec = app.add_subcommand("recover", "Sparse recovery by OMP or thresholding");
  rec_src.attach(rec);
  rec->add_option("--y", rec_y, "Observation vector file")->required();
  rec->add_option("--s", rec_s, "Sparsity budget")->required();
  rec->add_option("--algorithm", rec_alg, "omp | threshold");
  rec->add_option("--out", rec_out, "Write xhat here (summary then goes to stdout)");

  // sweep
  std::string sweep_cfg, sweep_out;
  unsigned sweep_workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Noise-folding Monte Carlo sweep, CSV output");
  sweep->add_option("--config", sweep_cfg, "Experiment config (key = value)")->required();
  sweep->add_option("--workers", sweep_workers, "Worker threads");
  sweep->add_option("--out", sweep_out, "CSV path (overrides output_path; default stdout)");

  // verify
  VerifyConfig vcfg;
  std::string verify_cfg;
  auto* verify = app.add_subcommand("verify", "Theorem verification suite (exit 3 on any failure)");
  verify->add_option("--config", verify_cfg,
                     "Config file; uses n, p, s, sigma, sigma0, subset_cap, trials (instances), master_seed (first seed)");
  verify->add_option("--n", vcfg.n, "Rows");
  verify->add_option("--p", vcfg.p, "Columns");
  verify->add_option("--s", vcfg.s, "RIP order");
  verify->add_option("--instances", vcfg.instances, "Number of seeded instances");
  verify->add_option("--first-seed", vcfg.first_seed, "Seed of the first instance");
  verify->add_option("--sigma", vcfg.sigma, "Measurement noise std");
  verify->add_option("--sigma0", vcfg.sigma0, "Signal noise std");
  verify->add_option("--draws", vcfg.covariance_draws, "Draws for covariance estimation");
  verify->add_option("--cap", vcfg.subset_cap, "Maximum subsets per RIP computation");
  verify->add_option("--workers", vcfg.workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simd_choice == "scalar") simd::set_active(simd::Isa::scalar);
    if (simd_choice == "avx2") simd::set_active(simd::Isa::avx2);

    if (*gen) {
      std::ostringstream os;
      io::write_matrix(os, gen_src.load());
      write_to(gen_out, os.str());
    } else if (*eta) {
      const Matrix a = eta_src.load();
      std::string out = kv("eta", compute_eta(a));
      if (eta_t) out += kv("bound", eta_gaussian_bound(a.rows(), a.cols(), *eta_t));
      std::cout << out;
    } else if (*coh) {
      std::cout << kv("coherence", coherence(coh_src.load()));
    } else if (*rip) {
      std::cout << to_key_value(rip_constants(rip_src.load(), rip_s, {rip_cap, rip_workers}));
    } else if (*wh) {
      const Matrix a = wh_src.load();
      const NoiseSpec noise{wh_sigma, wh_sigma0};
      const WhitenedSystem sys = whiten(a, noise);
      const FoldingFactor f = folding_gamma(wh_sigma, wh_sigma0, a.rows(), a.cols());
      std::string out = kv("gamma", sys.gamma) + kv("eta", sys.eta);
      if (f.degradation) out += kv("degradation", *f.degradation);
      std::cout << out;
      if (!wh_out_b.empty()) io::save_matrix(wh_out_b, sys.b);
      if (!wh_out_w.empty()) io::save_matrix(wh_out_w, sys.w);
    } else if (*rec) {
      const Matrix m = rec_src.load();
      const Vector y = io::load_vector(rec_y);
      const Algorithm alg = parse_algorithm(rec_alg);
      const RecoveryResult r = alg == Algorithm::omp ? omp(m, y, rec_s) : threshold_recover(m, y, rec_s);
      std::ostringstream vec;
      io::write_vector(vec, r.xhat);
      if (rec_out.empty()) {
        std::cout << vec.str();
      } else {
        write_to(rec_out, vec.str());
        std::ostringstream sup;
        for (std::size_t k = 0; k < r.support.size(); ++k) sup << (k ? " " : "") << r.support[k];
        std::cout << "support=" << sup.str() << "\n"
                  << kv("residual_norm", r.residual_norm) << "iterations=" << r.iterations << "\n";
      }
    } else if (*sweep) {
      const ExperimentConfig cfg = parse_config(sweep_cfg);
      const auto records = run_folding_sweep(cfg, sweep_workers);
      const std::string path = !sweep_out.empty() ? sweep_out : cfg.output_path;
      if (path.empty() || path == "-") {
        write_csv(std::cout, records);
      } else {
        emit_csv(records, path);
      }
    } else if (*verify) {
      if (!verify_cfg.empty()) {
        const ExperimentConfig cfg = parse_config(verify_cfg);
        vcfg.n = cfg.ensemble.n;
        vcfg.p = cfg.ensemble.p;
        vcfg.s = cfg.s;
        vcfg.sigma = cfg.sigma;
        vcfg.sigma0 = cfg.sigma0;
        vcfg.subset_cap = cfg.subset_cap;
        vcfg.instances = cfg.trials;
        vcfg.first_seed = cfg.master_seed;
      }
      const VerificationReport rep = run_verification_suite(vcfg);
      for (const std::string& line : rep.lines) std::cout << line << '\n';
      return rep.ok() ? kExitOk : kExitTheoremFailure;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
