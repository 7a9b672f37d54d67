#pragma once

#include <cstddef>
#include <cstdint>

namespace nfold {

/// Every numerical tolerance used by the library. Tests read the same values.
struct Tolerances {
  // linalg
  static constexpr double symmetry = 1e-8;         // ‖M − Mᵀ‖_max accepted by sym_eigen
  static constexpr double jacobi_offdiag = 1e-12;  // off-diagonal Frobenius mass / ‖M‖_F
  static constexpr int jacobi_max_sweeps = 100;
  static constexpr double eigen_clamp = 1e-12;     // negative Gram eigenvalues clamped to 0
  static constexpr double min_pd_eigenvalue = 1e-12;
  static constexpr double rank_ratio = 1e-10;      // least squares full-rank test

  // analysis
  static constexpr double theorem_slack = 1e-10;   // relative slack on theorem inequalities
  static constexpr double zero_column = 1e-14;
  static constexpr std::uint64_t default_subset_cap = 2'000'000;
  static constexpr std::uint64_t sandwich_default_limit = 1'000'000;

  // recovery
  static constexpr double early_stop = 1e-10;      // ‖r‖ ≤ early_stop·‖y‖

  // whitening hypotheses
  static constexpr double prop1_eta_limit = 0.5;
  static constexpr double prop2_eta_limit = 0.75;
};

}  // namespace nfold
