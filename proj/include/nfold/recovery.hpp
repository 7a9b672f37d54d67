#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nfold/matrix.hpp"
#include "nfold/model.hpp"

namespace nfold {

struct RecoveryResult {
  Vector xhat;                       ///< length p, zero off support
  std::vector<std::size_t> support;  ///< in selection order
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  /// OMP stopped because the next column made the selection rank deficient;
  /// the result holds the fit on the support chosen before that.
  bool rank_deficient_stop = false;
};

/// Orthogonal matching pursuit with normalized scores |M_iᵀ r| / ‖M_i‖,
/// ties to the lowest index, least-squares refit each iteration. Stops after s
/// selections or once ‖r‖ ≤ 1e-10‖y‖.
RecoveryResult omp(const Matrix& m, std::span<const double> y, std::size_t s);

/// One-shot thresholding: keep the s largest |M_iᵀ y| / ‖M_i‖ (ties to the
/// lowest index) and fit them by least squares.
RecoveryResult threshold_recover(const Matrix& m, std::span<const double> y, std::size_t s);

/// ‖xhat − x‖₂²
double squared_error(std::span<const double> xhat, const SparseSignal& x);
double squared_error(std::span<const double> a, std::span<const double> b);

}  // namespace nfold
