#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "nfold/matrix.hpp"
#include "nfold/model.hpp"

namespace nfold {

/// γ = σ² + (p/n)σ₀², the variance of the white noise in the equivalent model.
struct FoldingFactor {
  double gamma = 0.0;
  /// γ/σ², the SNR degradation; empty when σ = 0.
  std::optional<double> degradation;
  /// 1 + (p/n)(σ₀²/σ²), same quantity computed the other way; empty when σ = 0.
  std::optional<double> degradation_ratio_form;
};

/// Throws PreconditionError if n or p is zero, a level is negative, or both are zero.
FoldingFactor folding_gamma(double sigma, double sigma0, std::size_t n, std::size_t p);

/// η = ‖I − (n/p) A Aᵀ‖₂.
double compute_eta(const Matrix& a);

/// 2√(n/p) + n/p + 4t/√p. Requires 0 < t ≤ √n and p ≥ n.
double eta_gaussian_bound(std::size_t n, std::size_t p, double t);

/// The equivalent white-noise system y′ = B x + u with cov(u) = γ I.
struct WhitenedSystem {
  Matrix b;  ///< W A
  Matrix w;  ///< Q₁^{-1/2}, Q₁ = Q/γ
  double gamma = 0.0;
  double eta = 0.0;
};

/// Builds W = (Q/γ)^{-1/2} and B = W A. Throws NumericalError when Q is
/// singular (σ = 0 with rank-deficient A Aᵀ).
WhitenedSystem whiten(const Matrix& a, const NoiseSpec& noise);

/// W y.
Vector apply_whitening(const WhitenedSystem& sys, std::span<const double> y);

/// η/(1−η), η ∈ [0, 1).
double eta1(double eta);
/// (1−η)^{-1/2} − 1, η ∈ [0, 1).
double eta3(double eta);
/// (2√(1−η) − 1)^{-2} − 1, η ∈ [0, 3/4).
///
/// The companion remark "η₂ < 5η for η < 1/2" only holds up to η ≈ 0.36;
/// at η = 0.4 this returns 2.3155… > 2. The exact formula is what is used.
double eta2(double eta);

}  // namespace nfold
