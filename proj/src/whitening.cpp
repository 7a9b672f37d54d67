#include "nfold/whitening.hpp"

#include <cmath>
#include <string>

#include "nfold/error.hpp"
#include "nfold/linalg.hpp"

namespace nfold {
namespace {

void require_domain(double eta, double upper, const char* who) {
  if (!(eta >= 0.0 && eta < upper))
    throw PreconditionError(std::string(who) + ": eta = " + std::to_string(eta) +
                            " outside [0, " + std::to_string(upper) + ")");
}

}  // namespace

FoldingFactor folding_gamma(double sigma, double sigma0, std::size_t n, std::size_t p) {
  if (n == 0 || p == 0) throw PreconditionError("folding_gamma: n and p must be positive");
  if (!(sigma >= 0.0) || !(sigma0 >= 0.0) || !std::isfinite(sigma) || !std::isfinite(sigma0))
    throw PreconditionError("folding_gamma: noise levels must be finite and non-negative");
  if (sigma == 0.0 && sigma0 == 0.0)
    throw PreconditionError("folding_gamma: sigma and sigma0 are both zero");

  const double ratio = static_cast<double>(p) / static_cast<double>(n);
  const double var = sigma * sigma;
  const double var0 = sigma0 * sigma0;
  FoldingFactor f;
  f.gamma = var + ratio * var0;
  if (sigma > 0.0) {
    f.degradation = f.gamma / var;
    f.degradation_ratio_form = 1.0 + ratio * (var0 / var);
  }
  return f;
}

double compute_eta(const Matrix& a) {
  if (a.empty()) throw PreconditionError("compute_eta: empty matrix");
  const double scale = static_cast<double>(a.rows()) / static_cast<double>(a.cols());
  Matrix m = -scale * linalg::outer_gram(a);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += 1.0;
  const Vector ev = linalg::sym_eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double eta_gaussian_bound(std::size_t n, std::size_t p, double t) {
  if (n == 0 || p < n) throw PreconditionError("eta_gaussian_bound: need 1 <= n <= p");
  const double dn = static_cast<double>(n);
  const double dp = static_cast<double>(p);
  if (!(t > 0.0 && t <= std::sqrt(dn)))
    throw PreconditionError("eta_gaussian_bound: need 0 < t <= sqrt(n)");
  return 2.0 * std::sqrt(dn / dp) + dn / dp + 4.0 * t / std::sqrt(dp);
}

WhitenedSystem whiten(const Matrix& a, const NoiseSpec& noise) {
  const FoldingFactor fold = folding_gamma(noise.sigma, noise.sigma0, a.rows(), a.cols());
  const Matrix q1 = (1.0 / fold.gamma) * effective_noise_covariance(a, noise);
  WhitenedSystem sys;
  try {
    sys.w = linalg::inv_sqrt_sym(q1);
  } catch (const NumericalError&) {
    throw NumericalError("whiten: noise covariance Q is singular (sigma = 0 and A Aᵀ rank deficient)");
  }
  sys.b = linalg::matmul(sys.w, a);
  sys.gamma = fold.gamma;
  sys.eta = compute_eta(a);
  return sys;
}

Vector apply_whitening(const WhitenedSystem& sys, std::span<const double> y) {
  if (y.size() != sys.w.cols()) throw PreconditionError("apply_whitening: dimension mismatch");
  return linalg::gemv(sys.w, y);
}

double eta1(double eta) {
  require_domain(eta, 1.0, "eta1");
  return eta / (1.0 - eta);
}

double eta3(double eta) {
  require_domain(eta, 1.0, "eta3");
  return 1.0 / std::sqrt(1.0 - eta) - 1.0;
}

double eta2(double eta) {
  require_domain(eta, 0.75, "eta2");
  const double d = 2.0 * std::sqrt(1.0 - eta) - 1.0;
  return 1.0 / (d * d) - 1.0;
}

}  // namespace nfold
