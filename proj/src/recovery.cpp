#include "nfold/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nfold/constants.hpp"
#include "nfold/error.hpp"
#include "nfold/linalg.hpp"
#include "nfold/simd/kernels.hpp"

namespace nfold {
namespace {

Vector column_norms(const Matrix& m) {
  Vector norms(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    norms[j] = norm2(m.col(j));
    if (norms[j] <= Tolerances::zero_column)
      throw PreconditionError("recovery: column " + std::to_string(j) + " is zero");
  }
  return norms;
}

void check_args(const Matrix& m, std::span<const double> y, std::size_t s) {
  if (y.size() != m.rows()) throw PreconditionError("recovery: y length differs from row count");
  if (s < 1 || s > std::min(m.rows(), m.cols()))
    throw PreconditionError("recovery: need 1 <= s <= min(n, p)");
}

// Residual y − M_S c.
Vector residual(const Matrix& m, std::span<const std::size_t> support, std::span<const double> coef,
                std::span<const double> y) {
  Vector r(y.begin(), y.end());
  for (std::size_t k = 0; k < support.size(); ++k) simd::axpy(-coef[k], m.col(support[k]), r);
  return r;
}

void scatter(RecoveryResult& res, std::size_t p, std::span<const double> coef) {
  res.xhat.assign(p, 0.0);
  for (std::size_t k = 0; k < res.support.size(); ++k) res.xhat[res.support[k]] = coef[k];
}

}  // namespace

RecoveryResult omp(const Matrix& m, std::span<const double> y, std::size_t s) {
  check_args(m, y, s);
  const Vector norms = column_norms(m);
  const double stop = Tolerances::early_stop * norm2(y);

  RecoveryResult res;
  std::vector<bool> chosen(m.cols(), false);
  Vector coef;
  Vector r(y.begin(), y.end());
  res.residual_norm = norm2(r);

  while (res.support.size() < s && res.residual_norm > stop) {
    std::size_t best = m.cols();
    double best_score = -1.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (chosen[j]) continue;
      const double score = std::abs(simd::dot(m.col(j), r)) / norms[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }

    std::vector<std::size_t> trial = res.support;
    trial.push_back(best);
    Vector trial_coef;
    try {
      trial_coef = linalg::least_squares(m.select_columns(trial), y);
    } catch (const NumericalError&) {
      res.rank_deficient_stop = true;
      break;
    }
    chosen[best] = true;
    res.support = std::move(trial);
    coef = std::move(trial_coef);
    r = residual(m, res.support, coef, y);
    res.residual_norm = norm2(r);
    ++res.iterations;
  }

  scatter(res, m.cols(), coef);
  return res;
}

RecoveryResult threshold_recover(const Matrix& m, std::span<const double> y, std::size_t s) {
  check_args(m, y, s);
  const Vector norms = column_norms(m);

  Vector scores(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) scores[j] = std::abs(simd::dot(m.col(j), y)) / norms[j];
  std::vector<std::size_t> order(m.cols());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RecoveryResult res;
  res.support.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s));
  const Vector coef = linalg::least_squares(m.select_columns(res.support), y);
  res.residual_norm = norm2(residual(m, res.support, coef, y));
  res.iterations = 1;
  scatter(res, m.cols(), coef);
  return res;
}

double squared_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("squared_error: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double squared_error(std::span<const double> xhat, const SparseSignal& x) {
  if (xhat.size() != x.p) throw PreconditionError("squared_error: dimension mismatch");
  return squared_error(xhat, x.dense());
}

}  // namespace nfold
