#include "nfold/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nfold/constants.hpp"
#include "nfold/error.hpp"
#include "nfold/simd/kernels.hpp"

namespace nfold::linalg {
namespace {

// Cyclic Jacobi on a column-major n×n symmetric array. `v` (may be null)
// accumulates the rotations. Returns once the off-diagonal Frobenius mass is
// ≤ tol·‖A‖_F.
void jacobi(double* a, std::size_t n, double* v) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[j * n + i]; };

  double fro2 = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) fro2 += a[k] * a[k];
  const double target = Tolerances::jacobi_offdiag * std::sqrt(fro2);

  for (int sweep = 0; sweep <= Tolerances::jacobi_max_sweeps; ++sweep) {
    double off2 = 0.0;
    for (std::size_t q = 1; q < n; ++q)
      for (std::size_t p = 0; p < q; ++p) off2 += 2.0 * at(p, q) * at(p, q);
    if (std::sqrt(off2) <= target) return;
    if (sweep == Tolerances::jacobi_max_sweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = at(p, k) = c * akp - s * akq;
          at(k, q) = at(q, k) = s * akp + c * akq;
        }
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;

        if (v) {
          double* vp = v + p * n;
          double* vq = v + q * n;
          for (std::size_t k = 0; k < n; ++k) {
            const double x = vp[k];
            const double y = vq[k];
            vp[k] = c * x - s * y;
            vq[k] = s * x + c * y;
          }
        }
      }
    }
  }
  throw NumericalError("sym_eigen: Jacobi iteration did not converge in " +
                       std::to_string(Tolerances::jacobi_max_sweeps) + " sweeps");
}

Matrix symmetrized(const Matrix& m) {
  if (!m.is_square()) throw PreconditionError("sym_eigen: matrix is not square");
  if (m.empty()) throw PreconditionError("sym_eigen: empty matrix");
  const std::size_t n = m.rows();
  Matrix s(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (std::abs(m(i, j) - m(j, i)) > Tolerances::symmetry)
        throw PreconditionError("sym_eigen: matrix is not symmetric");
      s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return s;
}

bool exactly_symmetric(const Matrix& m) {
  if (!m.is_square()) return false;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

}  // namespace

SymEigen sym_eigen(const Matrix& m) {
  Matrix a = symmetrized(m);
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  jacobi(a.data().data(), n, v.data().data());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    std::ranges::copy(v.col(order[k]), out.vectors.col(k).begin());
  }
  return out;
}

void jacobi_inplace(std::span<double> a, std::size_t n) {
  if (a.size() != n * n) throw PreconditionError("jacobi_inplace: size mismatch");
  jacobi(a.data(), n, nullptr);
}

Vector sym_eigenvalues(const Matrix& m) {
  Matrix a = symmetrized(m);
  const std::size_t n = a.rows();
  jacobi(a.data().data(), n, nullptr);
  Vector vals(n);
  for (std::size_t k = 0; k < n; ++k) vals[k] = a(k, k);
  std::ranges::sort(vals, std::greater<>());
  return vals;
}

Vector singular_values(const Matrix& m) {
  if (m.empty()) return {};
  const Matrix g = m.rows() >= m.cols() ? gram(m) : outer_gram(m);
  Vector vals = sym_eigenvalues(g);
  for (double& v : vals) v = std::sqrt(std::max(v, 0.0));
  return vals;
}

double spectral_norm(const Matrix& m) {
  if (m.empty()) throw PreconditionError("spectral_norm: empty matrix");
  if (exactly_symmetric(m)) {
    const Vector vals = sym_eigenvalues(m);
    return std::max(std::abs(vals.front()), std::abs(vals.back()));
  }
  return singular_values(m).front();
}

Matrix inv_sqrt_sym(const Matrix& m) {
  const SymEigen e = sym_eigen(m);
  if (e.values.back() <= Tolerances::min_pd_eigenvalue)
    throw NumericalError("inv_sqrt_sym: matrix is not positive definite (smallest eigenvalue " +
                         std::to_string(e.values.back()) + ")");
  // R = Σ λ_k^{-1/2} v_k v_kᵀ = U Uᵀ with U = V diag(λ^{-1/4})
  Matrix u = e.vectors;
  for (std::size_t k = 0; k < u.cols(); ++k) simd::scal(std::pow(e.values[k], -0.25), u.col(k));
  return outer_gram(u);
}

QR householder_qr(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < cols) throw PreconditionError("householder_qr: more columns than rows");

  Matrix r = m;
  std::vector<Vector> reflectors(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    std::span<const double> x = r.col(k).subspan(k);
    const double xnorm = norm2(x);
    Vector v(x.begin(), x.end());
    if (xnorm == 0.0) continue;
    const double alpha = x[0] >= 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    simd::scal(1.0 / vnorm, v);
    for (std::size_t j = k; j < cols; ++j) {
      std::span<double> cj = r.col(j).subspan(k);
      simd::axpy(-2.0 * simd::dot(v, cj), v, cj);
    }
    reflectors[k] = std::move(v);
  }

  Matrix q(rows, cols);
  for (std::size_t k = 0; k < cols; ++k) q(k, k) = 1.0;
  for (std::size_t k = cols; k-- > 0;) {
    const Vector& v = reflectors[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      std::span<double> cj = q.col(j).subspan(k);
      simd::axpy(-2.0 * simd::dot(v, cj), v, cj);
    }
  }

  Matrix rr(cols, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i <= j; ++i) rr(i, j) = r(i, j);
  for (std::size_t k = 0; k < cols; ++k) {
    if (rr(k, k) < 0.0) {
      for (std::size_t j = 0; j < cols; ++j) rr(k, j) = -rr(k, j);
      simd::scal(-1.0, q.col(k));
    }
  }
  return {std::move(q), std::move(rr)};
}

Vector least_squares(const Matrix& m, std::span<const double> b) {
  if (b.size() != m.rows()) throw PreconditionError("least_squares: dimension mismatch");
  if (m.cols() == 0) throw PreconditionError("least_squares: no columns");
  if (m.rows() < m.cols()) throw NumericalError("least_squares: more unknowns than equations");

  const QR f = householder_qr(m);
  const std::size_t n = m.cols();
  double dmax = 0.0;
  double dmin = INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    dmax = std::max(dmax, std::abs(f.r(k, k)));
    dmin = std::min(dmin, std::abs(f.r(k, k)));
  }
  if (dmax == 0.0 || dmin <= Tolerances::rank_ratio * dmax)
    throw NumericalError("least_squares: matrix is rank deficient");

  Vector c = gemv_t(f.q, b);
  for (std::size_t k = n; k-- > 0;) {
    double s = c[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= f.r(k, j) * c[j];
    c[k] = s / f.r(k, k);
  }
  return c;
}

Vector gemv(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw PreconditionError("gemv: dimension mismatch");
  Vector y(m.rows(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (x[j] != 0.0) simd::axpy(x[j], m.col(j), y);
  return y;
}

Vector gemv_t(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.rows()) throw PreconditionError("gemv_t: dimension mismatch");
  Vector y(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) y[j] = simd::dot(m.col(j), x);
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (b(k, j) != 0.0) simd::axpy(b(k, j), a.col(k), c.col(j));
  return c;
}

Matrix gram(const Matrix& m) {
  const std::size_t p = m.cols();
  Matrix g(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= j; ++i) g(i, j) = g(j, i) = simd::dot(m.col(i), m.col(j));
  return g;
}

Matrix outer_gram(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix g(n, n);
  for (std::size_t k = 0; k < m.cols(); ++k) {
    std::span<const double> ck = m.col(k);
    for (std::size_t j = 0; j < n; ++j)
      if (ck[j] != 0.0) simd::axpy(ck[j], ck, g.col(j));
  }
  return g;
}

}  // namespace nfold::linalg
