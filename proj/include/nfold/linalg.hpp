#pragma once

#include <span>
#include <vector>

#include "nfold/matrix.hpp"

namespace nfold::linalg {

struct SymEigen {
  Vector values;   ///< non-increasing
  Matrix vectors;  ///< orthonormal, column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. The input is
/// symmetrized as (M + Mᵀ)/2 first.
/// Throws PreconditionError if M is not square or ‖M − Mᵀ‖_max > 1e-8,
/// NumericalError if 100 sweeps do not converge.
SymEigen sym_eigen(const Matrix& m);

/// Eigenvalues only, non-increasing. Same contract as sym_eigen.
Vector sym_eigenvalues(const Matrix& m);

/// In-place Jacobi on a column-major n×n symmetric array with no symmetry
/// check or allocation. Eigenvalues end up on the diagonal, unsorted. Meant
/// for the many tiny Gram blocks of subset enumeration.
void jacobi_inplace(std::span<double> a, std::size_t n);

/// Largest singular value. Exactly symmetric inputs go through sym_eigen,
/// everything else through the smaller Gram matrix.
double spectral_norm(const Matrix& m);

/// Singular values, non-increasing, min(rows, cols) of them, from the
/// eigenvalues of the smaller Gram matrix.
Vector singular_values(const Matrix& m);

/// R = M^(−1/2) for symmetric positive definite M. Throws NumericalError when
/// the smallest eigenvalue is ≤ 1e-12.
Matrix inv_sqrt_sym(const Matrix& m);

/// Householder QR of a tall matrix (rows ≥ cols). Thin Q, upper triangular R,
/// diag(R) ≥ 0.
struct QR {
  Matrix q;
  Matrix r;
};
QR householder_qr(const Matrix& m);

/// argmin ‖M c − b‖₂ via Householder QR. Throws NumericalError when
/// min |R_kk| ≤ 1e-10 · max |R_kk| (rank deficient) and PreconditionError on
/// shape mismatch or rows < cols.
Vector least_squares(const Matrix& m, std::span<const double> b);

// Dense products routed through the SIMD kernels.

/// M x
Vector gemv(const Matrix& m, std::span<const double> x);
/// Mᵀ x
Vector gemv_t(const Matrix& m, std::span<const double> x);
/// A B
Matrix matmul(const Matrix& a, const Matrix& b);
/// Mᵀ M (cols × cols)
Matrix gram(const Matrix& m);
/// M Mᵀ (rows × rows)
Matrix outer_gram(const Matrix& m);

}  // namespace nfold::linalg
