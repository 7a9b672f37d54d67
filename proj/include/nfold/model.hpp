#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nfold/matrix.hpp"

namespace nfold {

/// s-sparse signal with sorted support.
struct SparseSignal {
  std::size_t p = 0;
  std::vector<std::size_t> support;
  Vector values;  ///< amplitude at support[k]

  std::size_t sparsity() const noexcept { return support.size(); }
  Vector dense() const;
};

/// Standard deviations of the measurement noise w (sigma) and signal noise z (sigma0).
struct NoiseSpec {
  double sigma = 0.0;
  double sigma0 = 0.0;
};

/// One realization of the forward model. v = w + A z and y = A x + v.
struct MeasurementDraw {
  Vector y;
  Vector z;  ///< length p
  Vector w;  ///< length n
  Vector v;  ///< length n
};

/// Seed streams used by the measurement draws: w and z never share a stream,
/// so switching sigma0 on or off leaves w untouched.
inline constexpr std::uint64_t kMeasurementStream = 0;
inline constexpr std::uint64_t kSignalNoiseStream = 1;

/// Support uniform without replacement, values ±amplitude with fair signs.
SparseSignal gen_sparse_signal(std::size_t p, std::size_t s, double amplitude, std::uint64_t seed);

/// y = A x + w, w ~ N(0, σ² I); z = 0, v = w.
MeasurementDraw measure_standard(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise,
                                 std::uint64_t seed);

/// y = A (x + z) + w with z ~ N(0, σ₀² I) independent of w. Computed as
/// v = w + A z, y = A x + v.
MeasurementDraw measure_prenoise(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise,
                                 std::uint64_t seed);

/// Q = σ² I + σ₀² A Aᵀ.
Matrix effective_noise_covariance(const Matrix& a, const NoiseSpec& noise);

/// Fills `out` with i.i.d. N(0, stddev²) draws from the stream of `seed`.
void fill_normal(std::span<double> out, double stddev, std::uint64_t seed);

}  // namespace nfold
