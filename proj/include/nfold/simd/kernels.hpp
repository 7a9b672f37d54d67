#pragma once

// Inner-loop kernels with a scalar reference and ISA-specific variants chosen
// once at startup. Every variant must agree with the scalar reference: axpy and
// scal bitwise, dot within summation-reordering round-off.

#include <cstddef>
#include <span>
#include <string_view>

namespace nfold::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  /// y += alpha·x (multiply then add, never fused)
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  void (*scal)(double alpha, double* x, std::size_t n) noexcept;
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Table used by the library. Picks the widest supported ISA unless the
/// environment variable NFOLD_SIMD=scalar forces the reference path.
const KernelTable& active() noexcept;
/// Overrides the active table; throws PreconditionError if unsupported.
void set_active(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scal(double alpha, std::span<double> x) noexcept {
  active().scal(alpha, x.data(), x.size());
}

}  // namespace nfold::simd
