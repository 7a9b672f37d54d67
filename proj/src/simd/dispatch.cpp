#include <atomic>
#include <cstdlib>
#include <string_view>

#include "nfold/error.hpp"
#include "nfold/simd/kernels.hpp"

namespace nfold::simd {

#ifdef NFOLD_HAVE_AVX2
const KernelTable* avx2_kernels_impl() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#ifdef NFOLD_HAVE_AVX2
  return avx2_kernels_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(NFOLD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* table_for(Isa isa) noexcept {
  if (!cpu_supports(isa)) return nullptr;
  return isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
}

const KernelTable* pick_default() noexcept {
  if (const char* env = std::getenv("NFOLD_SIMD"); env && std::string_view(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const KernelTable* t = table_for(Isa::avx2)) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{pick_default()};
  return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) throw PreconditionError("requested SIMD variant is not available on this CPU");
  slot().store(t, std::memory_order_relaxed);
}

}  // namespace nfold::simd
