#pragma once

// Philox4x64-10 counter-based generator (Salmon et al., Random123) plus the
// SplitMix64 finalizer for sub-seed derivation. Everything here is a pure
// function of (seed, position), so results do not depend on thread count or
// call interleaving across different streams.

#include <array>
#include <cstdint>
#include <limits>

namespace nfold::rng {

using Block = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

/// One Philox4x64 block with 10 rounds.
Block philox4x64_10(Block counter, Key key) noexcept;

/// SplitMix64 output function (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sub-seed for stream `index` of `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

/// Sequential view of a Philox stream: key {seed, 0}, counter 0, 1, 2, …
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed) noexcept : key_{seed, 0} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 4) {
      block_ = philox4x64_10({counter_++, 0, 0, 0}, key_);
      pos_ = 0;
    }
    return block_[pos_++];
  }

  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box–Muller; draws come in pairs, the second cached.
  double normal() noexcept;

  /// Unbiased integer in [0, bound) by Lemire's multiply-and-reject. bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  Key key_;
  std::uint64_t counter_ = 0;
  Block block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nfold::rng
