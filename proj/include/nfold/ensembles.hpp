#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "nfold/matrix.hpp"

namespace nfold {

enum class Family { gaussian, bernoulli, sphere_columns, concat_orthobases };

std::string_view to_string(Family f) noexcept;
/// Accepts gaussian, bernoulli, sphere-columns, concat-orthobases.
Family parse_family(std::string_view name);

/// Recipe for a reproducible n×p measurement matrix.
struct EnsembleSpec {
  Family family = Family::gaussian;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

/// i.i.d. N(0, 1/n) entries.
Matrix gen_gaussian(std::size_t n, std::size_t p, std::uint64_t seed);
/// i.i.d. ±1/√n entries with equal probability.
Matrix gen_bernoulli(std::size_t n, std::size_t p, std::uint64_t seed);
/// Independent columns uniform on the unit sphere of ℝⁿ.
Matrix gen_sphere_columns(std::size_t n, std::size_t p, std::uint64_t seed);
/// [A₁ … A_r], each A_k the Q factor (diag R ≥ 0) of a seeded Gaussian n×n
/// draw; block k uses sub-seed k of `seed`.
Matrix gen_concat_orthobases(std::size_t n, std::size_t r, std::uint64_t seed);

/// Dispatches on spec.family. For concat-orthobases p must be a multiple of n.
Matrix generate(const EnsembleSpec& spec);

}  // namespace nfold
