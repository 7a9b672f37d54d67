#include "nfold/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nfold/error.hpp"
#include "nfold/linalg.hpp"
#include "nfold/rng.hpp"
#include "nfold/simd/kernels.hpp"

namespace nfold {
namespace {

void require_dims(std::size_t n, std::size_t p, const char* who) {
  if (n == 0 || p == 0) throw PreconditionError(std::string(who) + ": dimensions must be positive");
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::bernoulli: return "bernoulli";
    case Family::sphere_columns: return "sphere-columns";
    case Family::concat_orthobases: return "concat-orthobases";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::gaussian, Family::bernoulli, Family::sphere_columns,
                   Family::concat_orthobases}) {
    if (name == to_string(f)) return f;
  }
  throw ConfigError("unknown ensemble family '" + std::string(name) + "'");
}

Matrix gen_gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_dims(n, p, "gen_gaussian");
  rng::Philox gen(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix a(n, p);
  for (double& v : a.data()) v = scale * gen.normal();
  return a;
}

Matrix gen_bernoulli(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_dims(n, p, "gen_bernoulli");
  rng::Philox gen(seed);
  const double mag = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix a(n, p);
  std::uint64_t bits = 0;
  int left = 0;
  for (double& v : a.data()) {
    if (left == 0) {
      bits = gen();
      left = 64;
    }
    v = (bits & 1U) ? mag : -mag;
    bits >>= 1;
    --left;
  }
  return a;
}

Matrix gen_sphere_columns(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_dims(n, p, "gen_sphere_columns");
  rng::Philox gen(seed);
  Matrix a(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    std::span<double> c = a.col(j);
    double nrm = 0.0;
    while (nrm == 0.0) {
      for (double& v : c) v = gen.normal();
      nrm = norm2(c);
    }
    simd::scal(1.0 / nrm, c);
  }
  return a;
}

Matrix gen_concat_orthobases(std::size_t n, std::size_t r, std::uint64_t seed) {
  require_dims(n, r, "gen_concat_orthobases");
  Matrix a(n, n * r);
  for (std::size_t k = 0; k < r; ++k) {
    const Matrix q = linalg::householder_qr(gen_gaussian(n, n, rng::derive_seed(seed, k))).q;
    for (std::size_t j = 0; j < n; ++j) std::ranges::copy(q.col(j), a.col(k * n + j).begin());
  }
  return a;
}

Matrix generate(const EnsembleSpec& spec) {
  switch (spec.family) {
    case Family::gaussian: return gen_gaussian(spec.n, spec.p, spec.seed);
    case Family::bernoulli: return gen_bernoulli(spec.n, spec.p, spec.seed);
    case Family::sphere_columns: return gen_sphere_columns(spec.n, spec.p, spec.seed);
    case Family::concat_orthobases:
      if (spec.n == 0 || spec.p == 0 || spec.p % spec.n != 0)
        throw PreconditionError("concat-orthobases: p must be a positive multiple of n");
      return gen_concat_orthobases(spec.n, spec.p / spec.n, spec.seed);
  }
  throw PreconditionError("generate: unknown family");
}

}  // namespace nfold
