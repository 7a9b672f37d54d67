#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nfold/constants.hpp"
#include "nfold/matrix.hpp"
#include "nfold/model.hpp"

namespace nfold {

/// Brute-force RIP certificate of order s: extreme eigenvalues of A_Λᵀ A_Λ
/// over every size-s column subset Λ.
struct RipReport {
  std::size_t s = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::size_t> argmin_subset;
  std::vector<std::size_t> argmax_subset;
  std::uint64_t subsets_examined = 0;
};

struct RipOptions {
  std::uint64_t subset_cap = Tolerances::default_subset_cap;
  unsigned workers = 1;
};

/// C(p, s), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t p, std::uint64_t s) noexcept;

/// Lexicographic unranking: the subset at position `rank` among all size-s
/// subsets of {0..p-1}.
std::vector<std::size_t> unrank_subset(std::uint64_t rank, std::size_t p, std::size_t s);

/// Exhaustive enumeration in lexicographic order, split across workers. Ties
/// resolve to the first subset in lexicographic order, so the report is the
/// same for any worker count. Throws PreconditionError if s is out of range or
/// C(p, s) exceeds the cap.
RipReport rip_constants(const Matrix& a, std::size_t s, const RipOptions& opt = {});

/// max_{i≠j} |A_iᵀ A_j| / (‖A_i‖‖A_j‖). Throws PreconditionError for p < 2 or
/// a column with norm ≤ 1e-14.
double coherence(const Matrix& a);

/// Outcome of one theorem inequality lhs ≤ rhs.
struct PropositionVerdict {
  bool hypothesis_met = false;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  bool holds = false;
  double margin = 0.0;  ///< rhs − lhs

  static PropositionVerdict check(double lhs, double rhs);
  static PropositionVerdict out_of_hypothesis();
};

struct Prop1Options {
  RipOptions rip;
  /// Per-subset sandwich pass. Runs when enabled and C(p, s) ≤ sandwich_limit.
  bool sandwich = true;
  std::uint64_t sandwich_limit = Tolerances::sandwich_default_limit;
};

/// RIP transfer under whitening: α_s(B) ≥ (1−η₁)α_s(A), β_s(B) ≤ (1+η₁)β_s(A),
/// and for every subset (1−η₁)λ_min(A_Λ) ≤ λ_min(B_Λ), λ_max(B_Λ) ≤ (1+η₁)λ_max(A_Λ).
/// Only checked when η < 1/2.
struct Prop1Result {
  double eta = 0.0;
  double eta1 = 0.0;
  RipReport rip_a;
  RipReport rip_b;
  PropositionVerdict lower;  ///< (1−η₁)α(A) ≤ α(B)
  PropositionVerdict upper;  ///< β(B) ≤ (1+η₁)β(A)
  bool sandwich_checked = false;
  std::uint64_t sandwich_violations = 0;

  bool hypothesis_met() const noexcept { return lower.hypothesis_met; }
  /// True when out of hypothesis, or when every checked inequality holds.
  bool holds() const noexcept;
};

Prop1Result verify_prop1(const Matrix& a, const NoiseSpec& noise, std::size_t s,
                         const Prop1Options& opt = {});

/// Coherence transfer: μ(B) ≤ (1+η₂)μ(A), checked when η < 3/4.
struct Prop2Result {
  double eta = 0.0;
  double eta2 = 0.0;
  double mu_a = 0.0;
  double mu_b = 0.0;
  PropositionVerdict verdict;
};

Prop2Result verify_prop2(const Matrix& a, const NoiseSpec& noise);

/// Sample covariance (mean removed, divisor N−1) of N draws of v = w + A z,
/// or of u = W v when `whitened`. Draw streams derive from `seed`.
Matrix estimate_noise_covariance(const Matrix& a, const NoiseSpec& noise, std::size_t draws,
                                 std::uint64_t seed, bool whitened);

/// key=value block, one pair per line.
std::string to_key_value(const RipReport& r);
std::string to_key_value(const PropositionVerdict& v, const std::string& prefix = "");
std::string to_key_value(const Prop1Result& r);
std::string to_key_value(const Prop2Result& r);

}  // namespace nfold
