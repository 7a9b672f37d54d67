#include "nfold/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nfold/error.hpp"
#include "nfold/io.hpp"
#include "nfold/linalg.hpp"
#include "nfold/parallel.hpp"
#include "nfold/rng.hpp"
#include "nfold/simd/kernels.hpp"
#include "nfold/whitening.hpp"

namespace nfold {
namespace {

constexpr std::size_t kPrecomputeGramMaxCols = 2048;

// Entries of AᵀA, either precomputed or on demand. Both paths evaluate the
// same dot kernel on the same columns.
class GramSource {
 public:
  explicit GramSource(const Matrix& a) : a_(a) {
    if (a.cols() <= kPrecomputeGramMaxCols) full_ = linalg::gram(a);
  }
  double operator()(std::size_t i, std::size_t j) const {
    return full_.empty() ? simd::dot(a_.col(i), a_.col(j)) : full_(i, j);
  }

 private:
  const Matrix& a_;
  Matrix full_;
};

struct Extremes {
  double min;
  double max;
};

// λ_min / λ_max of the s×s block of G indexed by `idx`. `scratch` holds s².
Extremes block_extremes(const GramSource& g, const std::size_t* idx, std::size_t s,
                        std::vector<double>& scratch) {
  if (s == 1) {
    const double v = g(idx[0], idx[0]);
    return {v, v};
  }
  for (std::size_t c = 0; c < s; ++c)
    for (std::size_t r = 0; r <= c; ++r) scratch[c * s + r] = scratch[r * s + c] = g(idx[r], idx[c]);
  linalg::jacobi_inplace(scratch, s);
  Extremes e{scratch[0], scratch[0]};
  for (std::size_t k = 1; k < s; ++k) {
    e.min = std::min(e.min, scratch[k * s + k]);
    e.max = std::max(e.max, scratch[k * s + k]);
  }
  return e;
}

// Advances to the next subset in lexicographic order; false after the last.
bool next_subset(std::vector<std::size_t>& idx, std::size_t p) {
  const std::size_t s = idx.size();
  std::size_t k = s;
  while (k > 0 && idx[k - 1] == p - s + (k - 1)) --k;
  if (k == 0) return false;
  ++idx[k - 1];
  for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

// Visits subsets with lexicographic rank in [begin, end).
template <class Fn>
void for_each_subset(std::size_t p, std::size_t s, std::uint64_t begin, std::uint64_t end, Fn&& fn) {
  if (begin >= end) return;
  std::vector<std::size_t> idx = unrank_subset(begin, p, s);
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    fn(idx.data(), rank);
    if (!next_subset(idx, p)) break;
  }
}

struct Range {
  std::uint64_t begin;
  std::uint64_t end;
};

std::vector<Range> partition(std::uint64_t total, unsigned workers) {
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, total));
  std::vector<Range> out;
  for (std::uint64_t c = 0; c < chunks; ++c) out.push_back({total * c / chunks, total * (c + 1) / chunks});
  return out;
}

void check_subset_args(const Matrix& a, std::size_t s, std::uint64_t total, std::uint64_t cap) {
  if (a.empty()) throw PreconditionError("rip_constants: empty matrix");
  if (s < 1 || s > std::min(a.rows(), a.cols()))
    throw PreconditionError("rip_constants: need 1 <= s <= min(n, p)");
  if (total > cap)
    throw PreconditionError("rip_constants: C(p, s) = " + std::to_string(total) +
                            " subsets exceeds the cap of " + std::to_string(cap));
}

bool within_slack(double lhs, double rhs) {
  return lhs <= rhs + Tolerances::theorem_slack * std::abs(rhs);
}

}  // namespace

std::uint64_t binomial(std::uint64_t p, std::uint64_t s) noexcept {
  if (s > p) return 0;
  s = std::min(s, p - s);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 0; i < s; ++i) {
    c = c * (p - i) / (i + 1);
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::size_t> unrank_subset(std::uint64_t rank, std::size_t p, std::size_t s) {
  if (rank >= binomial(p, s)) throw PreconditionError("unrank_subset: rank out of range");
  std::vector<std::size_t> idx(s);
  std::size_t c = 0;
  for (std::size_t k = 0; k < s; ++k) {
    for (;; ++c) {
      const std::uint64_t count = binomial(p - c - 1, s - k - 1);
      if (rank < count) break;
      rank -= count;
    }
    idx[k] = c++;
  }
  return idx;
}

RipReport rip_constants(const Matrix& a, std::size_t s, const RipOptions& opt) {
  const std::uint64_t total = binomial(a.cols(), s);
  check_subset_args(a, s, total, opt.subset_cap);

  struct Local {
    double min = std::numeric_limits<double>::infinity();
    std::uint64_t min_rank = 0;
    double max = -std::numeric_limits<double>::infinity();
    std::uint64_t max_rank = 0;
  };

  const GramSource g(a);
  const std::vector<Range> ranges = partition(total, opt.workers);
  std::vector<Local> locals(ranges.size());
  parallel_for(ranges.size(), opt.workers, [&](std::size_t c) {
    std::vector<double> scratch(s * s);
    Local& loc = locals[c];
    for_each_subset(a.cols(), s, ranges[c].begin, ranges[c].end,
                    [&](const std::size_t* idx, std::uint64_t rank) {
                      const Extremes e = block_extremes(g, idx, s, scratch);
                      if (e.min < loc.min) loc = {e.min, rank, loc.max, loc.max_rank};
                      if (e.max > loc.max) {
                        loc.max = e.max;
                        loc.max_rank = rank;
                      }
                    });
  });

  // Chunks are in rank order, so strict comparisons keep the first extremum.
  Local merged = locals.front();
  for (std::size_t c = 1; c < locals.size(); ++c) {
    if (locals[c].min < merged.min) {
      merged.min = locals[c].min;
      merged.min_rank = locals[c].min_rank;
    }
    if (locals[c].max > merged.max) {
      merged.max = locals[c].max;
      merged.max_rank = locals[c].max_rank;
    }
  }

  RipReport r;
  r.s = s;
  r.alpha = std::max(merged.min, 0.0);
  r.beta = merged.max;
  r.argmin_subset = unrank_subset(merged.min_rank, a.cols(), s);
  r.argmax_subset = unrank_subset(merged.max_rank, a.cols(), s);
  r.subsets_examined = total;
  return r;
}

double coherence(const Matrix& a) {
  const std::size_t p = a.cols();
  if (p < 2) throw PreconditionError("coherence: need at least two columns");
  Matrix unit = a;
  for (std::size_t j = 0; j < p; ++j) {
    const double nrm = norm2(unit.col(j));
    if (nrm <= Tolerances::zero_column)
      throw PreconditionError("coherence: column " + std::to_string(j) + " is zero");
    simd::scal(1.0 / nrm, unit.col(j));
  }
  double mu = 0.0;
  for (std::size_t j = 1; j < p; ++j)
    for (std::size_t i = 0; i < j; ++i) mu = std::max(mu, std::abs(simd::dot(unit.col(i), unit.col(j))));
  return std::min(mu, 1.0);
}

PropositionVerdict PropositionVerdict::check(double lhs, double rhs) {
  return {true, lhs, rhs, within_slack(lhs, rhs), rhs - lhs};
}

PropositionVerdict PropositionVerdict::out_of_hypothesis() {
  return {false, 0.0, 0.0, true, 0.0};
}

bool Prop1Result::holds() const noexcept {
  if (!hypothesis_met()) return true;
  return lower.holds && upper.holds && sandwich_violations == 0;
}

Prop1Result verify_prop1(const Matrix& a, const NoiseSpec& noise, std::size_t s,
                         const Prop1Options& opt) {
  Prop1Result res;
  res.eta = compute_eta(a);
  if (res.eta >= Tolerances::prop1_eta_limit) {
    res.lower = res.upper = PropositionVerdict::out_of_hypothesis();
    return res;
  }
  res.eta1 = eta1(res.eta);
  const WhitenedSystem sys = whiten(a, noise);
  res.rip_a = rip_constants(a, s, opt.rip);
  res.rip_b = rip_constants(sys.b, s, opt.rip);
  res.lower = PropositionVerdict::check((1.0 - res.eta1) * res.rip_a.alpha, res.rip_b.alpha);
  res.upper = PropositionVerdict::check(res.rip_b.beta, (1.0 + res.eta1) * res.rip_a.beta);

  const std::uint64_t total = res.rip_a.subsets_examined;
  if (opt.sandwich && total <= opt.sandwich_limit) {
    res.sandwich_checked = true;
    const GramSource ga(a);
    const GramSource gb(sys.b);
    const double lo = 1.0 - res.eta1;
    const double hi = 1.0 + res.eta1;
    const std::vector<Range> ranges = partition(total, opt.rip.workers);
    std::vector<std::uint64_t> violations(ranges.size(), 0);
    parallel_for(ranges.size(), opt.rip.workers, [&](std::size_t c) {
      std::vector<double> scratch(s * s);
      for_each_subset(a.cols(), s, ranges[c].begin, ranges[c].end,
                      [&](const std::size_t* idx, std::uint64_t) {
                        const Extremes ea = block_extremes(ga, idx, s, scratch);
                        const Extremes eb = block_extremes(gb, idx, s, scratch);
                        if (!within_slack(lo * ea.min, eb.min) || !within_slack(eb.max, hi * ea.max))
                          ++violations[c];
                      });
    });
    for (std::uint64_t v : violations) res.sandwich_violations += v;
  }
  return res;
}

Prop2Result verify_prop2(const Matrix& a, const NoiseSpec& noise) {
  Prop2Result res;
  res.eta = compute_eta(a);
  res.mu_a = coherence(a);
  if (res.eta >= Tolerances::prop2_eta_limit) {
    res.verdict = PropositionVerdict::out_of_hypothesis();
    return res;
  }
  res.eta2 = eta2(res.eta);
  res.mu_b = coherence(whiten(a, noise).b);
  res.verdict = PropositionVerdict::check(res.mu_b, (1.0 + res.eta2) * res.mu_a);
  return res;
}

Matrix estimate_noise_covariance(const Matrix& a, const NoiseSpec& noise, std::size_t draws,
                                 std::uint64_t seed, bool whitened) {
  if (draws < 2) throw PreconditionError("estimate_noise_covariance: need at least 2 draws");
  if (!(noise.sigma >= 0.0) || !(noise.sigma0 >= 0.0))
    throw PreconditionError("estimate_noise_covariance: negative noise level");
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  Matrix w_transform;
  if (whitened) w_transform = whiten(a, noise).w;

  rng::Philox gen_w(rng::derive_seed(seed, kMeasurementStream));
  rng::Philox gen_z(rng::derive_seed(seed, kSignalNoiseStream));
  Vector z(p);
  Vector v(n);
  Vector sum(n, 0.0);
  Matrix outer(n, n);
  for (std::size_t d = 0; d < draws; ++d) {
    for (double& x : v) x = noise.sigma * gen_w.normal();
    if (noise.sigma0 > 0.0) {
      for (double& x : z) x = noise.sigma0 * gen_z.normal();
      simd::axpy(1.0, linalg::gemv(a, z), v);
    }
    const Vector sample = whitened ? linalg::gemv(w_transform, v) : v;
    simd::axpy(1.0, sample, sum);
    for (std::size_t j = 0; j < n; ++j) simd::axpy(sample[j], sample, outer.col(j));
  }

  const double count = static_cast<double>(draws);
  Matrix cov(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      cov(i, j) = (outer(i, j) - sum[i] * sum[j] / count) / (count - 1.0);
  return cov;
}

namespace {

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(v[k]);
  }
  return out;
}

}  // namespace

std::string to_key_value(const RipReport& r) {
  std::ostringstream os;
  os << "s=" << r.s << '\n'
     << "alpha=" << io::format_real(r.alpha) << '\n'
     << "beta=" << io::format_real(r.beta) << '\n'
     << "argmin_subset=" << join(r.argmin_subset) << '\n'
     << "argmax_subset=" << join(r.argmax_subset) << '\n'
     << "subsets_examined=" << r.subsets_examined << '\n';
  return os.str();
}

std::string to_key_value(const PropositionVerdict& v, const std::string& prefix) {
  std::ostringstream os;
  os << prefix << "hypothesis_met=" << (v.hypothesis_met ? "true" : "false") << '\n'
     << prefix << "bound_lhs=" << io::format_real(v.bound_lhs) << '\n'
     << prefix << "bound_rhs=" << io::format_real(v.bound_rhs) << '\n'
     << prefix << "holds=" << (v.holds ? "true" : "false") << '\n'
     << prefix << "margin=" << io::format_real(v.margin) << '\n';
  return os.str();
}

std::string to_key_value(const Prop1Result& r) {
  std::ostringstream os;
  os << "eta=" << io::format_real(r.eta) << '\n' << "eta1=" << io::format_real(r.eta1) << '\n';
  if (r.hypothesis_met()) {
    os << "alpha_a=" << io::format_real(r.rip_a.alpha) << '\n'
       << "beta_a=" << io::format_real(r.rip_a.beta) << '\n'
       << "alpha_b=" << io::format_real(r.rip_b.alpha) << '\n'
       << "beta_b=" << io::format_real(r.rip_b.beta) << '\n'
       << "subsets_examined=" << r.rip_a.subsets_examined << '\n';
  }
  os << to_key_value(r.lower, "lower.") << to_key_value(r.upper, "upper.")
     << "sandwich_checked=" << (r.sandwich_checked ? "true" : "false") << '\n'
     << "sandwich_violations=" << r.sandwich_violations << '\n'
     << "holds=" << (r.holds() ? "true" : "false") << '\n';
  return os.str();
}

std::string to_key_value(const Prop2Result& r) {
  std::ostringstream os;
  os << "eta=" << io::format_real(r.eta) << '\n'
     << "eta2=" << io::format_real(r.eta2) << '\n'
     << "mu_a=" << io::format_real(r.mu_a) << '\n'
     << "mu_b=" << io::format_real(r.mu_b) << '\n'
     << to_key_value(r.verdict);
  return os.str();
}

}  // namespace nfold
