#include <doctest.h>

#include <cmath>

#include "nfold/analysis.hpp"
#include "nfold/ensembles.hpp"
#include "nfold/error.hpp"
#include "nfold/linalg.hpp"
#include "nfold/whitening.hpp"
#include "support.hpp"

using namespace nfold;

TEST_SUITE("folding_gamma") {
  TEST_CASE("examples") {
    const FoldingFactor f = folding_gamma(1.0, 1.0, 64, 256);
    CHECK(f.gamma == 5.0);
    CHECK(*f.degradation == 5.0);

    const FoldingFactor g = folding_gamma(2.0, 0.0, 7, 300);
    CHECK(g.gamma == 4.0);
    CHECK(*g.degradation == 1.0);

    CHECK(folding_gamma(0.1, 0.5, 100, 1000).gamma == doctest::Approx(2.51).epsilon(1e-15));
    CHECK_FALSE(folding_gamma(0.0, 1.0, 4, 8).degradation.has_value());
    CHECK(folding_gamma(0.0, 1.0, 4, 8).gamma == 2.0);
  }

  TEST_CASE("both degradation forms agree and bound γ") {
    for (double sigma : {0.01, 0.3, 1.0, 7.0})
      for (double sigma0 : {0.0, 0.05, 1.0, 3.0})
        for (std::size_t p : {16, 100, 4096}) {
          const FoldingFactor f = folding_gamma(sigma, sigma0, 16, p);
          CHECK(std::abs(*f.degradation - *f.degradation_ratio_form) <= 1e-12 * *f.degradation);
          CHECK(f.gamma >= sigma * sigma);
          CHECK(f.gamma >= (static_cast<double>(p) / 16.0) * sigma0 * sigma0);
        }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(folding_gamma(0.0, 0.0, 4, 8), PreconditionError);
    CHECK_THROWS_AS(folding_gamma(-1.0, 1.0, 4, 8), PreconditionError);
    CHECK_THROWS_AS(folding_gamma(1.0, 1.0, 0, 8), PreconditionError);
  }
}

TEST_SUITE("eta") {
  TEST_CASE("examples") {
    CHECK(compute_eta(gen_concat_orthobases(4, 2, 1)) <= 1e-10);
    CHECK(compute_eta(Matrix::from_rows({{1, 0}})) == doctest::Approx(0.5).epsilon(1e-15));
    const Matrix g = gen_gaussian(64, 4096, 2);
    CHECK(compute_eta(g) <= eta_gaussian_bound(64, 4096, 3.0));
  }

  TEST_CASE("equals the spectral norm of I − (n/p) A Aᵀ") {
    const Matrix a = test::random_matrix(9, 30, 4);
    Matrix m = Matrix::identity(9) - (9.0 / 30.0) * test::naive_matmul(a, a.transpose());
    CHECK(compute_eta(a) == doctest::Approx(test::power_iteration_norm(m)).epsilon(1e-8));
  }

  TEST_CASE("gaussian bound arithmetic") {
    CHECK(eta_gaussian_bound(64, 256, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(eta_gaussian_bound(100, 10000, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(eta_gaussian_bound(4, 4, 2.0) == doctest::Approx(7.0).epsilon(1e-15));
    CHECK_THROWS_AS(eta_gaussian_bound(4, 4, 2.5), PreconditionError);
    CHECK_THROWS_AS(eta_gaussian_bound(4, 4, 0.0), PreconditionError);
    CHECK_THROWS_AS(eta_gaussian_bound(8, 4, 1.0), PreconditionError);
  }
}

TEST_SUITE("perturbation constants") {
  TEST_CASE("values") {
    CHECK(eta1(0.0) == 0.0);
    CHECK(eta2(0.0) == 0.0);
    CHECK(eta3(0.0) == 0.0);
    CHECK(eta1(0.5) == 1.0);
    CHECK(eta2(0.5) == doctest::Approx(4.8284271247461901).epsilon(1e-14));
    CHECK(eta2(0.36) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
    // mpmath reference: 2.3155034066152721980
    CHECK(eta2(0.4) == doctest::Approx(2.3155034066152722).epsilon(1e-14));
  }

  TEST_CASE("the 5η remark fails at η = 0.4 but holds at 0.36") {
    CHECK(eta2(0.4) > 5.0 * 0.4);
    CHECK(eta2(0.36) < 5.0 * 0.36);
  }

  TEST_CASE("proof identity (1+η₁)/(1−η₃)² = 1+η₂") {
    for (int k = 1; k <= 74; ++k) {
      const double eta = k / 100.0;
      const double lhs = (1.0 + eta1(eta)) / ((1.0 - eta3(eta)) * (1.0 - eta3(eta)));
      CHECK(std::abs(lhs - (1.0 + eta2(eta))) <= 1e-12 * (1.0 + eta2(eta)));
    }
  }

  TEST_CASE("small-η expansion η₂ ≈ 2η") {
    for (int k = 1; k <= 200; ++k) {
      const double eta = k / 1000.0;
      CHECK(std::abs(eta2(eta) - 2.0 * eta) <= 6.0 * eta * eta);
    }
  }

  TEST_CASE("domains") {
    CHECK_THROWS_AS(eta1(1.0), PreconditionError);
    CHECK_THROWS_AS(eta3(-0.1), PreconditionError);
    CHECK_THROWS_AS(eta2(0.75), PreconditionError);
    CHECK_NOTHROW(eta2(0.7499));
  }
}

TEST_SUITE("whiten") {
  TEST_CASE("sigma0 = 0 leaves the system untouched") {
    const Matrix a = gen_gaussian(8, 30, 3);
    const WhitenedSystem sys = whiten(a, {0.7, 0.0});
    CHECK(sys.w == Matrix::identity(8));
    CHECK(sys.b == a);
    CHECK(sys.gamma == doctest::Approx(0.49));
  }

  TEST_CASE("orthobases: Q₁ = I, B = A") {
    const Matrix a = gen_concat_orthobases(64, 4, 11);
    const WhitenedSystem sys = whiten(a, {1.0, 1.0});
    CHECK(sys.gamma == 5.0);
    CHECK(max_abs_diff(effective_noise_covariance(a, {1.0, 1.0}), 5.0 * Matrix::identity(64)) <= 1e-10 * 5.0);
    CHECK(max_abs_diff(sys.b, a) <= 1e-8);
    CHECK(sys.eta <= 1e-10);
  }

  TEST_CASE("system invariants on a Gaussian instance") {
    const Matrix a = gen_gaussian(12, 200, 5);
    const NoiseSpec noise{0.4, 0.9};
    const WhitenedSystem sys = whiten(a, noise);
    CHECK(max_abs_diff(sys.b, test::naive_matmul(sys.w, a)) <= 1e-10 * max_abs(sys.b));
    CHECK(max_abs_diff(sys.w, sys.w.transpose()) == 0.0);
    CHECK(linalg::sym_eigenvalues(sys.w).back() > 0.0);
    const Matrix q1 = (1.0 / sys.gamma) * effective_noise_covariance(a, noise);
    CHECK(max_abs_diff(test::naive_matmul(test::naive_matmul(sys.w, q1), sys.w), Matrix::identity(12)) <= 1e-8);
    CHECK(sys.eta == compute_eta(a));
  }

  TEST_CASE("singular Q is an error") {
    // σ = 0 and rank(A Aᵀ) = 1 < n
    const Matrix a = Matrix::from_rows({{1, 1, 1}, {1, 1, 1}});
    CHECK_THROWS_AS(whiten(a, {0.0, 1.0}), NumericalError);
    CHECK_NOTHROW(whiten(gen_gaussian(4, 16, 1), {0.0, 1.0}));
  }

  TEST_CASE("apply_whitening") {
    const Matrix a = gen_gaussian(6, 24, 9);
    const WhitenedSystem id = whiten(a, {1.0, 0.0});
    const Vector y = test::random_vector(6, 1);
    CHECK(apply_whitening(id, y) == y);

    const WhitenedSystem sys = whiten(a, {0.5, 1.5});
    const Vector y1 = test::random_vector(6, 2);
    const Vector y2 = test::random_vector(6, 3);
    Vector sum(6);
    for (std::size_t i = 0; i < 6; ++i) sum[i] = y1[i] + y2[i];
    const Vector ws = apply_whitening(sys, sum);
    const Vector w1 = apply_whitening(sys, y1);
    const Vector w2 = apply_whitening(sys, y2);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(ws[i] - w1[i] - w2[i]) <= 1e-12);
    CHECK_THROWS_AS(apply_whitening(sys, Vector(5)), PreconditionError);
  }

  TEST_CASE("whitened noise covariance is γ I (Monte Carlo)") {
    const Matrix a = gen_gaussian(16, 1024, 12);
    const NoiseSpec noise{1.0, 1.0};
    const double gamma = folding_gamma(1.0, 1.0, 16, 1024).gamma;
    const Matrix cu = estimate_noise_covariance(a, noise, 100000, 5, true);
    CHECK(frobenius_norm(cu - gamma * Matrix::identity(16)) / (gamma * 4.0) <= 0.05);
  }
}

TEST_CASE("proof quantities bounded by η, η₁, η₃") {
  // Eigenvalues of Q₁ give the three norms directly; W comes from whiten.
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const std::size_t n = 4 + seed % 5;
    const Matrix a = gen_gaussian(n, 32 * n, seed);
    const NoiseSpec noise{0.2 * static_cast<double>(seed % 4) + 0.1, 1.0};
    const WhitenedSystem sys = whiten(a, noise);
    REQUIRE(sys.eta < 1.0);
    const Matrix q1 = (1.0 / sys.gamma) * effective_noise_covariance(a, noise);
    double d0 = 0, d1 = 0;
    for (double lam : linalg::sym_eigenvalues(q1)) {
      d0 = std::max(d0, std::abs(lam - 1.0));
      d1 = std::max(d1, std::abs(1.0 / lam - 1.0));
    }
    const double d2 = linalg::spectral_norm(sys.w - Matrix::identity(n));
    CHECK(d0 <= sys.eta * (1 + 1e-10));
    CHECK(d1 <= eta1(sys.eta) * (1 + 1e-10));
    CHECK(d2 <= eta3(sys.eta) * (1 + 1e-10));
  }
}
