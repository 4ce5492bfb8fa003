#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqz/numerics.hpp"

using namespace sqz;

namespace {

// Independent oracle for K(k): Gauss-Legendre quadrature of the defining
// integral K = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t).
double elliptic_k_quadrature(double k) {
  // 64-point Gauss-Legendre nodes via Newton on Legendre polynomials.
  constexpr int n = 64;
  static double x[n], w[n];
  static bool init = false;
  if (!init) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      x[i] = t;
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    init = true;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 0.25 * M_PI * (x[i] + 1.0);  // map [-1,1] -> [0, pi/2]
    const double st = std::sin(t);
    s += w[i] * 0.25 * M_PI / std::sqrt(1.0 - k * k * st * st);
  }
  return s;
}

}  // namespace

TEST_CASE("complete elliptic integral via AGM") {
  CHECK(complete_elliptic_k(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  // oracle-frozen values (quadrature of the defining integral)
  CHECK(complete_elliptic_k(1.0 / std::sqrt(2.0)) ==
        doctest::Approx(1.8540746773013719).epsilon(1e-13));
  CHECK(complete_elliptic_k(0.5) == doctest::Approx(1.6857503548125961).epsilon(1e-13));
  // live comparison against the quadrature oracle on a sweep
  for (double k = 0.05; k < 0.95; k += 0.05)
    CHECK(complete_elliptic_k(k) == doctest::Approx(elliptic_k_quadrature(k)).epsilon(1e-12));
  CHECK_THROWS_AS(complete_elliptic_k(-0.1), std::domain_error);
  CHECK_THROWS_AS(complete_elliptic_k(1.0), std::domain_error);
}

TEST_CASE("Groetzsch mu: identities and asymptotics") {
  CHECK(groetzsch_mu(1.0 / std::sqrt(2.0)) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  const double r = 0.3;
  const double prod = groetzsch_mu(r) * groetzsch_mu(std::sqrt(1 - r * r));
  CHECK(prod == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-13));
  // small-r asymptotic mu(r) ~ log(4/r)
  CHECK(groetzsch_mu(0.01) == doctest::Approx(std::log(4.0 / 0.01)).epsilon(1e-4));
  CHECK_THROWS_AS(groetzsch_mu(0.0), std::domain_error);
  CHECK_THROWS_AS(groetzsch_mu(1.0), std::domain_error);

  // monotone decreasing on a 1000-point grid
  double prev = groetzsch_mu(0.0005);
  for (int i = 1; i <= 1000; ++i) {
    const double ri = i / 1001.0 + 0.0005;
    const double v = groetzsch_mu(ri);
    CHECK(v < prev);
    prev = v;
  }

  // identity on 100 samples
  for (int i = 1; i <= 100; ++i) {
    const double ri = i / 101.0;
    CHECK(std::abs(groetzsch_mu(ri) * groetzsch_mu(std::sqrt(1 - ri * ri)) -
                   M_PI * M_PI / 4) < 1e-10);
  }
}

TEST_CASE("Groetzsch mu inverse") {
  CHECK(groetzsch_mu_inv(M_PI / 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(groetzsch_mu_inv(groetzsch_mu(0.4)) == doctest::Approx(0.4).epsilon(1e-10));
  // asymptotic inverse r ~ 4 e^{-m}
  CHECK(groetzsch_mu_inv(10.0) ==
        doctest::Approx(4.0 * std::exp(-10.0)).epsilon(0.05));
  CHECK_THROWS_AS(groetzsch_mu_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(groetzsch_mu_inv(-1.0), std::domain_error);

  // round trip over [0.01, 0.99]
  for (int i = 0; i <= 98; ++i) {
    const double r = 0.01 + 0.98 * i / 98.0;
    CHECK(std::abs(groetzsch_mu_inv(groetzsch_mu(r)) - r) < 1e-9);
  }
}

TEST_CASE("prime product: trivial values") {
  auto p1 = prime_product(Complex(1.0, 0.0), 0.3);
  CHECK(std::abs(p1.value) < 1e-14);
  auto p2 = prime_product(Complex(0.25, 0.5), 0.0);
  CHECK(std::abs(p2.value - (Complex(1, 0) - Complex(0.25, 0.5))) < 1e-15);
  CHECK_THROWS_AS(prime_product(Complex(0, 0), 0.3), std::domain_error);
  CHECK_THROWS_AS(prime_product(Complex(1, 0), 1.0), std::domain_error);
}

TEST_CASE("prime product functional equation P(q^2 w) = -P(w)/w") {
  {
    const Complex w(0.5, 0.2);
    const double q = 0.3;
    auto lhs = prime_product(q * q * w, q);
    auto rhs = prime_product(w, q);
    const Complex expect = -rhs.value / w;
    CHECK(std::abs(lhs.value - expect) <
          lhs.error_bound + rhs.error_bound / std::abs(w) + 1e-12);
  }
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> uq(0.05, 0.5);
  std::uniform_real_distribution<double> uarg(0.0, 2 * M_PI);
  for (int trial = 0; trial < 100; ++trial) {
    const double q = uq(rng);
    std::uniform_real_distribution<double> ulog(std::log(q), std::log(1.0 / q));
    const Complex w = std::polar(std::exp(ulog(rng)), uarg(rng));
    auto lhs = prime_product(q * q * w, q);
    auto rhs = prime_product(w, q);
    const double tol =
        lhs.error_bound + rhs.error_bound / std::abs(w) +
        1e-12 * (1.0 + std::abs(rhs.value) / std::abs(w));
    CHECK(std::abs(lhs.value + rhs.value / w) < tol);
  }
}

TEST_CASE("tolerance config validation") {
  ToleranceConfig t;
  CHECK_NOTHROW(t.validate());
  t.product_truncation = 0;
  CHECK_THROWS_AS(t.validate(), std::domain_error);
  t = {};
  t.solver_rel_tol = 0.0;
  CHECK_THROWS_AS(t.validate(), std::domain_error);
}
