#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqz/canonical.hpp"
#include "sqz/errors.hpp"

using namespace sqz;

TEST_CASE("slit map degenerates to a disk automorphism at q = 0") {
  AnnulusSlitMap map{0.0, 0.4, 30};
  for (int k = 0; k < 16; ++k) {
    const Complex z = std::polar(0.7, 2 * M_PI * k / 16);
    const Complex f = annulus_slit_map_eval(map, z);
    const Complex want = (0.4 - z * 0.4 / 0.4) * 1.0;  // a(1 - z/a) / (1 - az)
    const Complex expect = 0.4 * (1.0 - z / 0.4) / (1.0 - z * 0.4);
    CHECK(std::abs(f - expect) < 1e-14);
    (void)want;
  }
}

TEST_CASE("Reich-Warschawski certificate at q=0.1, a=0.4") {
  AnnulusSlitMap map{0.1, 0.4, 30};
  const SlitMapCertificate c = certify_slit_map(map, 256);
  CHECK(c.max_inner_dev < 1e-8);    // |f| = a on |z| = q
  CHECK(c.max_outer_dev < 1e-10);   // |f| = 1 on |z| = 1
  CHECK(c.zero_residual < 1e-10);   // f(a) = 0
  CHECK(c.winding == 1);            // injectivity sanity
  CHECK(c.tail_bound < 1e-10);
}

TEST_CASE("certificate sweep over (q, a)") {
  for (double q : {0.05, 0.1, 0.3}) {
    for (double a = q + 0.1; a < 0.95; a += 0.16) {
      AnnulusSlitMap map{q, a, 30};
      const SlitMapCertificate c = certify_slit_map(map, 128);
      const double tol = std::max(1e-8, 4.0 * c.tail_bound);
      CHECK(c.max_inner_dev < tol);
      CHECK(c.max_outer_dev < tol);
      CHECK(c.winding == 1);
    }
  }
}

TEST_CASE("slit map rejects points outside the closed annulus") {
  AnnulusSlitMap map{0.2, 0.5, 30};
  CHECK_THROWS_AS(annulus_slit_map_eval(map, Complex(0.05, 0)), std::domain_error);
  CHECK_THROWS_AS(annulus_slit_map_eval(map, Complex(1.2, 0)), std::domain_error);
  CHECK_THROWS_AS((AnnulusSlitMap{0.5, 0.4, 30}).validate(), std::domain_error);
}

TEST_CASE("uniformization of the annulus itself") {
  const UniformizationResult u =
      annulus_uniformize(make_annulus(0.3), Complex(0.6, 0.0), 128);
  CHECK(std::abs(u.modulus - std::log(1.0 / 0.3) / (2 * M_PI)) / u.modulus < 0.01);
  CHECK(std::abs(u.inner_radius - 0.3) < 0.01);
  CHECK(std::abs(std::abs(u.transported) - 0.6) < 1e-3);
  CHECK(!u.boundary_correspondence.empty());
}

TEST_CASE("uniformization is conformally invariant under Moebius maps") {
  MoebiusDiskAutomorphism t;
  t.a = Complex(0.2, 0.0);
  const RingDomain d = make_moebius_annulus(0.3, t);
  const Complex marked = apply_moebius(t, Complex(0.6, 0.0));
  const UniformizationResult u = annulus_uniformize(d, marked, 256);
  CHECK(std::abs(u.modulus - std::log(1.0 / 0.3) / (2 * M_PI)) / u.modulus < 0.01);
  CHECK(std::abs(std::abs(u.transported) - 0.6) < 1e-2);
}

TEST_CASE("uniformization rejects marked points near the boundary") {
  CHECK_THROWS_AS(annulus_uniformize(make_annulus(0.3), Complex(0.999, 0.0), 96),
                  std::domain_error);
}

TEST_CASE("slit radii: closed forms on the annulus") {
  const RingDomain a = make_annulus(0.25);
  {
    const CanonicalMapResult r = slit_radii(a, Complex(0.5, 0.0));
    CHECK(r.r_toward_outer == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r_toward_inner == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.inner_radius == doctest::Approx(std::exp(-2 * M_PI * r.modulus)).epsilon(1e-10));
    CHECK(r.resolution_used == 0);
  }
  {
    const CanonicalMapResult r = slit_radii(a, Complex(0.9, 0.0));
    CHECK(r.r_toward_outer == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(r.r_toward_inner == doctest::Approx(0.25 / 0.9).epsilon(1e-12));
  }
  // boundary-swap involution: swapping twice returns the original
  {
    const CanonicalMapResult r = slit_radii(a, Complex(0.7, 0.0));
    const double s = r.inner_radius;
    const double swapped_once = s / r.r_toward_outer;   // marked modulus after w -> s/w
    const double swapped_twice = s / swapped_once;
    CHECK(swapped_twice == doctest::Approx(r.r_toward_outer).epsilon(1e-10));
  }
}

TEST_CASE("slit radii depend only on |z| for the annulus") {
  const RingDomain a = make_annulus(0.25);
  const CanonicalMapResult ref = slit_radii(a, Complex(0.55, 0.0));
  for (int k = 1; k < 64; ++k) {
    const CanonicalMapResult r = slit_radii(a, std::polar(0.55, 2 * M_PI * k / 64));
    CHECK(std::abs(r.r_toward_outer - ref.r_toward_outer) < 1e-10);
    CHECK(std::abs(r.r_toward_inner - ref.r_toward_inner) < 1e-10);
  }
}

TEST_CASE("slit radii through the grid pipeline: Moebius-distorted annulus") {
  MoebiusDiskAutomorphism t;
  t.a = Complex(0.2, 0.0);
  const RingDomain d = make_moebius_annulus(0.25, t);
  for (double a : {0.5, 0.8}) {
    const Complex z = apply_moebius(t, Complex(a, 0.0));
    const CanonicalMapResult r = slit_radii(d, z, 256);
    CHECK(std::abs(r.r_toward_outer - a) < 1e-2);
    CHECK(std::abs(r.r_toward_inner - 0.25 / a) < 1e-2);
  }
}

TEST_CASE("slit radii of the punctured disk follow the singleton convention") {
  const RingDomain d = make_punctured_disk(Complex(0.0, 0.0));
  const CanonicalMapResult r = slit_radii(d, Complex(0.37, 0.0));
  CHECK(std::isinf(r.modulus));
  CHECK(r.inner_radius == 0.0);
  CHECK(r.r_toward_outer == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(r.r_toward_inner == 0.0);

  // off-center puncture: Moebius normalization
  const RingDomain d2 = make_punctured_disk(Complex(0.3, 0.0));
  const CanonicalMapResult r2 = slit_radii(d2, Complex(0.0, 0.0));
  CHECK(r2.r_toward_outer == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("slit disk ring cross-checked at two resolutions against the exact value") {
  // squeezing toward the unit circle of D minus one slit at z=0 must be the
  // slit radius; the grid pipeline reproduces it
  const RingDomain d = make_slit_ring({0.5, 0.0, 0.4});
  const CanonicalMapResult r = slit_radii(d, Complex(0, 0), 256);
  CHECK(std::abs(r.r_toward_outer - 0.5) < 5e-3);
  CHECK(r.error_estimate < 1e-2);  // self-convergence against the 128-row grid
}
