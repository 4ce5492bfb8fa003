#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqz/errors.hpp"
#include "sqz/squeezing.hpp"

using namespace sqz;

TEST_CASE("squeezing of the annulus: max(a, r/a)") {
  const RingDomain a = make_annulus(0.25);
  {
    const SqueezeReport rep = squeeze_doubly_connected(a, Complex(0.5, 0.0));
    CHECK(rep.exact);
    CHECK(rep.value() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.witness.find("tie") != std::string::npos);  // equilibrium point
  }
  {
    const SqueezeReport rep = squeeze_doubly_connected(a, Complex(0.3, 0.0));
    CHECK(rep.value() == doctest::Approx(0.25 / 0.3).epsilon(1e-10));
    CHECK(rep.witness.find("inner") != std::string::npos);
  }
  {
    const SqueezeReport rep = squeeze_doubly_connected(a, Complex(0.9, 0.0));
    CHECK(rep.value() == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(rep.witness.find("outer") != std::string::npos);
  }
}

TEST_CASE("squeezing of the punctured disk is |z| after normalization") {
  const RingDomain d = make_punctured_disk(Complex(0.0, 0.0));
  const SqueezeReport rep = squeeze_doubly_connected(d, Complex(0.4, 0.0));
  CHECK(rep.exact);
  CHECK(rep.value() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("annulus closed form along the analytic and grid paths") {
  const double r = 0.25;
  for (double a = 0.3; a < 0.95; a += 0.1) {
    const double want = std::max(a, r / a);
    const double got =
        squeeze_doubly_connected(make_annulus(r), Complex(a, 0.0)).value();
    CHECK(std::abs(got - want) < 1e-6);
  }
  MoebiusDiskAutomorphism t;
  t.a = Complex(0.2, 0.0);
  const RingDomain d = make_moebius_annulus(r, t);
  for (double a : {0.4, 0.7}) {
    const double want = std::max(a, r / a);
    const double got =
        squeeze_doubly_connected(d, apply_moebius(t, Complex(a, 0.0)), 384).value();
    CHECK(std::abs(got - want) < 1e-3);
  }
}

TEST_CASE("directional squeezing for circle-slit configurations") {
  const SlitDiskDomain d3 = build_symmetric_slit_disk(3, 0.5, 0.2);
  const SqueezeReport r3 = directional_squeeze_circle_slits(d3);
  CHECK(r3.exact);
  CHECK(r3.value() == 0.5);
  CHECK(r3.witness.find("identity") != std::string::npos);

  const SlitDiskDomain d2 = build_symmetric_slit_disk(2, 0.7, 0.4);
  CHECK(directional_squeeze_circle_slits(d2).value() == 0.7);

  SlitDiskDomain mixed;
  mixed.slits.push_back({0.5, 0.0, 0.2});
  mixed.slits.push_back({0.6, M_PI, 0.2});
  CHECK_THROWS_AS(directional_squeeze_circle_slits(mixed), std::domain_error);
}

TEST_CASE("directional upper bound: definitional inverse and asymptotics") {
  // mu^{-1}(mu(0.5)) = 0.5 by definition
  const double m_half = groetzsch_mu(0.5) / (2 * M_PI);
  CHECK(groetzsch_mu_inv(2 * M_PI * m_half) == doctest::Approx(0.5).epsilon(1e-10));
  // large modulus: bound ~ 4 e^{-2 pi M}
  CHECK(groetzsch_mu_inv(2 * M_PI * 3.0) ==
        doctest::Approx(4.0 * std::exp(-6 * M_PI)).epsilon(0.05));
}

TEST_CASE("directional upper bound on a slit disk shrinks with the slit") {
  const Complex origin(0, 0);
  double prev = 1.0;
  for (double alpha : {0.3, 0.1, 0.04}) {
    const SlitDiskDomain d = build_symmetric_slit_disk(3, 0.5, alpha);
    const DirectionalBound b = directional_squeeze_upper_bound(d, 0, origin, 0.0, 128);
    CHECK(b.valid);
    CHECK(b.bound < prev);
    CHECK(b.limsup_constant == doctest::Approx(std::exp(-2 * M_PI * b.ring_modulus)));
    prev = b.bound;
  }
}

TEST_CASE("squeeze bounds: interval soundness against the exact value") {
  // doubly connected slit disk: exact value available through the ring path
  const CircularArcSlit slit{0.5, 0.0, 0.3};
  const double exact =
      squeeze_doubly_connected(make_slit_ring(slit), Complex(0, 0), 256).value();
  SlitDiskDomain d;
  d.slits.push_back(slit);
  const SqueezeReport b = squeeze_bounds(d, Complex(0, 0), 128);
  CHECK(!b.exact);
  CHECK(b.lo <= exact + 5e-3);
  CHECK(b.hi >= exact - 5e-3);
  CHECK(b.lo <= b.hi);
  CHECK(b.lo == doctest::Approx(0.5).epsilon(1e-6));  // identity witness at 0
}

TEST_CASE("squeeze bounds: certified interval for a three-slit disk") {
  const SlitDiskDomain d = build_symmetric_slit_disk(3, 0.5, 0.05);
  const SqueezeReport b = squeeze_bounds(d, Complex(0, 0), 128);
  CHECK(b.lo == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.hi >= 0.5);
  CHECK(b.hi < 1.0);
}

TEST_CASE("squeeze bounds: Moebius witness pushes the lower bound to 1 near T") {
  SlitDiskDomain d = build_symmetric_slit_disk(3, 0.5, 0.2);
  double prev = 0.0;
  for (double x : {0.9, 0.95, 0.99}) {
    const SqueezeReport b = squeeze_bounds(d, Complex(0.0, x), 96);
    CHECK(b.lo > prev);
    prev = b.lo;
  }
  CHECK(prev > 0.9);
}

TEST_CASE("extremality certificate for the symmetric slit disk") {
  const ExtremalityCertificate cert = certify_extremal_slit_disk(3, 0.5, 0.05, 128);
  CHECK(cert.conclusive);
  CHECK(cert.alpha_star >= 1e-3);
  CHECK(cert.lemma_value == 0.5);
  CHECK(cert.revalidate());
  bool found = false;
  for (const auto& rec : cert.records)
    if (rec.alpha == cert.alpha_star) {
      CHECK(rec.bound <= 0.45);
      CHECK(rec.margin >= 0.05);
      found = true;
    }
  CHECK(found);
  CHECK_THROWS_AS(certify_extremal_slit_disk(2, 0.5), std::domain_error);
}

TEST_CASE("tampered certificates fail revalidation") {
  ExtremalityCertificate cert = certify_extremal_slit_disk(3, 0.5, 0.05, 96);
  REQUIRE(cert.conclusive);
  cert.records.front().ring_modulus *= 0.5;
  CHECK(!cert.revalidate());
}

TEST_CASE("annulus equilibrium set") {
  CHECK(equilibrium_annulus(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  const double r = 0.6;
  const double eq = equilibrium_annulus(r);
  CHECK(std::abs(eq - r / eq) < 1e-14);  // directional values cross exactly
  CHECK(equilibrium_annulus(0.9999) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(equilibrium_annulus(1.0), std::domain_error);
}

TEST_CASE("monotonicity probe on nested annuli") {
  const MonotonicityProbe p = monotonicity_probe(make_annulus(0.2), make_annulus(0.4),
                                                 Complex(0.6, 0.0));
  CHECK(p.outcome == ProbeOutcome::confirmed);
  CHECK(p.sub_lo > p.super_hi);
  CHECK(p.sub_lo == doctest::Approx(0.4 / 0.6).epsilon(1e-6));
  CHECK(p.super_hi == doctest::Approx(0.2 / 0.6).epsilon(1e-6));

  CHECK_THROWS_AS(monotonicity_probe(make_annulus(0.4), make_annulus(0.4),
                                     Complex(0.6, 0.0)),
                  std::domain_error);
}

TEST_CASE("monotonicity probe on slit-disk pairs is honest about intervals") {
  const SlitDiskDomain omega = build_symmetric_slit_disk(3, 0.5, 0.1);
  SlitDiskDomain omega_sub = omega;
  omega_sub.slits.back().half_width = 0.3;
  const MonotonicityProbe p =
      monotonicity_probe(omega, omega_sub, Complex(0, 0), 96);
  // intervals [0, bound] overlap: confirmation requires disjointness
  CHECK(p.outcome == ProbeOutcome::inconclusive);
  CHECK(p.sub_hi >= p.super_hi);  // wider slit, weaker ring, larger bound
}
