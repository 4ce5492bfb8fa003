#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqz/errors.hpp"
#include "sqz/modulus.hpp"

using namespace sqz;

TEST_CASE("annulus modulus matches the closed form -log(r)/2pi") {
  const ModulusResult m = ring_modulus(make_annulus(0.2), 128, GridKind::log_polar);
  const double want = std::log(5.0) / (2 * M_PI);
  CHECK(std::abs(m.value - want) / want < 0.01);
  CHECK(m.error_estimate >= 0.0);

  // A(e^{-2pi}, 1) has modulus exactly 1
  const ModulusResult m1 =
      ring_modulus(make_annulus(std::exp(-2 * M_PI)), 128, GridKind::log_polar);
  CHECK(std::abs(m1.value - 1.0) < 0.01);
}

TEST_CASE("capacity is the reciprocal of the ring modulus") {
  const GridCondenser g = rasterize(make_annulus(0.2), 96, GridKind::log_polar);
  const double cap = capacity(g);
  const ModulusResult m = ring_modulus(g);
  CHECK(cap == doctest::Approx(2 * M_PI / std::log(5.0)).epsilon(0.01));
  CHECK(m.value * cap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two plates a cell apart: large capacity, growing under refinement") {
  auto make = [](int rows) {
    LogPolarRaster r(std::log(0.5), 0.0, rows);
    r.mark_circle(0.0, CellState::plate0, false);
    CircularArcSlit arc{0.5 * std::exp(0.5 * std::log(2.0)), 0.0, 1.0};
    // put the arc two rows below the top so the plates stay disjoint
    GridCondenser& g = r.grid();
    arc.radius = std::exp(g.row0 + (rows - 3) * g.drow);
    r.mark_arc(arc, CellState::plate1, false);
    return r.take();
  };
  const double c1 = capacity(make(48));
  const double c2 = capacity(make(96));
  CHECK(c1 > 2.0);
  CHECK(c2 > c1);
}

TEST_CASE("degenerate and disconnected condensers are rejected") {
  // plates touching
  LogPolarRaster r(std::log(0.5), 0.0, 32);
  GridCondenser& g = r.grid();
  for (int j = 0; j < g.cols; ++j) {
    g.cell[g.idx(10, j)] = CellState::plate0;
    g.cell[g.idx(11, j)] = CellState::plate1;
  }
  CHECK_THROWS_AS(capacity(r.take()), TopologyError);

  // disconnected field
  LogPolarRaster r2(std::log(0.5), 0.0, 32);
  GridCondenser& g2 = r2.grid();
  for (int j = 0; j < g2.cols; ++j) {
    g2.cell[g2.idx(10, j)] = CellState::plate0;
    g2.cell[g2.idx(20, j)] = CellState::plate1;
    g2.cell[g2.idx(15, j)] = CellState::excluded;
  }
  CHECK_THROWS_AS(capacity(r2.take()), TopologyError);
}

TEST_CASE("conformal invariance: Moebius image of the annulus") {
  for (double r : {0.2, 0.5}) {
    MoebiusDiskAutomorphism t;
    t.a = Complex(0.15, 0.05);
    const ModulusResult direct = ring_modulus(make_annulus(r), 128, GridKind::log_polar);
    const ModulusResult moved =
        ring_modulus(make_moebius_annulus(r, t), 128, GridKind::log_polar);
    CHECK(std::abs(direct.value - moved.value) / direct.value < 0.02);
  }
}

TEST_CASE("expansion monotonicity for nested rings sharing the unit circle") {
  // A(0.3,1) minus a slit is contained in A(0.3,1); bigger domain, bigger modulus
  RingDomain slitted;
  slitted.outer = Circle{Complex(0, 0), 1.0};
  SlitUnion u;
  u.arcs.push_back({0.3, 0.0, 2.8});
  u.segments.push_back({0.0, 0.3, 0.45});
  slitted.inner = u;
  const double m_small = ring_modulus(slitted, 128, GridKind::log_polar).value;
  const double m_big = ring_modulus(make_annulus(0.3), 128, GridKind::log_polar).value;
  CHECK(m_small <= m_big + 1e-3);
  // pure-annulus pair: A(0.45,1) inside A(0.3,1)
  const double m_mid = ring_modulus(make_annulus(0.45), 128, GridKind::log_polar).value;
  CHECK(m_mid <= m_big + 1e-3);
}

TEST_CASE("reduced module of disks") {
  // unit disk at 0: conformal radius 1, value 0 (log-polar puncture path)
  {
    const GridCondenser g = raster_disk(Circle{Complex(0, 0), 1.0}, 96, GridKind::log_polar);
    const ReducedModuleResult r = reduced_module(g, Complex(0, 0));
    CHECK(std::abs(r.value) < 1e-3);
    CHECK(r.conformal_radius == doctest::Approx(1.0).epsilon(5e-3));
  }
  // disk of radius r at 0: (1/2pi) log r
  {
    const GridCondenser g = raster_disk(Circle{Complex(0, 0), 0.6}, 96, GridKind::log_polar);
    const ReducedModuleResult r = reduced_module(g, Complex(0, 0));
    CHECK(r.value == doctest::Approx(std::log(0.6) / (2 * M_PI)).epsilon(5e-3));
  }
  // unit disk at a = 0.5: conformal radius 1 - a^2 (cartesian path)
  {
    const GridCondenser g = raster_disk(Circle{Complex(0, 0), 1.0}, 192, GridKind::cartesian);
    const ReducedModuleResult r = reduced_module(g, Complex(0.5, 0));
    CHECK(r.conformal_radius == doctest::Approx(0.75).epsilon(5e-3));
  }
}

TEST_CASE("reduced module rejects bad marked points and topology") {
  const GridCondenser g = raster_disk(Circle{Complex(0, 0), 1.0}, 96, GridKind::cartesian);
  CHECK_THROWS_AS(reduced_module(g, Complex(0.999, 0)), std::domain_error);
  CHECK_THROWS_AS(reduced_module(g, Complex(1.5, 0)), std::domain_error);

  // multiply connected field: disk with an interior slit marked as boundary
  LogPolarRaster r(std::log(0.05), 0.0, 96);
  r.mark_circle(0.0, CellState::plate0, true);
  r.mark_arc({0.5, 0.0, 0.5}, CellState::plate0, true);
  CHECK_THROWS_AS(reduced_module(r.take(), Complex(0, 0)), TopologyError);
}

TEST_CASE("reduced module is translation invariant") {
  const ReducedModuleResult a =
      reduced_module(raster_disk(Circle{Complex(0, 0), 0.7}, 160, GridKind::cartesian),
                     Complex(0.2, 0.0));
  const ReducedModuleResult b =
      reduced_module(raster_disk(Circle{Complex(0.1, -0.15), 0.7}, 160, GridKind::cartesian),
                     Complex(0.3, -0.15));
  CHECK(std::abs(a.value - b.value) < 1e-3);
}

TEST_CASE("mapped arc measure: identity on the annulus, contraction with a whisker") {
  const int res = 128;
  // identity map: measure preserved exactly
  const double id_meas = mapped_arc_measure(make_annulus(0.3), -0.5, 0.9, res);
  CHECK(id_meas == doctest::Approx(1.4).epsilon(1e-3));

  RingDomain d;
  d.outer = UnitCircleWithSlits{{RadialSegment{M_PI, 0.8, 1.0}}};
  d.inner = Circle{Complex(0, 0), 0.3};
  // arc far from the whisker contracts strictly
  const double c1 = mapped_arc_measure(d, -M_PI / 4, M_PI / 4, res);
  CHECK(c1 < M_PI / 2);
  CHECK(c1 > 0.0);
  // the contraction is confirmed at a finer grid (self-oracle)
  const double c2 = mapped_arc_measure(d, -M_PI / 4, M_PI / 4, 2 * res);
  CHECK(c2 < M_PI / 2);
  CHECK(std::abs(c1 - c2) < 0.02);

  // flux conservation: a full partition sums to 2pi
  double total = 0.0;
  for (int k = 0; k < 6; ++k)
    total += mapped_arc_measure(d, k * M_PI / 3.0, (k + 1) * M_PI / 3.0, res);
  CHECK(total == doctest::Approx(2 * M_PI).epsilon(1e-6));

  CHECK_THROWS_AS(mapped_arc_measure(RingDomain{Circle{Complex(0, 0), 0.9},
                                                Circle{Complex(0, 0), 0.3}},
                                     0.0, 1.0, res),
                  std::domain_error);
}

TEST_CASE("polarization: fixed points and set algebra degeneracies") {
  // symmetric condenser about the snap circle: unchanged
  {
    LogPolarRaster r(std::log(0.2), 0.0, 64);
    r.mark_circle(0.0, CellState::plate0, false);
    r.mark_circle(std::log(0.2), CellState::plate1, false);
    GridCondenser& g = r.grid();
    const int k = 32;
    const double t = std::exp(g.row0 + k * g.drow);
    // mirror pair of arcs around row k
    CircularArcSlit up{std::exp(g.row0 + (k + 6) * g.drow), 1.0, 0.5};
    CircularArcSlit dn{std::exp(g.row0 + (k - 6) * g.drow), 1.0, 0.5};
    r.mark_arc(up, CellState::plate1, false);
    r.mark_arc(dn, CellState::plate1, false);
    const GridCondenser g0 = r.take();
    const PolarizeResult p = polarize(g0, t);
    CHECK(p.condenser.cell == g0.cell);
  }
  // plate1 entirely on the inner side: unchanged
  {
    LogPolarRaster r(std::log(0.2), 0.0, 64);
    r.mark_circle(0.0, CellState::plate0, false);
    r.mark_circle(std::log(0.2), CellState::plate1, false);
    GridCondenser& g = r.grid();
    CircularArcSlit low{std::exp(g.row0 + 8 * g.drow), 2.0, 0.7};
    r.mark_arc(low, CellState::plate1, false);
    const GridCondenser g0 = r.take();
    const double t = std::exp(g0.row0 + 40 * g0.drow);
    const PolarizeResult p = polarize(g0, t);
    CHECK(p.condenser.cell == g0.cell);
  }
  // cartesian grids are rejected
  {
    GridCondenser g;
    g.kind = GridKind::cartesian;
    CHECK_THROWS_AS(polarize(g, 0.5), std::invalid_argument);
  }
}

TEST_CASE("polarization never increases capacity (seeded trials)") {
  int trials = 25;  // the full 100-trial batch runs in the acceptance suite
  for (int i = 0; i < trials; ++i) {
    const GridCondenser g = random_lattice_ring_condenser(1000 + i, 72);
    const double t = random_admissible_polarization_radius(g, 7 * i + 1);
    const PolarizeResult p = polarize(g, t);
    CHECK(capacity(p.condenser) <= capacity(g) + 1e-12);
  }
}

TEST_CASE("polarization reports the snapped radius") {
  const GridCondenser g = random_lattice_ring_condenser(3, 64);
  const PolarizeResult p = polarize(g, 0.5);
  CHECK(std::abs(std::log(p.snapped_radius) - std::log(0.5)) <= 0.5 * g.drow + 1e-12);
}
