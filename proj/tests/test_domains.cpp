#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqz/domains.hpp"
#include "sqz/errors.hpp"

using namespace sqz;

TEST_CASE("symmetric slit disk construction") {
  const SlitDiskDomain d1 = build_symmetric_slit_disk(2, 0.5, 0.3);
  REQUIRE(d1.slits.size() == 1);
  CHECK(d1.slits[0].radius == 0.5);
  CHECK(d1.slits[0].center_angle == 0.0);
  CHECK(d1.slits[0].half_width == 0.3);

  const SlitDiskDomain d3 = build_symmetric_slit_disk(4, 0.5, 0.2);
  REQUIRE(d3.slits.size() == 3);
  CHECK(d3.slits[1].center_angle == doctest::Approx(2 * M_PI / 3).epsilon(1e-15));
  CHECK(d3.slits[2].center_angle == doctest::Approx(4 * M_PI / 3).epsilon(1e-15));
  CHECK(d3.connectivity() == 4);

  CHECK_THROWS_AS(build_symmetric_slit_disk(3, 0.5, M_PI / 2), std::domain_error);
  CHECK_THROWS_AS(build_symmetric_slit_disk(2, 1.5, 0.1), std::domain_error);
}

TEST_CASE("slit set is rotation invariant in parameters") {
  for (int n : {3, 4, 6}) {
    const SlitDiskDomain d = build_symmetric_slit_disk(n, 0.4, 0.15);
    const double rot = 2 * M_PI / (n - 1);
    for (const auto& s : d.slits) {
      const double rotated = wrap_angle(s.center_angle + rot);
      bool found = false;
      for (const auto& t : d.slits)
        found = found || std::abs(t.center_angle - rotated) < 1e-12 ||
                std::abs(t.center_angle - rotated + 2 * M_PI) < 1e-12 ||
                std::abs(t.center_angle - rotated - 2 * M_PI) < 1e-12;
      CHECK(found);
    }
  }
}

TEST_CASE("threefold example") {
  const ThreefoldExample e = build_threefold_example(2.0);
  CHECK(e.slits[0].rho_lo == 1.0);
  CHECK(e.slits[0].rho_hi == 2.0);
  // rotational symmetry by 2pi/3 holds exactly in parameters
  CHECK(e.slits[1].angle == doctest::Approx(2 * M_PI / 3).epsilon(1e-15));
  CHECK(e.slits[2].angle == doctest::Approx(4 * M_PI / 3).epsilon(1e-15));
  // inversion image of [1,2] is [1/2, 1]
  CHECK(e.inverted_slits[0].rho_lo == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.inverted_slits[0].rho_hi == 1.0);
  CHECK(e.marked_point == Complex(0, 0));
  CHECK_THROWS_AS(build_threefold_example(1.0), std::domain_error);
}

TEST_CASE("Moebius automorphism") {
  MoebiusDiskAutomorphism id;
  CHECK(std::abs(apply_moebius(id, Complex(0.3, 0.4)) - Complex(0.3, 0.4)) < 1e-15);

  MoebiusDiskAutomorphism t;
  t.a = Complex(0.3, -0.2);
  t.rotation = 0.7;
  CHECK(std::abs(apply_moebius(t, t.a)) < 1e-15);
  // boundary preservation
  for (int k = 0; k < 16; ++k) {
    const Complex z = std::polar(1.0, 2 * M_PI * k / 16);
    CHECK(std::abs(std::abs(apply_moebius(t, z)) - 1.0) < 1e-12);
  }
  // inverse round-trip
  const MoebiusDiskAutomorphism ti = t.inverse();
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.0, -0.8)})
    CHECK(std::abs(apply_moebius(ti, apply_moebius(t, z)) - z) < 1e-12);

  MoebiusDiskAutomorphism bad;
  bad.a = Complex(1.2, 0.0);
  CHECK_THROWS_AS(apply_moebius(bad, Complex(0, 0)), std::domain_error);
}

TEST_CASE("Moebius circle image is exact") {
  MoebiusDiskAutomorphism t;
  t.a = Complex(0.2, 0.1);
  const Circle img = moebius_circle_image(t, 0.25);
  for (int k = 0; k < 32; ++k) {
    const Complex w = apply_moebius(t, std::polar(0.25, 2 * M_PI * k / 32));
    CHECK(std::abs(std::abs(w - img.center) - img.radius) < 1e-13);
  }
}

TEST_CASE("rasterize annulus: boundary rings as plates, rest field") {
  const GridCondenser g = rasterize(make_annulus(0.2), 64, GridKind::log_polar);
  for (int j = 0; j < g.cols; ++j) {
    CHECK(g.at(0, j) == CellState::plate1);
    CHECK(g.at(g.rows - 1, j) == CellState::plate0);
  }
  std::int64_t field = g.count(CellState::field);
  CHECK(field == std::int64_t(g.rows - 2) * g.cols);
  CHECK(field_connected(g));
  CHECK(field_touches(g, CellState::plate0));
  CHECK(field_touches(g, CellState::plate1));
}

TEST_CASE("rasterize slit disk: connected field adjacent to both plates") {
  const SlitDiskDomain d = build_symmetric_slit_disk(3, 0.5, 0.3);
  const GridCondenser g = rasterize(d, {}, 96, GridKind::log_polar);
  CHECK(field_connected(g));
  CHECK(field_touches(g, CellState::plate0));
  CHECK(field_touches(g, CellState::plate1));
  CHECK(!plates_adjacent(g));
}

TEST_CASE("refinement error on sub-cell slits") {
  SlitDiskDomain d;
  d.slits.push_back({0.5, 0.0, 0.001});
  try {
    rasterize(d, {}, 32, GridKind::log_polar);
    CHECK(false);
  } catch (const RefinementError& e) {
    CHECK(e.suggested_resolution > 32);
  }
}

namespace {
// coarse field cells map onto 2x2 blocks of the refined grid
void check_nested(const GridCondenser& coarse, const GridCondenser& fine) {
  REQUIRE(fine.rows == 2 * coarse.rows);
  REQUIRE(fine.cols == 2 * coarse.cols);
  std::int64_t violations = 0;
  for (int i = 0; i < coarse.rows; ++i)
    for (int j = 0; j < coarse.cols; ++j) {
      if (coarse.at(i, j) != CellState::field) continue;
      for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
          if (fine.at(2 * i + di, 2 * j + dj) == CellState::plate0 ||
              fine.at(2 * i + di, 2 * j + dj) == CellState::plate1 ||
              fine.at(2 * i + di, 2 * j + dj) == CellState::excluded)
            ++violations;
    }
  CHECK(violations == 0);
}
}  // namespace

TEST_CASE("rasterization at R and 2R yields nested field regions") {
  {
    const auto c = rasterize(make_annulus(0.3), 64, GridKind::log_polar);
    const auto f = rasterize(make_annulus(0.3), 128, GridKind::log_polar);
    check_nested(c, f);
  }
  {
    const SlitDiskDomain d = build_symmetric_slit_disk(3, 0.5, 0.4);
    const auto c = rasterize(d, {}, 64, GridKind::log_polar);
    const auto f = rasterize(d, {}, 128, GridKind::log_polar);
    check_nested(c, f);
  }
  {
    MoebiusDiskAutomorphism t;
    t.a = Complex(0.15, 0.0);
    const RingDomain d = make_moebius_annulus(0.3, t);
    const auto c = rasterize(d, 64, GridKind::log_polar);
    const auto f = rasterize(d, 128, GridKind::log_polar);
    check_nested(c, f);
  }
}

TEST_CASE("cartesian rasterization of a ring between circle and arc") {
  const CircularArcSlit slit{0.5, 0.0, 0.2};
  const RingDomain ring{Circle{Complex(0.5, 0), 0.3}, slit};
  const GridCondenser g = rasterize(ring, 96, GridKind::cartesian);
  CHECK(g.kind == GridKind::cartesian);
  CHECK(field_connected(g));
  CHECK(field_touches(g, CellState::plate0));
  CHECK(field_touches(g, CellState::plate1));
}

TEST_CASE("point in polyline") {
  PolylineCurve square;
  square.points = {Complex(-1, -1), Complex(1, -1), Complex(1, 1), Complex(-1, 1)};
  CHECK(point_in_polyline(square, Complex(0, 0)));
  CHECK(point_in_polyline(square, Complex(0.9, -0.9)));
  CHECK(!point_in_polyline(square, Complex(1.5, 0)));
}
