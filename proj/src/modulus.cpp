#include "sqz/modulus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {
void check_condenser(const GridCondenser& g) {
  if (g.count(CellState::plate0) == 0 || g.count(CellState::plate1) == 0)
    throw TopologyError("condenser needs two nonempty plates");
  if (plates_adjacent(g))
    throw TopologyError("degenerate condenser: plates touch");
  if (!field_connected(g))
    throw TopologyError("condenser field is disconnected");
  if (!field_touches(g, CellState::plate0) || !field_touches(g, CellState::plate1))
    throw TopologyError("condenser field must be adjacent to both plates");
}
}  // namespace

double capacity(const GridCondenser& g, const ToleranceConfig& tol) {
  check_condenser(g);
  const PotentialField f = solve_dirichlet(g, condenser_potential(), tol);
  return f.energy;
}

ModulusResult ring_modulus(const GridCondenser& g, const ToleranceConfig& tol) {
  check_condenser(g);
  const PotentialField f = solve_dirichlet(g, condenser_potential(), tol);
  ModulusResult r;
  r.value = 1.0 / f.energy;
  r.error_estimate = r.value * std::max(f.cg_residual, 1e-14);
  r.resolution_used = g.rows;
  return r;
}

ModulusResult ring_modulus(const RingDomain& d, int resolution, GridKind kind,
                           const RasterOptions& opt, const ToleranceConfig& tol) {
  if (resolution < 64)
    throw std::domain_error("two-grid ring_modulus needs resolution >= 64");
  const GridCondenser coarse = rasterize(d, resolution / 2, kind, opt);
  const GridCondenser fine = rasterize(d, resolution, kind, opt);
  const double m2h = ring_modulus(coarse, tol).value;
  const double mh = ring_modulus(fine, tol).value;
  ModulusResult r;
  r.value = mh + (mh - m2h) / 3.0;  // O(h^2) Richardson step
  r.error_estimate = std::abs(mh - m2h) / 3.0 + std::abs(mh) * 1e-10;
  r.resolution_used = resolution;
  return r;
}

GridCondenser raster_disk(const Circle& outer, int resolution, GridKind kind,
                          const RasterOptions& opt) {
  if (resolution < 32) throw std::domain_error("resolution must be >= 32");
  if (kind == GridKind::log_polar) {
    if (!(std::abs(outer.center) < outer.radius))
      throw std::domain_error("log-polar disk raster needs the origin inside");
    if (std::abs(outer.center) < 1e-15) {
      const double smax = std::log(outer.radius);
      LogPolarRaster r(smax - 2.5, smax, resolution);
      r.mark_circle(smax, CellState::plate0, opt.subcell);
      return r.take();
    }
    const RadialGraph gr = graph_of_circle(outer);
    auto [lo, hi] = gr.range_on(0.0, 2.0 * M_PI);
    LogPolarRaster r(lo - 1.2, hi + 0.05, resolution);
    r.mark_radial_graph(gr, CellState::plate0, opt.subcell);
    r.exclude_outside(gr);
    return r.take();
  }
  const double pad = 2.2 * 2.0 * outer.radius / resolution;
  CartesianRaster r(outer.center - Complex(outer.radius + pad, outer.radius + pad),
                    outer.center + Complex(outer.radius + pad, outer.radius + pad),
                    resolution);
  r.mark_circle(outer, CellState::plate0, opt.subcell);
  r.exclude_outside_circle(outer);
  return r.take();
}

ReducedModuleResult reduced_module(const GridCondenser& g, Complex z0,
                                   const ToleranceConfig& tol) {
  if (g.count(CellState::plate0) + g.count(CellState::plate1) == 0)
    throw TopologyError("reduced_module: no boundary plate");
  if (!field_connected(g)) throw TopologyError("reduced_module: field disconnected");
  if (!complement_touches_border(g))
    throw TopologyError("reduced_module: field is multiply connected");

  auto data = [z0](CellState, Complex at) { return std::log(std::abs(at - z0)); };
  const PotentialField f = solve_dirichlet(g, data, tol);

  double u0;
  if (g.kind == GridKind::log_polar && std::abs(z0) == 0.0) {
    u0 = bottom_row_mean(g, f.u);  // circle mean = value at the puncture
  } else {
    double rc, cc;
    if (g.kind == GridKind::log_polar) {
      if (std::abs(z0) < std::exp(g.row0))
        throw std::domain_error("reduced_module: point below the grid chart");
      rc = std::log(std::abs(z0));
      cc = std::arg(z0);
    } else {
      rc = z0.imag();
      cc = z0.real();
    }
    // the marked point must be interior: its interpolation cell corners are
    // field cells (interpolate throws otherwise); also keep 2 cells of room
    const int i0 = static_cast<int>(std::floor((rc - g.row0) / g.drow));
    if (i0 < 1 || i0 > g.rows - 3)
      throw std::domain_error("reduced_module: point too close to the chart border");
    try {
      u0 = interpolate(g, f.u, rc, cc);
    } catch (const std::domain_error&) {
      throw std::domain_error("reduced_module: point on or outside the boundary");
    }
  }
  ReducedModuleResult r;
  r.value = u0 / (2.0 * M_PI);
  r.conformal_radius = std::exp(u0);
  return r;
}

double mapped_arc_measure(const RingDomain& d1, double theta_lo, double theta_hi,
                          int resolution, const ToleranceConfig& tol) {
  const bool outer_ok = std::holds_alternative<Circle>(d1.outer) ||
                        std::holds_alternative<UnitCircleWithSlits>(d1.outer);
  if (!outer_ok)
    throw std::domain_error("mapped_arc_measure: outer boundary must contain the unit circle");
  if (const auto* c = std::get_if<Circle>(&d1.outer)) {
    if (std::abs(c->center) > 1e-15 || std::abs(c->radius - 1.0) > 1e-15)
      throw std::domain_error("mapped_arc_measure: outer circle must be the unit circle");
  }
  const auto* ic = std::get_if<Circle>(&d1.inner);
  if (!ic || std::abs(ic->center) > 1e-15)
    throw std::domain_error(
        "mapped_arc_measure: inner boundary must be a circle centered at 0");

  const GridCondenser g = rasterize(d1, resolution, GridKind::log_polar);
  check_condenser(g);
  // Potential 1 on the outer continuum (plate0 by the ring convention).
  auto data = [](CellState plate, Complex) {
    return plate == CellState::plate0 ? 1.0 : 0.0;
  };
  const PotentialField f = solve_dirichlet(g, data, tol);
  const double total = plate_flux_total(g, f, CellState::plate0);
  const double part = plate_flux_in_sector(g, f, CellState::plate0, theta_lo, theta_hi);
  return 2.0 * M_PI * part / total;
}

PolarizeResult polarize(const GridCondenser& g, double t) {
  if (g.kind != GridKind::log_polar)
    throw std::invalid_argument("polarize: cartesian polarization is rejected; use a log-polar grid");
  if (!g.fixes.empty())
    throw std::invalid_argument(
        "polarize: requires a pure-lattice condenser (rasterize with subcell=false)");
  if (!(t > 0.0) || !(t < 1.0))
    throw std::domain_error("polarize: circle radius must lie in (0,1)");

  const double sigma_t = std::log(t);
  int k = static_cast<int>(std::lround((sigma_t - g.row0) / g.drow));
  k = std::clamp(k, 0, g.rows - 1);

  auto refl = [&](int i) { return 2 * k - i; };
  auto is = [&](int i, int j, CellState s) {
    return i >= 0 && i < g.rows && g.at(i, j) == s;
  };

  // representability of the polarized plates
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      if (g.at(i, j) == CellState::plate1 && i > k && refl(i) < 0)
        throw std::domain_error("polarize: reflection exits the grid; extend the grid");
      if (g.at(i, j) == CellState::plate0 && i < k && refl(i) >= g.rows)
        throw std::domain_error("polarize: reflection exits the grid; extend the grid");
    }

  GridCondenser out = g;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      const int ri = refl(i);
      bool p1, p0;
      if (i == k) {
        p1 = is(i, j, CellState::plate1);
        p0 = is(i, j, CellState::plate0);
      } else if (i < k) {  // inner side: plate1 grows, plate0 shrinks
        p1 = is(i, j, CellState::plate1) || is(ri, j, CellState::plate1);
        p0 = is(i, j, CellState::plate0) && is(ri, j, CellState::plate0);
      } else {  // outer side
        p1 = is(i, j, CellState::plate1) && is(ri, j, CellState::plate1);
        p0 = is(i, j, CellState::plate0) || is(ri, j, CellState::plate0);
      }
      CellState& s = out.cell[out.idx(i, j)];
      if (p1 && p0) throw TopologyError("polarize: plates collide");
      if (p1 || p0) {
        if (s == CellState::excluded)
          throw std::domain_error("polarize: reflection exits the chart; extend the grid");
        s = p1 ? CellState::plate1 : CellState::plate0;
      } else {
        if (s != CellState::excluded) s = CellState::field;
      }
    }
  return {std::move(out), std::exp(g.row0 + k * g.drow)};
}

GridCondenser random_lattice_ring_condenser(std::uint64_t seed, int rows) {
  std::mt19937_64 rng(seed);
  LogPolarRaster r(std::log(0.15), 0.0, rows);
  GridCondenser& g = r.grid();
  r.mark_circle(0.0, CellState::plate0, false);
  r.mark_circle(std::log(0.15), CellState::plate1, false);

  std::uniform_int_distribution<int> narcs(1, 4);
  std::uniform_int_distribution<int> urow(4, rows - 6);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> uhw(0.1, 1.0);
  const int n = narcs(rng);
  for (int k = 0; k < n; ++k) {
    CircularArcSlit arc;
    arc.radius = std::exp(g.row0 + urow(rng) * g.drow);
    arc.center_angle = uang(rng);
    arc.half_width = uhw(rng);
    r.mark_arc(arc, CellState::plate1, false);
  }
  return r.take();
}

double random_admissible_polarization_radius(const GridCondenser& g, std::uint64_t seed) {
  int max_plate1_row = 0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j)
      if (g.at(i, j) == CellState::plate1) max_plate1_row = std::max(max_plate1_row, i);
  const int k_min = std::min((max_plate1_row + 1) / 2 + 1, g.rows - 2);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> uk(k_min, g.rows - 2);
  return std::exp(g.row0 + uk(rng) * g.drow);
}

}  // namespace sqz
