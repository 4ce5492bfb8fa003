#pragma once

#include "sqz/domains.hpp"
#include "sqz/grid.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

struct ModulusResult {
  double value = 0.0;           // modulus of the doubly connected domain
  double error_estimate = 0.0;  // two-grid Richardson estimate when available
  int resolution_used = 0;
};

struct ReducedModuleResult {
  double value = 0.0;             // (1/2pi) log(conformal radius)
  double conformal_radius = 0.0;
};

// Capacity of the condenser: Dirichlet energy of the potential with u = 0 on
// plate0 and u = 1 on plate1. Throws TopologyError on a disconnected field
// and a degenerate-condenser error when the plates touch.
double capacity(const GridCondenser& g, const ToleranceConfig& tol = {});

// Modulus = 1 / capacity on a single grid (error estimate from the solver
// residual only).
ModulusResult ring_modulus(const GridCondenser& g, const ToleranceConfig& tol = {});

// Rasterizes the ring domain at resolution/2 and resolution and Richardson-
// extrapolates; the two-grid difference feeds error_estimate.
ModulusResult ring_modulus(const RingDomain& d, int resolution,
                           GridKind kind = GridKind::log_polar,
                           const RasterOptions& opt = {},
                           const ToleranceConfig& tol = {});

// Reduced module m(D, z0) = (1/2pi) log R from the regular part of the Green
// function: solve the Dirichlet problem with data log|z - z0| and read the
// value at z0 (grid interpolation, or the exact circle mean at a log-polar
// puncture). Requires a simply connected field containing z0.
ReducedModuleResult reduced_module(const GridCondenser& g, Complex z0,
                                   const ToleranceConfig& tol = {});

// Simply connected domain bounded by a circle, rasterized for reduced_module.
GridCondenser raster_disk(const Circle& outer, int resolution, GridKind kind,
                          const RasterOptions& opt = {});

// Angular measure of the image of the outer-circle arc [theta_lo, theta_hi]
// under the conformal map of d1 onto an annulus sending the outer continuum
// to the unit circle: 2pi * (flux through the arc's sector) / (total flux).
// d1 must have a concentric circle as inner boundary and the unit circle
// (possibly with whiskers) outside.
double mapped_arc_measure(const RingDomain& d1, double theta_lo, double theta_hi,
                          int resolution, const ToleranceConfig& tol = {});

struct PolarizeResult {
  GridCondenser condenser;
  double snapped_radius = 0.0;  // circle radius after snap-to-grid
};

// Polarization of the condenser with respect to the circle |z| = t (snapped
// to a grid row): plate1 mass moves to the inner side, plate0 to the outer
// side. Capacity never increases. Pure-lattice log-polar condensers only.
PolarizeResult polarize(const GridCondenser& g, double t);

// Seeded random pure-lattice ring condenser: plate1 = inner circle plus a few
// random arc slits, plate0 = unit circle. Drives the polarization tests.
GridCondenser random_lattice_ring_condenser(std::uint64_t seed, int rows);

// Seeded circle radius whose lattice reflection keeps every plate cell on the
// grid (no extend-grid error for this condenser).
double random_admissible_polarization_radius(const GridCondenser& g, std::uint64_t seed);

}  // namespace sqz
