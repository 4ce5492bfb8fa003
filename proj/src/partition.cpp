#include "sqz/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "sqz/errors.hpp"
#include "sqz/simplex_search.hpp"

namespace sqz {

void BarrierSet::validate() const {
  if (!(r1 > 0.0) || !(r1 <= r2) || !(r2 < 1.0))
    throw std::domain_error("barrier set needs 0 < r1 <= r2 < 1");
  if (arcs.empty()) throw std::domain_error("barrier set needs at least one arc");
  for (const auto& a : arcs) {
    a.validate();
    if (a.radius < r1 - 1e-12 || a.radius > r2 + 1e-12)
      throw std::domain_error("barrier arc outside the enclosing annulus");
  }
}

double PartitionCandidate::log_radius(double theta) const {
  double s = c0;
  for (std::size_t k = 0; k < fourier.size(); ++k) {
    const double kt = (k + 1) * theta;
    s += fourier[k].first * std::cos(kt) + fourier[k].second * std::sin(kt);
  }
  return s;
}

double PartitionCandidate::lipschitz() const {
  double l = 0.0;
  for (std::size_t k = 0; k < fourier.size(); ++k)
    l += (k + 1) * (std::abs(fourier[k].first) + std::abs(fourier[k].second));
  return l;
}

RadialGraph PartitionCandidate::graph() const {
  RadialGraph g;
  g.log_radius = [*this](double theta) { return log_radius(theta); };
  g.lipschitz = lipschitz();
  return g;
}

namespace {

struct PartitionGrids {
  GridCondenser d2;  // field = outside cells; plate1 = closure(inside) + E
  GridCondenser d1;  // field = inside cells minus E; data boundary = curve + E
  double max_radius, min_radius;
};

PartitionGrids build_partition_grids(const BarrierSet& e, const PartitionCandidate& c,
                                     int resolution) {
  const double sigma_min = std::log(e.r1) - 1.2;
  const double margin_lo = sigma_min + 0.25;  // keep the puncture chart intact
  const double margin_hi = -3.0 * (-sigma_min) / resolution;

  // admissibility: curve inside the disk and the chart, no transversal
  // barrier crossings
  const int nprobe = 8 * resolution;
  double smin = 1e300, smax = -1e300;
  for (int k = 0; k < nprobe; ++k) {
    const double s = c.log_radius(2.0 * M_PI * k / nprobe);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (smax > margin_hi || smin < margin_lo)
    throw AdmissibilityError("candidate curve leaves the admissible annulus");

  const double snap_tol = (-sigma_min) / resolution;  // one grid cell in sigma
  for (const auto& arc : e.arcs) {
    const double sa = std::log(arc.radius);
    bool above = false, below = false;
    const int narc = 256;
    for (int k = 0; k <= narc; ++k) {
      const double t = arc.angle_lo() + 2.0 * arc.half_width * k / narc;
      const double d = c.log_radius(t) - sa;
      if (d > snap_tol) above = true;
      if (d < -snap_tol) below = true;
    }
    if (above && below)
      throw AdmissibilityError("candidate curve crosses a barrier arc transversally");
  }

  PartitionGrids out;
  const RadialGraph curve = c.graph();

  {
    LogPolarRaster r(sigma_min, 0.0, resolution);
    const std::vector<double> sig = r.column_values(curve);
    r.mark_circle(0.0, CellState::plate0, true);
    r.mark_radial_graph(curve, CellState::plate1, true);
    for (const auto& arc : e.arcs) r.mark_arc(arc, CellState::plate1, true);
    r.set_state_below_columns(sig, CellState::plate1);
    out.d2 = r.take();
  }
  {
    LogPolarRaster r(sigma_min, 0.0, resolution);
    const std::vector<double> sig = r.column_values(curve);
    r.mark_radial_graph(curve, CellState::plate0, true);
    for (const auto& arc : e.arcs) r.mark_arc(arc, CellState::plate0, true);
    r.exclude_outside_columns(sig);
    out.d1 = r.take();
  }

  out.max_radius = std::exp(smax);
  out.min_radius = std::exp(smin);
  return out;
}

}  // namespace

PartitionResult partition_objective(const BarrierSet& e, const PartitionCandidate& c,
                                    double alpha1, double alpha2, int resolution,
                                    const ToleranceConfig& tol) {
  e.validate();
  if (alpha1 < 0.0 || alpha2 < 0.0 || (alpha1 == 0.0 && alpha2 == 0.0))
    throw std::domain_error("weights must be nonnegative, at least one positive");
  if (resolution < 64) throw std::domain_error("partition needs resolution >= 64");

  PartitionGrids grids = build_partition_grids(e, c, resolution);

  PartitionResult res;
  res.candidate = c;
  res.alpha1 = alpha1;
  res.alpha2 = alpha2;
  res.resolution = resolution;
  res.max_radius = grids.max_radius;
  res.min_radius = grids.min_radius;

  // m(D2): condenser modulus, unit circle vs closure(inside) + E
  try {
    const PotentialField f2 = solve_dirichlet(grids.d2, condenser_potential(), tol);
    res.m2.value = 1.0 / f2.energy;
    res.m2.error_estimate = res.m2.value * std::max(f2.cg_residual, 1e-14);
    res.m2.resolution_used = resolution;
  } catch (const TopologyError& err) {
    throw AdmissibilityError(std::string("barrier not between the ring boundaries: ") +
                             err.what());
  }

  // m(D1, 0): Green-radius reduced module; boundary data log|z| on the curve
  // and on every barrier cell inside it
  {
    auto data = [](CellState, Complex at) { return std::log(std::abs(at)); };
    const PotentialField f1 = solve_dirichlet(grids.d1, data, tol);
    const double u0 = bottom_row_mean(grids.d1, f1.u);
    res.m1.value = u0 / (2.0 * M_PI);
    res.m1.conformal_radius = std::exp(u0);
  }

  res.objective = alpha1 * alpha1 * res.m1.value + alpha2 * alpha2 * res.m2.value;
  return res;
}

PartitionResult optimize_partition(const BarrierSet& e, double alpha1, double alpha2,
                                   int harmonics, int resolution,
                                   const ToleranceConfig& tol,
                                   OptimizeDiagnostics* diag) {
  e.validate();
  if (harmonics < 0 || harmonics > 8)
    throw std::domain_error("harmonics K must lie in [0, 8] at desk scale");

  PartitionCandidate init;
  init.c0 = std::log(std::sqrt(e.r1 * e.r2));
  init.fourier.assign(harmonics, {0.0, 0.0});
  try {
    partition_objective(e, init, alpha1, alpha2, resolution, tol);
  } catch (const std::exception& err) {
    throw std::runtime_error(std::string("no feasible starting candidate: ") +
                             err.what());
  }

  const int dim = 1 + 2 * harmonics;
  std::vector<double> x0(dim, 0.0);
  x0[0] = init.c0;
  std::vector<double> steps(dim, 0.03);
  steps[0] = 0.08;

  auto unpack = [&](const std::vector<double>& x) {
    PartitionCandidate c;
    c.c0 = x[0];
    c.fourier.resize(harmonics);
    for (int k = 0; k < harmonics; ++k)
      c.fourier[k] = {x[1 + 2 * k], x[2 + 2 * k]};
    return c;
  };

  // relaxed solver tolerance during the search; the returned result is
  // re-evaluated at the caller's tolerance below
  ToleranceConfig search_tol = tol;
  search_tol.solver_rel_tol = std::max(tol.solver_rel_tol, 1e-8);
  auto fn = [&](const std::vector<double>& x) -> double {
    try {
      return partition_objective(e, unpack(x), alpha1, alpha2, resolution, search_tol)
          .objective;
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  SimplexOptions opt;
  opt.max_iterations = 30 * dim;
  opt.f_tol = 1e-6;
  opt.x_tol = 1e-4;
  SimplexResult s = simplex_maximize(fn, x0, steps, opt);

  if (diag) {
    diag->iterations = s.iterations;
    diag->evaluations = s.evaluations;
    diag->infeasible = s.infeasible;
    diag->simplex_diameter = s.simplex_diameter;
    diag->objective_history = s.history;
  }
  return partition_objective(e, unpack(s.best_x), alpha1, alpha2, resolution, tol);
}

LocationCheck check_free_boundary_location(const PartitionResult& res,
                                           const BarrierSet& e, double alpha1,
                                           double alpha2, double tolerance) {
  LocationCheck c;
  c.max_radius = res.max_radius;
  c.min_radius = res.min_radius;
  c.outer_slack = e.r2 + tolerance - res.max_radius;
  c.inner_slack = res.min_radius - (e.r1 - tolerance);
  if (alpha1 < alpha2) {
    c.case_label = 'a';
    c.pass = c.outer_slack >= 0.0;
  } else if (alpha1 > alpha2) {
    c.case_label = 'b';
    c.pass = c.inner_slack >= 0.0;
  } else {
    c.case_label = 'c';
    c.pass = c.outer_slack >= 0.0 && c.inner_slack >= 0.0;
  }
  return c;
}

}  // namespace sqz
