#include "sqz/canonical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

void AnnulusSlitMap::validate() const {
  if (!(q >= 0.0) || q >= 1.0) throw std::domain_error("slit map: q in [0,1)");
  if (!(a > q) || !(a < 1.0)) throw std::domain_error("slit map: need q < a < 1");
  if (truncation < 1) throw std::domain_error("slit map: truncation >= 1");
}

namespace {
double tail_rel(double absw, double q, int K) {
  if (q == 0.0) return 0.0;
  const double q2 = q * q;
  const double qtail = std::pow(q2, K + 1);
  const double mw = std::max(absw, 1.0 / absw);
  if (qtail * mw >= 0.5) return std::numeric_limits<double>::infinity();
  return std::expm1(qtail * (absw + 1.0 / absw) / ((1.0 - q2) * (1.0 - qtail * mw)));
}
}  // namespace

double AnnulusSlitMap::boundary_error_bound() const {
  validate();
  // relative tail error of P(z/a) and P(za) on each boundary circle
  const double outer = std::expm1(std::log1p(tail_rel(1.0 / a, q, truncation)) +
                                  std::log1p(tail_rel(a, q, truncation)));
  const double inner = std::expm1(std::log1p(tail_rel(q / a, q, truncation)) +
                                  std::log1p(tail_rel(q * a, q, truncation)));
  return std::max(1.0 * outer, a * inner) + 1e-13;
}

Complex annulus_slit_map_eval(const AnnulusSlitMap& map, Complex z) {
  map.validate();
  const double az = std::abs(z);
  if (az < map.q - 1e-12 || az > 1.0 + 1e-12)
    throw std::domain_error("annulus_slit_map_eval: z outside the closed annulus");
  const Complex p1 = prime_product(z / map.a, map.q, map.truncation).value;
  const Complex p2 = prime_product(z * map.a, map.q, map.truncation).value;
  return map.a * p1 / p2;
}

SlitMapCertificate certify_slit_map(const AnnulusSlitMap& map, int samples) {
  map.validate();
  SlitMapCertificate c;
  c.samples = samples;
  c.tail_bound = map.boundary_error_bound();
  c.zero_residual = std::abs(annulus_slit_map_eval(map, Complex(map.a, 0.0)));

  double prev_arg = 0.0;
  double total_turn = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * M_PI * k / samples;
    if (map.q > 0.0) {
      const Complex fi = annulus_slit_map_eval(map, std::polar(map.q, t));
      c.max_inner_dev = std::max(c.max_inner_dev, std::abs(std::abs(fi) - map.a));
    }
    const Complex fo = annulus_slit_map_eval(map, std::polar(1.0, t));
    c.max_outer_dev = std::max(c.max_outer_dev, std::abs(std::abs(fo) - 1.0));
    const double a = std::arg(fo);
    if (k > 0) {
      double d = a - prev_arg;
      while (d > M_PI) d -= 2.0 * M_PI;
      while (d < -M_PI) d += 2.0 * M_PI;
      total_turn += d;
    }
    prev_arg = a;
  }
  // close the loop
  {
    const Complex f0 = annulus_slit_map_eval(map, Complex(1.0, 0.0));
    double d = std::arg(f0) - prev_arg;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    total_turn += d;
  }
  c.winding = static_cast<int>(std::lround(total_turn / (2.0 * M_PI)));
  return c;
}

// ---------------------------------------------------------------------------

namespace {

// Central/one-sided derivative of u in the row direction at cell (i,j).
double du_drow(const GridCondenser& g, const std::vector<double>& u, int i, int j) {
  const double c = u[g.idx(i, j)];
  const double up = (i + 1 < g.rows) ? u[g.idx(i + 1, j)] : std::nan("");
  const double dn = (i - 1 >= 0) ? u[g.idx(i - 1, j)] : std::nan("");
  const bool has_up = !std::isnan(up), has_dn = !std::isnan(dn);
  if (has_up && has_dn) return (up - dn) / (2.0 * g.drow);
  if (has_up) return (up - c) / g.drow;
  if (has_dn) return (c - dn) / g.drow;
  return 0.0;
}

double du_dcol(const GridCondenser& g, const std::vector<double>& u, int i, int j) {
  const int jp = g.periodic_cols ? (j + 1) % g.cols : j + 1;
  const int jm = g.periodic_cols ? (j - 1 + g.cols) % g.cols : j - 1;
  const double c = u[g.idx(i, j)];
  const double up = (jp >= 0 && jp < g.cols) ? u[g.idx(i, jp)] : std::nan("");
  const double dn = (jm >= 0 && jm < g.cols) ? u[g.idx(i, jm)] : std::nan("");
  const bool has_up = !std::isnan(up), has_dn = !std::isnan(dn);
  if (has_up && has_dn) return (up - dn) / (2.0 * g.dcol);
  if (has_up) return (up - c) / g.dcol;
  if (has_dn) return (c - dn) / g.dcol;
  return 0.0;
}

}  // namespace

UniformizationResult annulus_uniformize(const RingDomain& d, Complex marked,
                                        int resolution, const RasterOptions& opt,
                                        const ToleranceConfig& tol) {
  d.validate();
  if (d.inner_degenerate())
    throw std::domain_error("annulus_uniformize: degenerate inner boundary has no annulus image");
  const GridCondenser g = rasterize(d, resolution, GridKind::log_polar, opt);

  // u = 0 on the inner continuum (plate1), u = 1 on the outer (plate0)
  auto data = [](CellState plate, Complex) {
    return plate == CellState::plate0 ? 1.0 : 0.0;
  };
  const PotentialField f = solve_dirichlet(g, data, tol);
  const double cap = f.energy;

  UniformizationResult out;
  out.modulus = 1.0 / cap;
  out.inner_radius = std::exp(-2.0 * M_PI * out.modulus);
  out.resolution_used = resolution;
  out.cg_iterations = f.cg_iterations;

  // marked point: normalized potential value
  const double am = std::abs(marked);
  int i0, j0;
  if (am == 0.0) {
    out.u_at_marked = bottom_row_mean(g, f.u);
    i0 = 0;
    j0 = 0;
  } else {
    const double rc = std::log(am), cc = std::arg(marked);
    i0 = static_cast<int>(std::floor((rc - g.row0) / g.drow));
    j0 = static_cast<int>(std::floor((wrap_angle(cc) - g.col0) / g.dcol));
    j0 = (j0 % g.cols + g.cols) % g.cols;
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj) {
        const int ii = i0 + di;
        const int jj = ((j0 + dj) % g.cols + g.cols) % g.cols;
        if (ii < 0 || ii >= g.rows)
          throw std::domain_error("annulus_uniformize: marked point outside the chart");
        if (g.at(ii, jj) != CellState::field)
          throw std::domain_error(
              "annulus_uniformize: marked point within 2 cells of the boundary");
      }
    out.u_at_marked = interpolate(g, f.u, rc, cc);
  }
  const double t = std::pow(out.inner_radius, 1.0 - out.u_at_marked);
  out.transported = Complex(t, 0.0);  // marked point normalized to the positive axis

  // Harmonic conjugate along grid paths (cut at the column opposite the
  // marked point), for the boundary correspondence samples.
  const int jcut = (j0 + g.cols / 2) % g.cols;
  std::vector<double> v(g.cell.size(), std::nan(""));
  const std::int64_t c0 = g.idx(i0, j0);
  v[c0] = 0.0;
  // vertical sweep along column j0
  for (int i = i0 + 1; i < g.rows; ++i) {
    if (std::isnan(f.u[g.idx(i, j0)])) break;
    const double mid = 0.5 * (du_dcol(g, f.u, i - 1, j0) + du_dcol(g, f.u, i, j0));
    v[g.idx(i, j0)] = v[g.idx(i - 1, j0)] - mid * g.drow;
  }
  for (int i = i0 - 1; i >= 0; --i) {
    if (std::isnan(f.u[g.idx(i, j0)])) break;
    const double mid = 0.5 * (du_dcol(g, f.u, i + 1, j0) + du_dcol(g, f.u, i, j0));
    v[g.idx(i, j0)] = v[g.idx(i + 1, j0)] + mid * g.drow;
  }
  // horizontal sweeps, stopping at the cut
  for (int i = 0; i < g.rows; ++i) {
    if (std::isnan(v[g.idx(i, j0)])) continue;
    for (int j = j0;; ) {
      const int jn = (j + 1) % g.cols;
      if (j == jcut || jn == j0) break;
      if (std::isnan(f.u[g.idx(i, jn)])) break;
      const double mid = 0.5 * (du_drow(g, f.u, i, j) + du_drow(g, f.u, i, jn));
      v[g.idx(i, jn)] = v[g.idx(i, j)] + mid * g.dcol;
      j = jn;
    }
    for (int j = j0;; ) {
      const int jn = (j - 1 + g.cols) % g.cols;
      if (jn == jcut || jn == j0) break;
      if (std::isnan(f.u[g.idx(i, jn)])) break;
      const double mid = 0.5 * (du_drow(g, f.u, i, j) + du_drow(g, f.u, i, jn));
      v[g.idx(i, jn)] = v[g.idx(i, j)] - mid * g.dcol;
      j = jn;
    }
  }
  // outer-boundary correspondence: topmost valued cell per column
  for (int j = 0; j < g.cols; ++j) {
    for (int i = g.rows - 1; i >= 0; --i) {
      if (std::isnan(f.u[g.idx(i, j)]) || std::isnan(v[g.idx(i, j)])) continue;
      if (g.at(i, j) == CellState::plate0) {
        out.boundary_correspondence.push_back(
            BoundarySample{g.col_coord(j), wrap_angle(2.0 * M_PI * v[g.idx(i, j)] / cap)});
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CanonicalMapResult slit_radii(const RingDomain& d, Complex z, int resolution,
                              const RasterOptions& opt, const ToleranceConfig& tol) {
  d.validate();
  CanonicalMapResult r;

  // punctured disk: Moebius-normalize the puncture to 0; the degenerate
  // continuum contributes slit radius 0
  if (d.inner_degenerate()) {
    const auto* oc = std::get_if<Circle>(&d.outer);
    if (!oc || std::abs(oc->center) > 1e-15 || std::abs(oc->radius - 1.0) > 1e-15)
      throw std::domain_error("slit_radii: punctured domains supported on the unit disk only");
    const Complex p = std::get<PointMarker>(d.inner).at;
    if (!(std::abs(z) < 1.0)) throw std::domain_error("slit_radii: z not interior");
    if (std::abs(z - p) == 0.0)
      throw std::domain_error("slit_radii: z coincides with the puncture");
    MoebiusDiskAutomorphism m;
    m.a = p;
    r.modulus = std::numeric_limits<double>::infinity();
    r.inner_radius = 0.0;
    r.r_toward_outer = std::abs(apply_moebius(m, z));
    r.r_toward_inner = 0.0;
    r.error_estimate = 0.0;
    r.resolution_used = 0;
    return r;
  }

  // exact annulus: the uniformization is the identity up to rotation
  const auto* oc = std::get_if<Circle>(&d.outer);
  const auto* ic = std::get_if<Circle>(&d.inner);
  if (oc && ic && std::abs(oc->center) < 1e-15 && std::abs(ic->center) < 1e-15 &&
      std::abs(oc->radius - 1.0) < 1e-15) {
    const double s = ic->radius;
    const double t = std::abs(z);
    if (!(t > s) || !(t < 1.0)) throw std::domain_error("slit_radii: z not interior");
    r.modulus = std::log(1.0 / s) / (2.0 * M_PI);
    r.inner_radius = s;
    r.r_toward_outer = t;
    r.r_toward_inner = s / t;
    r.error_estimate = 0.0;
    r.resolution_used = 0;
    return r;
  }

  // general ring: two-resolution uniformization with Richardson extrapolation
  // of the modulus and the transported radius (both O(h^2) in the grid step)
  const UniformizationResult coarse =
      annulus_uniformize(d, z, std::max(32, resolution / 2), opt, tol);
  const UniformizationResult fine = annulus_uniformize(d, z, resolution, opt, tol);
  const double th = std::abs(fine.transported);
  const double t2h = std::abs(coarse.transported);
  const double t = std::clamp(th + (th - t2h) / 3.0, 1e-12, 1.0 - 1e-12);
  const double m = fine.modulus + (fine.modulus - coarse.modulus) / 3.0;
  const double s = std::exp(-2.0 * M_PI * m);
  r.modulus = m;
  r.inner_radius = s;
  r.r_toward_outer = t;
  r.r_toward_inner = s / t;
  r.error_estimate = (std::abs(th - t2h) + std::abs(fine.inner_radius - coarse.inner_radius)) / 3.0 +
                     1e-12;
  r.resolution_used = resolution;
  return r;
}

}  // namespace sqz
