#include "sqz/domains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

double ang_dist(double a, double b) {
  // distance between angles mod 2pi, in [0, pi]
  double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, 2.0 * M_PI - d);
}

}  // namespace

void CircularArcSlit::validate() const {
  if (!(radius > 0.0) || !(radius < 1.0))
    throw std::domain_error("slit radius must lie in (0,1)");
  if (!(half_width > 0.0) || !(half_width < M_PI))
    throw std::domain_error("slit half_width must lie in (0,pi)");
}

bool CircularArcSlit::contains_angle(double theta) const {
  return ang_dist(theta, center_angle) <= half_width;
}

void SlitDiskDomain::validate() const {
  for (const auto& s : slits) s.validate();
  for (std::size_t i = 0; i < slits.size(); ++i)
    for (std::size_t j = i + 1; j < slits.size(); ++j) {
      if (slits[i].radius != slits[j].radius) continue;
      const double gap = ang_dist(slits[i].center_angle, slits[j].center_angle);
      if (gap <= slits[i].half_width + slits[j].half_width)
        throw std::domain_error("slit arcs must be pairwise disjoint");
    }
}

void RadialSegment::validate() const {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo))
    throw std::domain_error("radial segment needs 0 < rho_lo < rho_hi");
}

void RingDomain::validate() const {
  const bool outer_pt = std::holds_alternative<PointMarker>(outer);
  if (outer_pt) throw std::domain_error("outer boundary cannot be degenerate");
}

void MoebiusDiskAutomorphism::validate() const {
  if (!(std::abs(a) < 1.0))
    throw std::domain_error("Moebius parameter requires |a| < 1");
}

MoebiusDiskAutomorphism MoebiusDiskAutomorphism::inverse() const {
  // w = e^{ir}(z-a)/(1-conj(a)z)  =>  z = (e^{-ir} w + a) / (1 + conj(a) e^{-ir} w)
  // which is the automorphism with a' = -a e^{ir}, rotation' = -rotation.
  MoebiusDiskAutomorphism inv;
  inv.a = -a * std::polar(1.0, rotation);
  inv.rotation = -rotation;
  return inv;
}

Complex apply_moebius(const MoebiusDiskAutomorphism& t, Complex z) {
  t.validate();
  return std::polar(1.0, t.rotation) * (z - t.a) / (1.0 - std::conj(t.a) * z);
}

Circle moebius_circle_image(const MoebiusDiskAutomorphism& t, double r) {
  t.validate();
  if (!(r > 0.0) || !(r < 1.0))
    throw std::domain_error("moebius_circle_image: r must lie in (0,1)");
  if (std::abs(t.a) == 0.0) return Circle{Complex(0, 0), r};
  // The image circle is symmetric about the line through 0 and a, so its
  // diameter is the image of the two axis points.
  const Complex dir = t.a / std::abs(t.a);
  const Complex w1 = apply_moebius(t, r * dir);
  const Complex w2 = apply_moebius(t, -r * dir);
  return Circle{0.5 * (w1 + w2), 0.5 * std::abs(w1 - w2)};
}

RingDomain make_annulus(double r) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("annulus radius in (0,1)");
  return RingDomain{Circle{Complex(0, 0), 1.0}, Circle{Complex(0, 0), r}};
}

RingDomain make_slit_ring(const CircularArcSlit& slit) {
  slit.validate();
  return RingDomain{Circle{Complex(0, 0), 1.0}, slit};
}

RingDomain make_punctured_disk(Complex p) {
  if (!(std::abs(p) < 1.0)) throw std::domain_error("puncture must be interior");
  return RingDomain{Circle{Complex(0, 0), 1.0}, PointMarker{p}};
}

RingDomain make_moebius_annulus(double r, const MoebiusDiskAutomorphism& t) {
  return RingDomain{Circle{Complex(0, 0), 1.0}, moebius_circle_image(t, r)};
}

SlitDiskDomain build_symmetric_slit_disk(int n, double r, double alpha) {
  if (n < 2) throw std::domain_error("need connectivity n >= 2");
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("slit radius in (0,1)");
  if (!(alpha > 0.0) || alpha >= M_PI / (n - 1))
    throw std::domain_error("overlapping slits: need 0 < alpha < pi/(n-1)");
  SlitDiskDomain d;
  for (int k = 0; k < n - 1; ++k)
    d.slits.push_back({r, wrap_angle(2.0 * M_PI * k / (n - 1)), alpha});
  d.validate();
  return d;
}

ThreefoldExample build_threefold_example(double a) {
  if (!(a > 1.0 + 1e-9))
    throw std::domain_error("threefold example: slits degenerate for a <= 1");
  ThreefoldExample e;
  e.a = a;
  for (int k = 0; k < 3; ++k) {
    const double ang = wrap_angle(2.0 * M_PI * k / 3.0);
    e.slits[k] = RadialSegment{ang, 1.0, a};
    // z -> 1/z sends [1,a] e^{i ang} to [1/a,1] e^{-i ang}
    e.inverted_slits[k] = RadialSegment{wrap_angle(-ang), 1.0 / a, 1.0};
  }
  e.marked_point = Complex(0, 0);
  return e;
}

std::pair<double, double> RadialGraph::range_on(double a, double b) const {
  if (range) return range(a, b);
  constexpr int kSamples = 9;
  double lo = 1e300, hi = -1e300;
  for (int s = 0; s < kSamples; ++s) {
    const double t = a + (b - a) * s / (kSamples - 1);
    const double v = log_radius(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double pad = lipschitz * (b - a) / (2.0 * (kSamples - 1));
  return {lo - pad, hi + pad};
}

RadialGraph graph_of_circle(const Circle& c) {
  const double d = std::abs(c.center);
  if (!(d < c.radius))
    throw std::domain_error("graph_of_circle: origin must lie strictly inside");
  const double phi = (d == 0.0) ? 0.0 : std::arg(c.center);
  const double R2md2 = c.radius * c.radius - d * d;
  auto rho = [d, phi, R2md2](double theta) {
    const double b = d * std::cos(theta - phi);
    return b + std::sqrt(b * b + R2md2);
  };
  RadialGraph g;
  g.log_radius = [rho](double theta) { return std::log(rho(theta)); };
  // rho is monotone in cos(theta - phi): extremes at interval ends or where
  // theta - phi hits 0 / pi.
  g.range = [rho, phi](double a, double b) {
    double lo = 1e300, hi = -1e300;
    auto consider = [&](double t) {
      const double v = std::log(rho(t));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    consider(a);
    consider(b);
    for (int k = -2; k <= 2; ++k) {
      const double t0 = phi + k * M_PI;
      if (t0 > a && t0 < b) consider(t0);
    }
    return std::pair<double, double>(lo, hi);
  };
  return g;
}

// ---------------------------------------------------------------------------
// LogPolarRaster

LogPolarRaster::LogPolarRaster(double sigma_min, double sigma_max, int rows, int cols) {
  if (rows < 8) throw std::domain_error("log-polar raster needs at least 8 rows");
  const double range = sigma_max - sigma_min;
  if (!(range > 0.0)) throw std::domain_error("empty sigma range");
  if (cols <= 0) {
    // power-of-two column count nearest to an isotropic aspect: doubling the
    // rows doubles the columns exactly, so refined grids subdivide coarse
    // cells and field regions nest across resolutions
    const double ideal = 2.0 * M_PI * rows / range;
    const int np2 = 1 << static_cast<int>(std::lround(std::log2(ideal)));
    int cap = 1;
    while (2 * cap <= 2 * rows) cap *= 2;
    cols = std::min(np2, cap);
    if (cols < 16) throw std::domain_error("log-polar raster: range too wide");
  }
  g_.kind = GridKind::log_polar;
  g_.rows = rows;
  g_.cols = cols;
  g_.drow = range / rows;
  g_.dcol = 2.0 * M_PI / cols;
  // cell edges on the chart bounds: centers sit half a step inside
  g_.row0 = sigma_min + 0.5 * g_.drow;
  g_.col0 = 0.5 * g_.dcol;
  g_.periodic_cols = true;
  g_.cell.assign(static_cast<std::size_t>(rows) * cols, CellState::field);
}

int LogPolarRaster::snap_row(double sigma) const {
  int i = static_cast<int>(std::lround((sigma - g_.row0) / g_.drow));
  return std::clamp(i, 0, g_.rows - 1);
}

int LogPolarRaster::snap_col(double theta) const {
  int j = static_cast<int>(std::lround((wrap_angle(theta) - g_.col0) / g_.dcol));
  return (j % g_.cols + g_.cols) % g_.cols;
}

void LogPolarRaster::set_plate(int i, int j, CellState plate) {
  CellState& s = g_.cell[g_.idx(i, j)];
  if (s == plate) return;
  if (s == CellState::field || s == CellState::excluded || plate == CellState::excluded) {
    if (s != CellState::field && plate == CellState::excluded) return;
    if ((s == CellState::plate0 && plate == CellState::plate1) ||
        (s == CellState::plate1 && plate == CellState::plate0))
      throw TopologyError("plate continua collide on the grid; refine the resolution");
    s = plate;
    return;
  }
  throw TopologyError("plate continua collide on the grid; refine the resolution");
}

void LogPolarRaster::record_crossing(int i, int j, std::uint8_t dir, double frac,
                                     CellState plate, Complex at) {
  if (i < 0 || i >= g_.rows) return;
  j = (j % g_.cols + g_.cols) % g_.cols;
  if (frac < 0.02 || frac > 1.7) return;
  crossings_.push_back({g_.idx(i, j), dir, std::max(frac, 0.05), plate, at});
}

void LogPolarRaster::mark_circle(double sigma, CellState plate, bool subcell) {
  const double half = 0.5 * g_.drow;
  for (int i = 0; i < g_.rows; ++i) {
    const double c = g_.row_coord(i);
    if (sigma >= c - half - 1e-15 && sigma <= c + half + 1e-15)
      for (int j = 0; j < g_.cols; ++j) set_plate(i, j, plate);
  }
  if (!subcell) return;
  for (int i = 0; i < g_.rows; ++i) {
    const double c = g_.row_coord(i);
    const double up = (sigma - c) / g_.drow;  // crossing above this row center
    for (int j = 0; j < g_.cols; ++j) {
      const Complex at = std::polar(std::exp(sigma), g_.col_coord(j));
      if (up > 0.0) record_crossing(i, j, kDirRowPlus, up, plate, at);
      if (up < 0.0) record_crossing(i, j, kDirRowMinus, -up, plate, at);
    }
  }
}

void LogPolarRaster::mark_radial_graph(const RadialGraph& c, CellState plate, bool subcell) {
  const double half = 0.5 * g_.drow;
  std::vector<double> sig(g_.cols);
  for (int j = 0; j < g_.cols; ++j) sig[j] = c.log_radius(g_.col_coord(j));

  for (int j = 0; j < g_.cols; ++j) {
    const double a = g_.col_coord(j) - 0.5 * g_.dcol;
    const double b = g_.col_coord(j) + 0.5 * g_.dcol;
    auto [lo, hi] = c.range_on(a, b);
    const int ilo = std::max(0, static_cast<int>(std::floor((lo - g_.row0 - half) / g_.drow)));
    const int ihi = std::min(g_.rows - 1,
                             static_cast<int>(std::ceil((hi - g_.row0 + half) / g_.drow)));
    for (int i = ilo; i <= ihi; ++i) {
      const double cc = g_.row_coord(i);
      if (hi >= cc - half - 1e-15 && lo <= cc + half + 1e-15) set_plate(i, j, plate);
    }
  }
  if (!subcell) return;

  // vertical (row-direction) crossings at each column center
  for (int j = 0; j < g_.cols; ++j) {
    const double s = sig[j];
    const Complex at = std::polar(std::exp(s), g_.col_coord(j));
    const int near = static_cast<int>(std::floor((s - g_.row0) / g_.drow));
    for (int i = near - 2; i <= near + 2; ++i) {
      if (i < 0 || i >= g_.rows) continue;
      const double d = (s - g_.row_coord(i)) / g_.drow;
      if (d > 0.0) record_crossing(i, j, kDirRowPlus, d, plate, at);
      if (d < 0.0) record_crossing(i, j, kDirRowMinus, -d, plate, at);
    }
  }
  // horizontal (column-direction) crossings between adjacent column centers
  for (int j = 0; j < g_.cols; ++j) {
    const int jn = (j + 1) % g_.cols;
    const double ta = g_.col_coord(j);
    const double tb = ta + g_.dcol;
    const double sa = sig[j], sb = sig[jn];
    const double lo = std::min(sa, sb), hi = std::max(sa, sb);
    const int ilo = std::max(0, static_cast<int>(std::ceil((lo - g_.row0) / g_.drow)));
    const int ihi = std::min(g_.rows - 1, static_cast<int>(std::floor((hi - g_.row0) / g_.drow)));
    for (int i = ilo; i <= ihi; ++i) {
      const double level = g_.row_coord(i);
      double fa = sa - level, fb = sb - level;
      if (fa == 0.0 || fb == 0.0 || (fa > 0) == (fb > 0)) continue;
      double a = ta, b = tb;
      for (int it = 0; it < 26; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = c.log_radius(m) - level;
        if ((fm > 0) == (fa > 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
          fb = fm;
        }
      }
      const double tstar = 0.5 * (a + b);
      const Complex at = std::polar(std::exp(level), tstar);
      record_crossing(i, j, kDirColPlus, (tstar - ta) / g_.dcol, plate, at);
      record_crossing(i, jn, kDirColMinus, (ta + g_.dcol - tstar) / g_.dcol, plate, at);
    }
  }
}

void LogPolarRaster::mark_arc(const CircularArcSlit& a, CellState plate, bool subcell) {
  a.validate();
  if (2.0 * a.half_width < g_.dcol) {
    const int needed_cols = static_cast<int>(std::ceil(M_PI / a.half_width)) + 2;
    const int suggested = std::max(
        g_.rows + 1, static_cast<int>(std::ceil(0.5 * needed_cols)));
    throw RefinementError("slit arc thinner than one cell", suggested);
  }
  const double sigma = std::log(a.radius);
  const int row = snap_row(sigma);
  const double half = 0.5 * g_.dcol;
  for (int j = 0; j < g_.cols; ++j) {
    if (ang_dist(g_.col_coord(j), a.center_angle) <= a.half_width + half - 1e-15)
      set_plate(row, j, plate);
  }
  if (!subcell || plate == CellState::excluded) return;
  // tip crossings along the slit row
  for (double tip : {a.angle_lo(), a.angle_hi()}) {
    const bool lo_tip = tip == a.angle_lo();
    const Complex at = std::polar(a.radius, tip);
    const int jt = snap_col(tip);
    for (int dj = 0; dj <= 2; ++dj) {
      const int j = ((lo_tip ? jt - dj : jt + dj) % g_.cols + g_.cols) % g_.cols;
      if (g_.at(row, j) == plate) continue;  // inside the marked chain
      const double d = ang_dist(g_.col_coord(j), tip) / g_.dcol;
      record_crossing(row, j, lo_tip ? kDirColPlus : kDirColMinus, d, plate, at);
    }
  }
}

void LogPolarRaster::mark_radial_segment(const RadialSegment& s, CellState plate,
                                         bool subcell) {
  s.validate();
  const double slo = std::log(s.rho_lo), shi = std::log(s.rho_hi);
  if (shi - slo < g_.drow) {
    const int suggested =
        std::max(g_.rows + 1,
                 static_cast<int>(std::ceil(g_.rows * g_.drow / (shi - slo))) + 1);
    throw RefinementError("radial segment shorter than one cell", suggested);
  }
  const int col = snap_col(s.angle);
  const double half = 0.5 * g_.drow;
  for (int i = 0; i < g_.rows; ++i) {
    const double c = g_.row_coord(i);
    if (c + half >= slo - 1e-15 && c - half <= shi + 1e-15) set_plate(i, col, plate);
  }
  if (!subcell || plate == CellState::excluded) return;
  for (double end : {slo, shi}) {
    const bool lower = end == slo;
    const Complex at = std::polar(std::exp(end), g_.col_coord(col));
    const int it0 = snap_row(end);
    for (int di = 0; di <= 2; ++di) {
      const int i = lower ? it0 - di : it0 + di;
      if (i < 0 || i >= g_.rows) continue;
      if (g_.at(i, col) == plate) continue;
      const double d = std::abs(g_.row_coord(i) - end) / g_.drow;
      record_crossing(i, col, lower ? kDirRowPlus : kDirRowMinus, d, plate, at);
    }
  }
}

void LogPolarRaster::exclude_outside(const RadialGraph& c) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (g_.row_coord(i) > c.log_radius(g_.col_coord(j))) g_.cell[k] = CellState::excluded;
    }
}

void LogPolarRaster::exclude_inside(const RadialGraph& c) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (g_.row_coord(i) < c.log_radius(g_.col_coord(j))) g_.cell[k] = CellState::excluded;
    }
}

void LogPolarRaster::set_state_where(
    const std::function<bool(double, double)>& pred, CellState s) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (pred(g_.row_coord(i), g_.col_coord(j))) g_.cell[k] = s;
    }
}

std::vector<double> LogPolarRaster::column_values(const RadialGraph& c) const {
  std::vector<double> sig(g_.cols);
  for (int j = 0; j < g_.cols; ++j) sig[j] = c.log_radius(g_.col_coord(j));
  return sig;
}

void LogPolarRaster::exclude_outside_columns(const std::vector<double>& sig) {
  for (int i = 0; i < g_.rows; ++i) {
    const double rc = g_.row_coord(i);
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] == CellState::field && rc > sig[j]) g_.cell[k] = CellState::excluded;
    }
  }
}

void LogPolarRaster::set_state_below_columns(const std::vector<double>& sig, CellState s) {
  for (int i = 0; i < g_.rows; ++i) {
    const double rc = g_.row_coord(i);
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] == CellState::field && rc < sig[j]) g_.cell[k] = s;
    }
  }
}

GridCondenser LogPolarRaster::take() {
  std::map<std::int64_t, Crossing> best;
  for (const Crossing& c : crossings_) {
    // a fix replaces the edge from a field cell into a non-field neighbor;
    // anything else would break the symmetry of the assembled system
    if (g_.cell[c.cell] != CellState::field) continue;
    const int i = static_cast<int>(c.cell / g_.cols);
    const int j = static_cast<int>(c.cell % g_.cols);
    int ni, nj;
    if (!g_.neighbor(i, j, c.dir, ni, nj)) continue;
    if (g_.at(ni, nj) == CellState::field) continue;
    const std::int64_t key = c.cell * 4 + c.dir;
    auto it = best.find(key);
    if (it == best.end() || c.frac < it->second.frac) best[key] = c;
  }
  g_.fixes.clear();
  for (const auto& [key, c] : best)
    g_.fixes.push_back(EdgeFix{c.cell, c.dir, c.frac, c.plate, c.at});
  crossings_.clear();
  return std::move(g_);
}

// ---------------------------------------------------------------------------
// CartesianRaster

CartesianRaster::CartesianRaster(Complex lo, Complex hi, int n) {
  if (n < 8) throw std::domain_error("cartesian raster needs at least 8 cells per side");
  g_.kind = GridKind::cartesian;
  g_.rows = n;
  g_.cols = n;
  g_.drow = (hi.imag() - lo.imag()) / n;
  g_.dcol = (hi.real() - lo.real()) / n;
  if (!(g_.drow > 0.0) || !(g_.dcol > 0.0))
    throw std::domain_error("cartesian raster: empty box");
  g_.row0 = lo.imag() + 0.5 * g_.drow;
  g_.col0 = lo.real() + 0.5 * g_.dcol;
  g_.periodic_cols = false;
  g_.cell.assign(static_cast<std::size_t>(n) * n, CellState::field);
}

void CartesianRaster::set_plate(int i, int j, CellState plate) {
  CellState& s = g_.cell[g_.idx(i, j)];
  if (s == plate) return;
  if (s == CellState::field) {
    s = plate;
    return;
  }
  if (plate == CellState::excluded) return;
  if (s == CellState::excluded) {
    s = plate;
    return;
  }
  throw TopologyError("plate continua collide on the grid; refine the resolution");
}

void CartesianRaster::record_crossing(int i, int j, std::uint8_t dir, double frac,
                                      CellState plate, Complex at) {
  if (i < 0 || i >= g_.rows || j < 0 || j >= g_.cols) return;
  if (frac < 0.02 || frac > 1.7) return;
  crossings_.push_back({g_.idx(i, j), dir, std::max(frac, 0.05), plate, at});
}

namespace {
// distance range from a cell rectangle to a point
void rect_point_dist(Complex center, double hx, double hy, Complex p, double& dmin,
                     double& dmax) {
  const double dx = std::max(0.0, std::abs(p.real() - center.real()) - hx);
  const double dy = std::max(0.0, std::abs(p.imag() - center.imag()) - hy);
  dmin = std::hypot(dx, dy);
  const double mx = std::abs(p.real() - center.real()) + hx;
  const double my = std::abs(p.imag() - center.imag()) + hy;
  dmax = std::hypot(mx, my);
}

// roots of |p + t(q-p) - c| = R in (0,1); returns count, t1 <= t2
int segment_circle_roots(Complex p, Complex q, Complex c, double R, double* t) {
  const Complex d = q - p, f = p - c;
  const double A = std::norm(d);
  const double B = 2.0 * (f.real() * d.real() + f.imag() * d.imag());
  const double C = std::norm(f) - R * R;
  const double disc = B * B - 4 * A * C;
  if (disc < 0.0 || A == 0.0) return 0;
  const double sd = std::sqrt(disc);
  int n = 0;
  for (double root : {(-B - sd) / (2 * A), (-B + sd) / (2 * A)})
    if (root > 0.0 && root < 1.0) t[n++] = root;
  return n;
}
}  // namespace

void CartesianRaster::mark_circle(const Circle& c, CellState plate, bool subcell) {
  const double hx = 0.5 * g_.dcol, hy = 0.5 * g_.drow;
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      double dmin, dmax;
      rect_point_dist(g_.center_z(i, j), hx, hy, c.center, dmin, dmax);
      if (dmin <= c.radius && c.radius <= dmax) set_plate(i, j, plate);
    }
  if (!subcell) return;
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const Complex p = g_.center_z(i, j);
      // +col and +row neighbors; record both sides of each crossing
      for (std::uint8_t d : {kDirColPlus, kDirRowPlus}) {
        int ni, nj;
        if (!g_.neighbor(i, j, d, ni, nj)) continue;
        const Complex q = g_.center_z(ni, nj);
        double t[2];
        const int nr = segment_circle_roots(p, q, c.center, c.radius, t);
        if (nr != 1) continue;  // tangential / double crossings: leave plain
        const Complex at = p + t[0] * (q - p);
        record_crossing(i, j, d, t[0], plate, at);
        record_crossing(ni, nj, d == kDirColPlus ? kDirColMinus : kDirRowMinus,
                        1.0 - t[0], plate, at);
      }
    }
}

void CartesianRaster::exclude_outside_circle(const Circle& c) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (std::abs(g_.center_z(i, j) - c.center) > c.radius) g_.cell[k] = CellState::excluded;
    }
}

void CartesianRaster::exclude_inside_circle(const Circle& c) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (std::abs(g_.center_z(i, j) - c.center) < c.radius) g_.cell[k] = CellState::excluded;
    }
}

void CartesianRaster::mark_arc(const CircularArcSlit& a, CellState plate, bool subcell) {
  a.validate();
  const double cellr = 0.5 * std::hypot(g_.dcol, g_.drow);
  auto dist_to_arc = [&](Complex z) {
    if (a.contains_angle(std::arg(z))) return std::abs(std::abs(z) - a.radius);
    const Complex t1 = std::polar(a.radius, a.angle_lo());
    const Complex t2 = std::polar(a.radius, a.angle_hi());
    return std::min(std::abs(z - t1), std::abs(z - t2));
  };
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j)
      if (dist_to_arc(g_.center_z(i, j)) <= 1.001 * cellr) set_plate(i, j, plate);
  if (!subcell) return;
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const Complex p = g_.center_z(i, j);
      for (std::uint8_t d : {kDirColPlus, kDirRowPlus}) {
        int ni, nj;
        if (!g_.neighbor(i, j, d, ni, nj)) continue;
        const Complex q = g_.center_z(ni, nj);
        double t[2];
        const int nr = segment_circle_roots(p, q, Complex(0, 0), a.radius, t);
        if (nr != 1) continue;
        const Complex at = p + t[0] * (q - p);
        if (!a.contains_angle(std::arg(at))) continue;
        record_crossing(i, j, d, t[0], plate, at);
        record_crossing(ni, nj, d == kDirColPlus ? kDirColMinus : kDirRowMinus,
                        1.0 - t[0], plate, at);
      }
    }
}

void CartesianRaster::mark_radial_segment(const RadialSegment& s, CellState plate,
                                          bool subcell) {
  s.validate();
  const Complex e1 = std::polar(s.rho_lo, s.angle), e2 = std::polar(s.rho_hi, s.angle);
  const double cellr = 0.5 * std::hypot(g_.dcol, g_.drow);
  auto dist_to_seg = [&](Complex z) {
    const Complex d = e2 - e1;
    const double t = std::clamp(((z - e1) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(z - (e1 + t * d));
  };
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j)
      if (dist_to_seg(g_.center_z(i, j)) <= 1.001 * cellr) set_plate(i, j, plate);
  if (!subcell) return;
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const Complex p = g_.center_z(i, j);
      for (std::uint8_t d : {kDirColPlus, kDirRowPlus}) {
        int ni, nj;
        if (!g_.neighbor(i, j, d, ni, nj)) continue;
        const Complex q = g_.center_z(ni, nj);
        // segment-segment intersection
        const Complex r = q - p, sr = e2 - e1;
        const double den = r.real() * sr.imag() - r.imag() * sr.real();
        if (std::abs(den) < 1e-300) continue;
        const Complex pe = e1 - p;
        const double t = (pe.real() * sr.imag() - pe.imag() * sr.real()) / den;
        const double u = (pe.real() * r.imag() - pe.imag() * r.real()) / den;
        if (t <= 0.0 || t >= 1.0 || u < 0.0 || u > 1.0) continue;
        const Complex at = p + t * r;
        record_crossing(i, j, d, t, plate, at);
        record_crossing(ni, nj, d == kDirColPlus ? kDirColMinus : kDirRowMinus, 1.0 - t,
                        plate, at);
      }
    }
}

bool point_in_polyline(const PolylineCurve& p, Complex z) {
  // even-odd rule with a +x ray
  bool in = false;
  const std::size_t n = p.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = p.points[k], b = p.points[(k + 1) % n];
    if ((a.imag() > z.imag()) == (b.imag() > z.imag())) continue;
    const double x =
        a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
    if (x > z.real()) in = !in;
  }
  return in;
}

void CartesianRaster::mark_polyline(const PolylineCurve& p, CellState plate, bool subcell) {
  if (p.points.size() < 3) throw std::domain_error("polyline needs at least 3 points");
  const double cellr = 0.5 * std::hypot(g_.dcol, g_.drow);
  auto dist = [&](Complex z) {
    double best = 1e300;
    const std::size_t n = p.points.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = p.points[k], b = p.points[(k + 1) % n];
      const Complex d = b - a;
      const double nd = std::norm(d);
      const double t = nd == 0 ? 0.0 : std::clamp(((z - a) * std::conj(d)).real() / nd, 0.0, 1.0);
      best = std::min(best, std::abs(z - (a + t * d)));
    }
    return best;
  };
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j)
      if (dist(g_.center_z(i, j)) <= 1.001 * cellr) set_plate(i, j, plate);
  if (!subcell) return;
  const std::size_t n = p.points.size();
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const Complex pc = g_.center_z(i, j);
      for (std::uint8_t d : {kDirColPlus, kDirRowPlus}) {
        int ni, nj;
        if (!g_.neighbor(i, j, d, ni, nj)) continue;
        const Complex qc = g_.center_z(ni, nj);
        double best_t = 2.0;
        Complex best_at;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex a = p.points[k], b = p.points[(k + 1) % n];
          const Complex r = qc - pc, sr = b - a;
          const double den = r.real() * sr.imag() - r.imag() * sr.real();
          if (std::abs(den) < 1e-300) continue;
          const Complex pe = a - pc;
          const double t = (pe.real() * sr.imag() - pe.imag() * sr.real()) / den;
          const double u = (pe.real() * r.imag() - pe.imag() * r.real()) / den;
          if (t <= 0.0 || t >= 1.0 || u < 0.0 || u > 1.0) continue;
          if (t < best_t) {
            best_t = t;
            best_at = pc + t * r;
          }
        }
        if (best_t < 1.0) {
          record_crossing(i, j, d, best_t, plate, best_at);
          record_crossing(ni, nj, d == kDirColPlus ? kDirColMinus : kDirRowMinus,
                          1.0 - best_t, plate, best_at);
        }
      }
    }
}

void CartesianRaster::exclude_outside_polyline(const PolylineCurve& p) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (!point_in_polyline(p, g_.center_z(i, j))) g_.cell[k] = CellState::excluded;
    }
}

void CartesianRaster::exclude_inside_polyline(const PolylineCurve& p) {
  for (int i = 0; i < g_.rows; ++i)
    for (int j = 0; j < g_.cols; ++j) {
      const std::int64_t k = g_.idx(i, j);
      if (g_.cell[k] != CellState::field) continue;
      if (point_in_polyline(p, g_.center_z(i, j))) g_.cell[k] = CellState::excluded;
    }
}

GridCondenser CartesianRaster::take() {
  std::map<std::int64_t, EdgeFix> best;
  for (const EdgeFix& c : crossings_) {
    if (g_.cell[c.cell] != CellState::field) continue;
    const int i = static_cast<int>(c.cell / g_.cols);
    const int j = static_cast<int>(c.cell % g_.cols);
    int ni, nj;
    if (!g_.neighbor(i, j, c.dir, ni, nj)) continue;
    if (g_.at(ni, nj) == CellState::field) continue;  // keep the system symmetric
    const std::int64_t key = c.cell * 4 + c.dir;
    auto it = best.find(key);
    if (it == best.end() || c.frac < it->second.frac) best[key] = c;
  }
  g_.fixes.clear();
  for (const auto& [key, c] : best) g_.fixes.push_back(c);
  crossings_.clear();
  return std::move(g_);
}

// ---------------------------------------------------------------------------
// rasterize()

namespace {
void check_resolution(int resolution) {
  if (resolution < 32) throw std::domain_error("resolution must be >= 32");
}

double slit_union_sigma_min(const SlitUnion& u) {
  double lo = 0.0;
  for (const auto& a : u.arcs) lo = std::min(lo, std::log(a.radius));
  for (const auto& s : u.segments) lo = std::min(lo, std::log(s.rho_lo));
  return lo;
}
}  // namespace

GridCondenser rasterize(const SlitDiskDomain& d, const PlateAssignment& plates,
                        int resolution, GridKind kind, const RasterOptions& opt) {
  check_resolution(resolution);
  d.validate();
  if (d.slits.empty()) throw std::domain_error("slit disk needs at least one slit");
  std::vector<bool> in_plate1(d.slits.size(), plates.plate1_slits.empty());
  for (int k : plates.plate1_slits) {
    if (k < 0 || k >= static_cast<int>(d.slits.size()))
      throw std::domain_error("plate assignment references a missing slit");
    in_plate1[k] = true;
  }

  if (kind == GridKind::log_polar) {
    double sigma_min = 0.0;
    for (const auto& s : d.slits) sigma_min = std::min(sigma_min, std::log(s.radius));
    sigma_min -= opt.inner_margin;
    LogPolarRaster r(sigma_min, 0.0, resolution);
    // grid-level disjointness: snapped rows/arcs must not merge
    for (std::size_t i = 0; i < d.slits.size(); ++i)
      for (std::size_t j = i + 1; j < d.slits.size(); ++j) {
        const int ri = r.snap_row(std::log(d.slits[i].radius));
        const int rj = r.snap_row(std::log(d.slits[j].radius));
        if (std::abs(ri - rj) <= 1) {
          const double gap = ang_dist(d.slits[i].center_angle, d.slits[j].center_angle) -
                             d.slits[i].half_width - d.slits[j].half_width;
          if (gap < 2.0 * r.grid().dcol)
            throw RefinementError("slits merge at this resolution", 2 * resolution);
        }
      }
    r.mark_circle(0.0, CellState::plate0, opt.subcell);
    for (std::size_t k = 0; k < d.slits.size(); ++k)
      r.mark_arc(d.slits[k], in_plate1[k] ? CellState::plate1 : CellState::excluded,
                 opt.subcell);
    return r.take();
  }

  const double pad = 2.2 / resolution;
  CartesianRaster r(Complex(-1 - pad, -1 - pad), Complex(1 + pad, 1 + pad), resolution);
  const Circle unit{Complex(0, 0), 1.0};
  r.mark_circle(unit, CellState::plate0, opt.subcell);
  r.exclude_outside_circle(unit);
  for (std::size_t k = 0; k < d.slits.size(); ++k)
    r.mark_arc(d.slits[k], in_plate1[k] ? CellState::plate1 : CellState::excluded,
               opt.subcell);
  return r.take();
}

GridCondenser rasterize(const RingDomain& d, int resolution, GridKind kind,
                        const RasterOptions& opt) {
  check_resolution(resolution);
  d.validate();
  if (d.inner_degenerate())
    throw std::domain_error("punctured domains are handled analytically, not on grids");

  if (kind == GridKind::log_polar) {
    // outer boundary must surround the origin
    double sigma_max = 0.0;
    const Circle* outer_circle = std::get_if<Circle>(&d.outer);
    const UnitCircleWithSlits* outer_unit = std::get_if<UnitCircleWithSlits>(&d.outer);
    std::optional<RadialGraph> outer_graph;
    if (outer_circle) {
      if (std::abs(outer_circle->center) < 1e-15) {
        sigma_max = std::log(outer_circle->radius);
      } else {
        outer_graph = graph_of_circle(*outer_circle);
        sigma_max = outer_graph->range_on(0.0, 2.0 * M_PI).second + 0.05;
      }
    } else if (outer_unit) {
      sigma_max = 0.0;
    } else {
      throw std::domain_error("log-polar rasterization needs a circle-like outer boundary");
    }

    double sigma_min;
    const auto* ic = std::get_if<Circle>(&d.inner);
    if (ic) {
      if (std::abs(ic->center) < 1e-15)
        sigma_min = std::log(ic->radius);
      else
        sigma_min = graph_of_circle(*ic).range_on(0.0, 2.0 * M_PI).first - 0.05;
    } else if (const auto* ia = std::get_if<CircularArcSlit>(&d.inner)) {
      sigma_min = std::log(ia->radius) - opt.inner_margin;
    } else if (const auto* iu = std::get_if<SlitUnion>(&d.inner)) {
      sigma_min = slit_union_sigma_min(*iu) - opt.inner_margin;
    } else {
      throw std::domain_error("unsupported inner boundary for log-polar rasterization");
    }

    LogPolarRaster r(sigma_min, sigma_max, resolution);
    if (outer_circle && !outer_graph) {
      r.mark_circle(sigma_max, CellState::plate0, opt.subcell);
    } else if (outer_graph) {
      r.mark_radial_graph(*outer_graph, CellState::plate0, opt.subcell);
      r.exclude_outside(*outer_graph);
    } else {
      r.mark_circle(0.0, CellState::plate0, opt.subcell);
      for (const auto& w : outer_unit->whiskers)
        r.mark_radial_segment(w, CellState::plate0, opt.subcell);
    }

    if (ic) {
      if (std::abs(ic->center) < 1e-15) {
        r.mark_circle(sigma_min, CellState::plate1, opt.subcell);
      } else {
        const RadialGraph gi = graph_of_circle(*ic);
        r.mark_radial_graph(gi, CellState::plate1, opt.subcell);
        r.exclude_inside(gi);
      }
    } else if (const auto* ia = std::get_if<CircularArcSlit>(&d.inner)) {
      r.mark_arc(*ia, CellState::plate1, opt.subcell);
    } else {
      const auto& iu = std::get<SlitUnion>(d.inner);
      for (const auto& a : iu.arcs) r.mark_arc(a, CellState::plate1, opt.subcell);
      for (const auto& s : iu.segments)
        r.mark_radial_segment(s, CellState::plate1, opt.subcell);
    }
    return r.take();
  }

  // cartesian
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (const auto* oc = std::get_if<Circle>(&d.outer)) {
    x0 = oc->center.real() - oc->radius;
    x1 = oc->center.real() + oc->radius;
    y0 = oc->center.imag() - oc->radius;
    y1 = oc->center.imag() + oc->radius;
  } else if (const auto* op = std::get_if<PolylineCurve>(&d.outer)) {
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    for (Complex p : op->points) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  } else {
    throw std::domain_error("unsupported outer boundary for cartesian rasterization");
  }
  const double pad = 2.2 * std::max(x1 - x0, y1 - y0) / resolution;
  CartesianRaster r(Complex(x0 - pad, y0 - pad), Complex(x1 + pad, y1 + pad), resolution);

  if (const auto* oc = std::get_if<Circle>(&d.outer)) {
    r.mark_circle(*oc, CellState::plate0, opt.subcell);
    r.exclude_outside_circle(*oc);
  } else {
    const auto& op = std::get<PolylineCurve>(d.outer);
    r.mark_polyline(op, CellState::plate0, opt.subcell);
    r.exclude_outside_polyline(op);
  }

  if (const auto* c = std::get_if<Circle>(&d.inner)) {
    r.mark_circle(*c, CellState::plate1, opt.subcell);
    r.exclude_inside_circle(*c);
  } else if (const auto* a = std::get_if<CircularArcSlit>(&d.inner)) {
    r.mark_arc(*a, CellState::plate1, opt.subcell);
  } else if (const auto* u = std::get_if<SlitUnion>(&d.inner)) {
    for (const auto& arc : u->arcs) r.mark_arc(arc, CellState::plate1, opt.subcell);
    for (const auto& seg : u->segments) r.mark_radial_segment(seg, CellState::plate1, opt.subcell);
  } else if (const auto* p = std::get_if<PolylineCurve>(&d.inner)) {
    r.mark_polyline(*p, CellState::plate1, opt.subcell);
    r.exclude_inside_polyline(*p);
  } else {
    throw std::domain_error("unsupported inner boundary for cartesian rasterization");
  }
  return r.take();
}

}  // namespace sqz
