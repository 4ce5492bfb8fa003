#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "sqz/grid.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

// An arc of the circle |z| = radius; the canonical slit shape. Angles are
// stored normalized, the closed arc is {radius * e^{i t} : |t - center_angle|
// <= half_width} (mod 2pi).
struct CircularArcSlit {
  double radius = 0.5;
  double center_angle = 0.0;
  double half_width = 0.1;

  void validate() const;
  double angle_lo() const { return center_angle - half_width; }
  double angle_hi() const { return center_angle + half_width; }
  bool contains_angle(double theta) const;
};

// Unit disk minus a finite union of pairwise disjoint concentric arc slits;
// connectivity = slits + 1.
struct SlitDiskDomain {
  std::vector<CircularArcSlit> slits;
  void validate() const;
  int connectivity() const { return static_cast<int>(slits.size()) + 1; }
};

// Radial segment {t e^{i angle} : rho_lo <= t <= rho_hi}.
struct RadialSegment {
  double angle = 0.0;
  double rho_lo = 0.0, rho_hi = 0.0;
  void validate() const;
};

// Connected union of slit pieces forming a single boundary continuum.
struct SlitUnion {
  std::vector<CircularArcSlit> arcs;
  std::vector<RadialSegment> segments;
};

struct Circle {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

// The unit circle with slit whiskers attached to it (one continuum).
struct UnitCircleWithSlits {
  std::vector<RadialSegment> whiskers;
};

// Closed polyline, positively oriented.
struct PolylineCurve {
  std::vector<Complex> points;
};

// Degenerate boundary continuum (a single point).
struct PointMarker {
  Complex at{0.0, 0.0};
};

using BoundaryCurve =
    std::variant<Circle, CircularArcSlit, SlitUnion, UnitCircleWithSlits,
                 PolylineCurve, PointMarker>;

// Doubly connected domain given by its two boundary continua. At least one
// of them must be non-degenerate.
struct RingDomain {
  BoundaryCurve outer;
  BoundaryCurve inner;
  void validate() const;
  bool inner_degenerate() const { return std::holds_alternative<PointMarker>(inner); }
};

RingDomain make_annulus(double r);
RingDomain make_slit_ring(const CircularArcSlit& slit);      // D minus one arc
RingDomain make_punctured_disk(Complex puncture);

// z -> e^{i rotation} (z - a) / (1 - conj(a) z); maps D onto D and a to 0.
struct MoebiusDiskAutomorphism {
  Complex a{0.0, 0.0};
  double rotation = 0.0;
  void validate() const;
  MoebiusDiskAutomorphism inverse() const;
};

Complex apply_moebius(const MoebiusDiskAutomorphism& t, Complex z);

// Image of the circle |z| = r under the automorphism (circles map to
// circles; computed from the diameter through the fixed axis).
Circle moebius_circle_image(const MoebiusDiskAutomorphism& t, double r);

// The Moebius image of A(r,1): outer boundary stays the unit circle.
RingDomain make_moebius_annulus(double r, const MoebiusDiskAutomorphism& t);

// Omega(n, r, alpha): n-1 slits of half-width alpha equally spaced on the
// circle of radius r; connectivity n. Requires alpha < pi/(n-1).
SlitDiskDomain build_symmetric_slit_disk(int n, double r, double alpha);

// Sphere domain of connectivity 3: complement of three symmetric radial
// segments [1,a] e^{2 pi i k/3}, together with its bounded-coordinates
// version under z -> 1/z (segments [1/a,1]); the marked point 0 is preserved.
struct ThreefoldExample {
  double a = 2.0;
  std::array<RadialSegment, 3> slits;
  std::array<RadialSegment, 3> inverted_slits;
  Complex marked_point{0.0, 0.0};
};
ThreefoldExample build_threefold_example(double a);

// Which boundary continua of a slit disk carry which plate. The unit circle
// is always plate0; slits listed in plate1_slits form plate1 (empty = all).
// Unassigned slits become insulating barriers (excluded cells).
struct PlateAssignment {
  std::vector<int> plate1_slits;
};

struct RasterOptions {
  bool subcell = true;        // sub-cell boundary corrections on frontier edges
  double inner_margin = 1.2;  // log-radius pad below the innermost slit
};

GridCondenser rasterize(const SlitDiskDomain& d, const PlateAssignment& plates,
                        int resolution, GridKind kind, const RasterOptions& opt = {});
GridCondenser rasterize(const RingDomain& d, int resolution, GridKind kind,
                        const RasterOptions& opt = {});

// Radial graph r(theta) support shared with the partition module: log-polar
// rasterization of a domain bounded outside by a star-shaped curve.
struct RadialGraph {
  std::function<double(double)> log_radius;  // sigma_c(theta), 2pi-periodic
  double lipschitz = 0.0;                    // bound on |d sigma_c / d theta|
  // Exact range of sigma_c over [a,b] when available (circles); otherwise
  // sampled with a Lipschitz pad.
  std::function<std::pair<double, double>(double, double)> range;

  std::pair<double, double> range_on(double a, double b) const;
};

RadialGraph graph_of_circle(const Circle& c);  // requires 0 strictly inside

// Low-level log-polar raster builder used by the modulus/canonical/partition
// modules for condensers that are not plain domain rasterizations.
class LogPolarRaster {
 public:
  LogPolarRaster(double sigma_min, double sigma_max, int rows, int cols = 0);

  GridCondenser& grid() { return g_; }
  int snap_row(double sigma) const;
  int snap_col(double theta) const;

  void mark_circle(double sigma, CellState plate, bool subcell);
  void mark_radial_graph(const RadialGraph& c, CellState plate, bool subcell);
  void mark_arc(const CircularArcSlit& a, CellState plate, bool subcell);
  void mark_radial_segment(const RadialSegment& s, CellState plate, bool subcell);
  // Classify remaining field cells against a radial graph.
  void exclude_outside(const RadialGraph& c);
  void exclude_inside(const RadialGraph& c);
  void set_state_where(const std::function<bool(double sigma, double theta)>& pred,
                       CellState s);
  // Column-table variants (one curve value per column center); avoids
  // re-evaluating the curve once per cell in optimizer-hot paths.
  std::vector<double> column_values(const RadialGraph& c) const;
  void exclude_outside_columns(const std::vector<double>& sigma_of_col);
  void set_state_below_columns(const std::vector<double>& sigma_of_col, CellState s);

  GridCondenser take();

 private:
  void set_plate(int i, int j, CellState plate);
  void record_crossing(int i, int j, std::uint8_t dir, double frac, CellState plate,
                       Complex at);
  GridCondenser g_;
  struct Crossing {
    std::int64_t cell;
    std::uint8_t dir;
    double frac;
    CellState plate;
    Complex at;
  };
  std::vector<Crossing> crossings_;
};

// Cartesian counterpart (square bounding box, no periodicity).
class CartesianRaster {
 public:
  CartesianRaster(Complex lo, Complex hi, int cells_per_side);
  GridCondenser& grid() { return g_; }

  void mark_circle(const Circle& c, CellState plate, bool subcell);
  void exclude_outside_circle(const Circle& c);
  void exclude_inside_circle(const Circle& c);
  void mark_arc(const CircularArcSlit& a, CellState plate, bool subcell);
  void mark_radial_segment(const RadialSegment& s, CellState plate, bool subcell);
  void mark_polyline(const PolylineCurve& p, CellState plate, bool subcell);
  void exclude_outside_polyline(const PolylineCurve& p);
  void exclude_inside_polyline(const PolylineCurve& p);

  GridCondenser take();

 private:
  void set_plate(int i, int j, CellState plate);
  void record_crossing(int i, int j, std::uint8_t dir, double frac, CellState plate,
                       Complex at);
  GridCondenser g_;
  std::vector<EdgeFix> crossings_;
};

bool point_in_polyline(const PolylineCurve& p, Complex z);

}  // namespace sqz
