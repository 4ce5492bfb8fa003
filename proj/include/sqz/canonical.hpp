#pragma once

#include <vector>

#include "sqz/domains.hpp"
#include "sqz/modulus.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

// Conformal map of the annulus A(q,1) onto the unit disk slit along an arc of
// the circle |w| = a, with f(a) = 0:
//
//   f(z) = a * P(z/a, q) / P(z a, q)
//
// built from the annulus prime product. The functional equation
// P(q^2 w) = -P(w)/w forces |f| = 1 on |z| = 1 and |f| = a on |z| = q; the
// slit radius equal to a is the Reich-Warschawski identity, which doubles as
// a numeric certificate of the prime-product implementation.
struct AnnulusSlitMap {
  double q = 0.1;   // inner radius of the source annulus
  double a = 0.4;   // zero of the map, q < a < 1
  int truncation = 30;

  void validate() const;
  // Bound on | |f| - (expected circle radius) | on either boundary circle,
  // from the prime-product tail estimates.
  double boundary_error_bound() const;
};

Complex annulus_slit_map_eval(const AnnulusSlitMap& map, Complex z);

// Numeric certificate data for the identity rho(a) = a.
struct SlitMapCertificate {
  double max_inner_dev = 0.0;  // max | |f(q e^{it})| - a |
  double max_outer_dev = 0.0;  // max | |f(e^{it})| - 1 |
  double zero_residual = 0.0;  // |f(a)|
  int winding = 0;             // winding number of f on |z|=1 about 0
  double tail_bound = 0.0;
  int samples = 0;
};
SlitMapCertificate certify_slit_map(const AnnulusSlitMap& map, int samples = 256);

struct BoundarySample {
  double theta = 0.0;        // source angle on the outer boundary cell
  double image_angle = 0.0;  // transported angle on the target unit circle
};

struct UniformizationResult {
  double modulus = 0.0;       // m of the ring domain
  double inner_radius = 0.0;  // s = e^{-2 pi m}
  double u_at_marked = 0.0;   // normalized potential at the marked point
  Complex transported;        // image of the marked point in A(s,1)
  int resolution_used = 0;
  int cg_iterations = 0;
  std::vector<BoundarySample> boundary_correspondence;
};

// Conformal map of a ring domain onto A(s,1): solves the modulus potential
// (0 on the inner continuum, 1 on the outer), integrates its conjugate for
// the angle, and transports the marked point to s^{1-u(z)} e^{i theta~(z)}.
// The marked point image is normalized onto the positive real axis.
UniformizationResult annulus_uniformize(const RingDomain& d, Complex marked,
                                        int resolution,
                                        const RasterOptions& opt = {},
                                        const ToleranceConfig& tol = {});

// Canonical slit radii of a doubly connected domain at a marked point.
struct CanonicalMapResult {
  double modulus = 0.0;       // +inf for a degenerate (punctured) domain
  double inner_radius = 0.0;  // e^{-2 pi modulus}
  double r_toward_outer = 0.0;  // slit radius when the outer continuum maps to T
  double r_toward_inner = 0.0;  // slit radius when the inner continuum maps to T
  double error_estimate = 0.0;
  int resolution_used = 0;      // 0 for the analytic path
};

// Uniformize-then-slit-map composition: transports z to a point of modulus t
// in A(s,1) and returns (t, s/t) by the Reich-Warschawski identity and the
// boundary-swapping inversion w -> s/w. Exact annuli and punctured disks
// bypass the grid entirely; a degenerate inner continuum yields r = 0 toward
// it and modulus +inf.
CanonicalMapResult slit_radii(const RingDomain& d, Complex z, int resolution = 256,
                              const RasterOptions& opt = {},
                              const ToleranceConfig& tol = {});

}  // namespace sqz
