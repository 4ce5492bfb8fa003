#pragma once

#include <string>
#include <vector>

#include "sqz/canonical.hpp"
#include "sqz/domains.hpp"

namespace sqz {

struct SqueezeCertificate {
  std::string name;
  double value = 0.0;
};

// Squeezing-function report: exact value (with the extremal witness) or a
// certified interval [lo, hi].
struct SqueezeReport {
  double lo = 0.0, hi = 1.0;
  bool exact = false;
  std::string witness;
  std::vector<SqueezeCertificate> certificates;

  double value() const { return exact ? lo : 0.5 * (lo + hi); }
};

// Exact squeezing of a doubly connected domain: max of the two canonical
// slit radii; ties record both extremal directions.
SqueezeReport squeeze_doubly_connected(const RingDomain& d, Complex z,
                                       int resolution = 256,
                                       const ToleranceConfig& tol = {});

// Squeezing toward the unit circle at z = 0 for a disk slit only along arcs
// of one circle |z| = r: the value is exactly r and the identity map (up to
// rotation) is the unique extremal map.
SqueezeReport directional_squeeze_circle_slits(const SlitDiskDomain& d);

// Certified upper bound for the squeezing toward one boundary continuum:
// with M the modulus of a ring separating that continuum from z and all
// other continua, every admissible image is trapped in a ring of the same
// modulus with outer boundary T, so the farthest image point is capped at
// mu^{-1}(2 pi M).
struct DirectionalBound {
  double bound = 1.0;
  double ring_modulus = 0.0;
  double modulus_error = 0.0;
  double epsilon = 0.0;        // separating circle radius
  int resolution = 0;
  double limsup_constant = 1.0;  // e^{-2 pi M}
  bool valid = false;
};

// slit_index selects gamma_k; epsilon <= 0 sweeps admissible radii and keeps
// the best (smallest) bound. Throws TopologyError when no circle separates.
DirectionalBound directional_squeeze_upper_bound(const SlitDiskDomain& d,
                                                 int slit_index, Complex z,
                                                 double epsilon = 0.0,
                                                 int resolution = 160,
                                                 const ToleranceConfig& tol = {});

// Interval report for any connectivity: lower bound from explicit maps
// (Moebius witness, circle-slit configurations), upper bound from the
// directional ring bounds over all continua.
SqueezeReport squeeze_bounds(const SlitDiskDomain& d, Complex z,
                             int resolution = 160, const ToleranceConfig& tol = {});

// Quantitative extremality certificate for the symmetric circularly slit
// disk Omega(n, r, alpha): searches (by bisection in alpha) for alpha_star
// such that every slit-direction squeezing bound stays below r - margin,
// which pins S(0) = r with the identity map as the rotation-unique witness.
struct ExtremalityCertificate {
  int n = 0;
  double r = 0.0;
  double alpha_star = 0.0;
  double margin_required = 0.05;
  bool conclusive = false;
  double lemma_value = 0.0;  // exact squeezing toward the unit circle (= r)
  struct Record {
    double alpha = 0.0;
    double epsilon = 0.0;
    double ring_modulus = 0.0;
    double modulus_error = 0.0;
    double bound = 1.0;
    double margin = 0.0;
    int resolution = 0;
    bool pass = false;
  };
  std::vector<Record> records;

  // Re-derives every bound from the stored raw moduli and re-checks the
  // inequalities; false when any stored conclusion fails to reproduce.
  bool revalidate() const;
};

ExtremalityCertificate certify_extremal_slit_disk(int n, double r,
                                                  double margin_required = 0.05,
                                                  int resolution = 160,
                                                  const ToleranceConfig& tol = {});

// Equilibrium set of the annulus A(r,1): the circle |z| = sqrt(r), where the
// two directional values a and r/a cross.
double equilibrium_annulus(double r);

enum class ProbeOutcome { confirmed, refuted, inconclusive };

struct MonotonicityProbe {
  ProbeOutcome outcome = ProbeOutcome::inconclusive;
  // directional value (or certified interval) toward the changed continuum
  double sub_lo = 0.0, sub_hi = 1.0;    // subdomain Omega'
  double super_lo = 0.0, super_hi = 1.0;  // Omega
  std::string note;
};

// Directional-squeezing monotonicity probe for ring-domain pairs sharing the
// outer continuum, with the inner continuum enlarged in the subdomain.
MonotonicityProbe monotonicity_probe(const RingDomain& omega,
                                     const RingDomain& omega_sub, Complex z,
                                     int resolution = 256,
                                     const ToleranceConfig& tol = {});

// Slit-disk pair: omega_sub equals omega with the last slit widened; the
// comparison uses certified intervals and confirms only when they separate.
MonotonicityProbe monotonicity_probe(const SlitDiskDomain& omega,
                                     const SlitDiskDomain& omega_sub, Complex z,
                                     int resolution = 160,
                                     const ToleranceConfig& tol = {});

}  // namespace sqz
