#pragma once

#include <string>
#include <vector>

#include "sqz/domains.hpp"
#include "sqz/modulus.hpp"

namespace sqz {

// Compact barrier E: a finite union of concentric arc slits inside the
// closed annulus A(r1, r2).
struct BarrierSet {
  std::vector<CircularArcSlit> arcs;
  double r1 = 0.4, r2 = 0.6;
  void validate() const;
};

// Star-shaped free-boundary candidate: r(theta) = exp(c0 + sum a_k cos k t +
// b_k sin k t).
struct PartitionCandidate {
  double c0 = 0.0;
  std::vector<std::pair<double, double>> fourier;  // (a_k, b_k), k = 1..K

  double log_radius(double theta) const;
  double radius(double theta) const { return std::exp(log_radius(theta)); }
  double lipschitz() const;  // bound on |d log r / d theta|
  RadialGraph graph() const;
};

struct PartitionResult {
  double objective = 0.0;  // alpha1^2 m(D1,0) + alpha2^2 m(D2)
  PartitionCandidate candidate;
  ReducedModuleResult m1;
  ModulusResult m2;
  double max_radius = 0.0, min_radius = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  int resolution = 0;
  // The optimizer explores star-shaped curves only; results claim optimality
  // within this family.
  std::string family = "star_fourier";
};

// Weighted module objective for the partition induced by the candidate
// curve: D1 = inside(curve) \ E with the reduced module at 0 (E absorbed
// into the Dirichlet boundary), D2 = the condenser with inner plate
// closure(inside) united with E and outer plate the unit circle. Throws
// AdmissibilityError on transversal barrier crossings or broken separation.
PartitionResult partition_objective(const BarrierSet& e, const PartitionCandidate& c,
                                    double alpha1, double alpha2, int resolution,
                                    const ToleranceConfig& tol = {});

struct OptimizeDiagnostics {
  int iterations = 0;
  int evaluations = 0;
  int infeasible = 0;
  double simplex_diameter = 0.0;
  std::vector<double> objective_history;
};

// Derivative-free simplex search over (c0, a_1..a_K, b_1..b_K) from the
// initialization c0 = log sqrt(r1 r2), zero harmonics. Infeasible candidates
// score -inf. The returned result is the best evaluated candidate.
PartitionResult optimize_partition(const BarrierSet& e, double alpha1, double alpha2,
                                   int harmonics, int resolution,
                                   const ToleranceConfig& tol = {},
                                   OptimizeDiagnostics* diag = nullptr);

struct LocationCheck {
  char case_label = 'c';  // 'a': alpha1<alpha2, 'b': alpha1>alpha2, 'c': equal
  bool pass = false;
  double max_radius = 0.0, min_radius = 0.0;
  double outer_slack = 0.0;  // r2 + tol - max_radius (cases a, c)
  double inner_slack = 0.0;  // min_radius - (r1 - tol)  (cases b, c)
};

// Free-boundary location check: (a) alpha1 <= alpha2 -> curve inside
// closure(D_{r2}); (b) alpha1 >= alpha2 -> curve outside D_{r1}; (c) equal ->
// both, i.e. curve within closure(A(r1, r2)); all up to the given tolerance.
LocationCheck check_free_boundary_location(const PartitionResult& res,
                                           const BarrierSet& e, double alpha1,
                                           double alpha2, double tolerance);

}  // namespace sqz
