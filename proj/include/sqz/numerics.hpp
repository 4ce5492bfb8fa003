#pragma once

#include <complex>

namespace sqz {

using Complex = std::complex<double>;

// Tolerances shared by the numerical kernels. All values must be positive.
struct ToleranceConfig {
  double solver_rel_tol = 1e-10;  // CG relative residual target
  int product_truncation = 30;    // factors kept in the annulus prime product
  double mu_inv_tol = 1e-12;      // |mu(r) - m| target for the inverse

  void validate() const;
};

// Complete elliptic integral of the first kind K(k), 0 <= k < 1, computed by
// the arithmetic-geometric mean iteration (quadratically convergent).
double complete_elliptic_k(double k);

// Modulus of the Groetzsch ring D \ [0,r]:  mu(r) = (pi/2) K(k') / K(r),
// k' = sqrt(1 - r^2). Strictly decreasing from +inf (r->0) to 0 (r->1).
double groetzsch_mu(double r);

// Inverse of mu by monotone bisection: returns r with |mu(r) - m| <= tol.
double groetzsch_mu_inv(double m, const ToleranceConfig& tol = {});

// Truncated annulus prime-function factor
//   P(w,q) = (1 - w) * prod_{k=1..K} (1 - q^{2k} w)(1 - q^{2k} / w)
// together with a geometric-tail bound on the absolute truncation error.
// Ratios of P build the circular-slit maps of the annulus A(q,1); the
// functional equation P(q^2 w) = -P(w)/w drives their boundary behavior.
struct PrimeProduct {
  Complex value;
  double error_bound;  // |P_exact - value| <= error_bound (tail estimate)
};
PrimeProduct prime_product(Complex w, double q, int truncation = 30);

}  // namespace sqz
