#include "sqz/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqz {

void ToleranceConfig::validate() const {
  if (!(solver_rel_tol > 0.0) || !(mu_inv_tol > 0.0))
    throw std::domain_error("tolerances must be strictly positive");
  if (product_truncation < 1)
    throw std::domain_error("product_truncation must be >= 1");
}

namespace {
double agm(double a, double b) {
  for (int it = 0; it < 64; ++it) {
    if (std::abs(a - b) <= 2.0 * std::numeric_limits<double>::epsilon() * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}
}  // namespace

double complete_elliptic_k(double k) {
  if (!(k >= 0.0) || k >= 1.0)
    throw std::domain_error("complete_elliptic_k: k must lie in [0,1)");
  return M_PI / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double groetzsch_mu(double r) {
  if (!(r > 0.0) || !(r < 1.0))
    throw std::domain_error("groetzsch_mu: r must lie in (0,1)");
  // mu = (pi/2) K(r') / K(r) with K(k) = pi / (2 agm(1, k')); both integrals
  // reduce to AGM calls on (1, r) and (1, r'), stable for r near 0 and 1
  const double rp = std::sqrt((1.0 - r) * (1.0 + r));
  return 0.5 * M_PI * agm(1.0, std::min(rp, 1.0)) / agm(1.0, r);
}

double groetzsch_mu_inv(double m, const ToleranceConfig& tol) {
  tol.validate();
  if (!(m > 0.0)) throw std::domain_error("groetzsch_mu_inv: m must be > 0");
  // mu is strictly decreasing; bracket and bisect. The bracket endpoints are
  // kept away from {0,1} where mu overflows; mu(1e-15) ~ 36, so for larger m
  // fall back to the asymptotic inverse r = 4 e^{-m} directly (its relative
  // error is below machine precision in that regime).
  double lo = 1e-15, hi = 1.0 - 1e-15;
  if (m >= groetzsch_mu(lo)) return 4.0 * std::exp(-m);
  if (m <= groetzsch_mu(hi)) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = groetzsch_mu(mid);
    if (std::abs(v - m) <= tol.mu_inv_tol) return mid;
    if (v > m)
      lo = mid;  // mu too large -> r too small
    else
      hi = mid;
    if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
  }
  return 0.5 * (lo + hi);
}

PrimeProduct prime_product(Complex w, double q, int truncation) {
  if (w == Complex(0.0, 0.0))
    throw std::domain_error("prime_product: w must be nonzero");
  if (!(q >= 0.0) || q >= 1.0)
    throw std::domain_error("prime_product: q must lie in [0,1)");
  if (truncation < 1)
    throw std::domain_error("prime_product: truncation must be >= 1");

  Complex p = 1.0 - w;
  const Complex winv = 1.0 / w;
  const double q2 = q * q;
  double qk = 1.0;
  for (int k = 1; k <= truncation; ++k) {
    qk *= q2;
    p *= (1.0 - qk * w) * (1.0 - qk * winv);
  }

  // Tail bound: for k > K each factor pair differs from 1 by at most
  // q^{2k} (|w| + 1/|w|) / (1 - q^{2k} max(|w|,1/|w|)); summing the geometric
  // series and exponentiating bounds the relative tail error.
  double bound = std::numeric_limits<double>::infinity();
  const double aw = std::abs(w);
  const double mw = std::max(aw, 1.0 / aw);
  const double qtail = qk * q2;  // q^{2(K+1)}
  if (qtail * mw < 0.5) {
    const double s = qtail * (aw + 1.0 / aw) / ((1.0 - q2) * (1.0 - qtail * mw));
    bound = std::abs(p) * std::expm1(s);
  }
  return {p, bound};
}

}  // namespace sqz
