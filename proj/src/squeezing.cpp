#include "sqz/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqz/errors.hpp"
#include "sqz/modulus.hpp"

namespace sqz {

namespace {

double dist_point_to_arc(Complex p, const CircularArcSlit& a) {
  if (a.contains_angle(std::arg(p))) return std::abs(std::abs(p) - a.radius);
  const Complex t1 = std::polar(a.radius, a.angle_lo());
  const Complex t2 = std::polar(a.radius, a.angle_hi());
  return std::min(std::abs(p - t1), std::abs(p - t2));
}

double arc_max_dist(Complex p, const CircularArcSlit& a) {
  double best = 0.0;
  for (int k = 0; k <= 64; ++k) {
    const double t = a.angle_lo() + 2.0 * a.half_width * k / 64.0;
    best = std::max(best, std::abs(p - std::polar(a.radius, t)));
  }
  return best;
}

// min over the slit arc of |moebius_z(w)| (distance of the image arc to 0)
double moebius_image_min(const MoebiusDiskAutomorphism& m, const CircularArcSlit& a) {
  double best = 2.0;
  constexpr int n = 2048;
  for (int k = 0; k <= n; ++k) {
    const double t = a.angle_lo() + 2.0 * a.half_width * k / n;
    best = std::min(best, std::abs(apply_moebius(m, std::polar(a.radius, t))));
  }
  return best;
}

}  // namespace

SqueezeReport squeeze_doubly_connected(const RingDomain& d, Complex z, int resolution,
                                       const ToleranceConfig& tol) {
  const CanonicalMapResult cm = slit_radii(d, z, resolution, {}, tol);
  SqueezeReport rep;
  rep.exact = true;
  const double tie_tol = std::max(1e-12, 2.0 * cm.error_estimate);
  if (std::abs(cm.r_toward_outer - cm.r_toward_inner) <= tie_tol) {
    rep.lo = rep.hi = std::max(cm.r_toward_outer, cm.r_toward_inner);
    rep.witness = "both canonical maps extremal (tie)";
  } else if (cm.r_toward_outer > cm.r_toward_inner) {
    rep.lo = rep.hi = cm.r_toward_outer;
    rep.witness = "canonical map sending the outer continuum to the unit circle";
  } else {
    rep.lo = rep.hi = cm.r_toward_inner;
    rep.witness = "canonical map sending the inner continuum to the unit circle";
  }
  rep.certificates.push_back({"r_toward_outer", cm.r_toward_outer});
  rep.certificates.push_back({"r_toward_inner", cm.r_toward_inner});
  rep.certificates.push_back({"grid_error_estimate", cm.error_estimate});
  return rep;
}

SqueezeReport directional_squeeze_circle_slits(const SlitDiskDomain& d) {
  d.validate();
  if (d.slits.empty()) throw std::domain_error("needs at least one slit");
  const double r = d.slits.front().radius;
  for (const auto& s : d.slits)
    if (s.radius != r)
      throw std::domain_error(
          "directional squeezing toward the unit circle is exact only when all "
          "slits lie on one circle");
  SqueezeReport rep;
  rep.exact = true;
  rep.lo = rep.hi = r;
  rep.witness = "identity map, unique up to rotation about 0";
  rep.certificates.push_back({"slit_circle_radius", r});
  return rep;
}

DirectionalBound directional_squeeze_upper_bound(const SlitDiskDomain& d,
                                                 int slit_index, Complex z,
                                                 double epsilon, int resolution,
                                                 const ToleranceConfig& tol) {
  d.validate();
  if (slit_index < 0 || slit_index >= static_cast<int>(d.slits.size()))
    throw std::domain_error("missing slit index");
  const CircularArcSlit& slit = d.slits[slit_index];
  const Complex center = std::polar(slit.radius, slit.center_angle);

  // admissible separating radii: the circle must enclose the slit and stay
  // clear of z, the unit circle, and every other continuum
  double eps_hi = 1.0 - std::abs(center);
  eps_hi = std::min(eps_hi, std::abs(z - center));
  for (int j = 0; j < static_cast<int>(d.slits.size()); ++j)
    if (j != slit_index) eps_hi = std::min(eps_hi, dist_point_to_arc(center, d.slits[j]));
  eps_hi *= 0.92;
  const double extent = arc_max_dist(center, slit);
  const double eps_lo = 1.25 * extent + 6.0 * (2.0 * eps_hi / resolution);
  if (!(eps_lo < eps_hi))
    throw TopologyError("no admissible separating circle around the slit");

  std::vector<double> candidates;
  if (epsilon > 0.0) {
    if (epsilon < extent || epsilon >= eps_hi / 0.92)
      throw TopologyError("separating circle fails the separation test");
    candidates.push_back(epsilon);
  } else {
    for (int k = 0; k < 5; ++k)
      candidates.push_back(eps_lo * std::pow(eps_hi / eps_lo, k / 4.0));
  }

  DirectionalBound best;
  for (double eps : candidates) {
    const RingDomain ring{Circle{center, eps}, slit};
    ModulusResult m;
    try {
      m = ring_modulus(ring, resolution, GridKind::cartesian, {}, tol);
    } catch (const RefinementError&) {
      continue;
    }
    DirectionalBound b;
    b.ring_modulus = m.value;
    b.modulus_error = m.error_estimate;
    b.epsilon = eps;
    b.resolution = resolution;
    b.bound = groetzsch_mu_inv(2.0 * M_PI * m.value, tol);
    b.limsup_constant = std::exp(-2.0 * M_PI * m.value);
    b.valid = true;
    if (!best.valid || b.bound < best.bound) best = b;
  }
  if (!best.valid) throw TopologyError("no separating circle was rasterizable");
  return best;
}

SqueezeReport squeeze_bounds(const SlitDiskDomain& d, Complex z, int resolution,
                             const ToleranceConfig& tol) {
  d.validate();
  if (!(std::abs(z) < 1.0)) throw std::domain_error("z not interior");
  for (const auto& s : d.slits)
    if (dist_point_to_arc(z, s) < 1e-12) throw std::domain_error("z lies on a slit");

  SqueezeReport rep;
  rep.exact = false;

  // Lower bound: Moebius witness moving z to 0.
  MoebiusDiskAutomorphism m;
  m.a = z;
  double lo = 2.0;
  for (const auto& s : d.slits) lo = std::min(lo, moebius_image_min(m, s));
  rep.certificates.push_back({"moebius_witness_distance", lo});

  // Circle-slit configuration at the origin: the identity witness value.
  bool same_radius = !d.slits.empty();
  for (const auto& s : d.slits) same_radius = same_radius && s.radius == d.slits[0].radius;
  if (same_radius && std::abs(z) == 0.0) {
    lo = std::max(lo, d.slits[0].radius);
    rep.certificates.push_back({"circle_slit_witness", d.slits[0].radius});
  }
  rep.lo = lo;

  // Upper bound: max over boundary continua of the directional ring bound.
  double hi = 0.0;
  int attained = -1;
  bool warned = false;
  for (int k = 0; k < static_cast<int>(d.slits.size()); ++k) {
    double b;
    try {
      const DirectionalBound db =
          directional_squeeze_upper_bound(d, k, z, 0.0, resolution, tol);
      b = std::min(1.0, db.bound + db.modulus_error * 4.0 * M_PI);
      rep.certificates.push_back({"slit_" + std::to_string(k) + "_bound", b});
    } catch (const TopologyError&) {
      b = 1.0;
      warned = true;
      rep.certificates.push_back({"slit_" + std::to_string(k) + "_bound_unavailable", 1.0});
    }
    if (b > hi) {
      hi = b;
      attained = k;
    }
  }
  // toward the unit circle: ring between T and a concentric separating circle
  {
    double rmax = 0.0;
    for (const auto& s : d.slits) rmax = std::max(rmax, s.radius);
    double b = 1.0;
    if (std::abs(z) < 0.5 * (1.0 + rmax)) {
      const double c = 0.5 * (1.0 + std::max(rmax, std::abs(z)));
      const double mT = std::log(1.0 / c) / (2.0 * M_PI);
      b = groetzsch_mu_inv(2.0 * M_PI * mT, tol);
      rep.certificates.push_back({"unit_circle_bound", b});
    } else {
      warned = true;
      rep.certificates.push_back({"unit_circle_bound_unavailable", 1.0});
    }
    if (b > hi) {
      hi = b;
      attained = -2;
    }
  }
  rep.hi = std::min(1.0, std::max(hi, rep.lo));
  if (warned) rep.certificates.push_back({"warning_no_separating_curve", 1.0});
  rep.witness = attained == -2 ? "upper bound attained toward the unit circle"
                               : "upper bound attained toward slit " +
                                     std::to_string(std::max(attained, 0));
  return rep;
}

bool ExtremalityCertificate::revalidate() const {
  if (!conclusive) return false;
  if (lemma_value != r) return false;
  bool any_at_star = false;
  for (const Record& rec : records) {
    if (rec.ring_modulus > 0.0) {  // separating-ring probes that produced a modulus
      const double bound = groetzsch_mu_inv(2.0 * M_PI * rec.ring_modulus);
      if (std::abs(bound - rec.bound) > 1e-10) return false;
      const bool pass = bound <= r - margin_required;
      if (pass != rec.pass) return false;
      if (rec.pass && std::abs(rec.margin - (r - bound)) > 1e-10) return false;
    } else if (rec.pass) {
      return false;  // a pass must carry its raw modulus
    }
    if (rec.alpha <= alpha_star && !rec.pass) return false;
    if (rec.alpha == alpha_star && rec.pass) any_at_star = true;
  }
  return any_at_star;
}

ExtremalityCertificate certify_extremal_slit_disk(int n, double r,
                                                  double margin_required,
                                                  int resolution,
                                                  const ToleranceConfig& tol) {
  if (n < 3)
    throw std::domain_error(
        "certificate applies to connectivity n >= 3; n = 2 has an exact value");
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("r must lie in (0,1)");

  ExtremalityCertificate cert;
  cert.n = n;
  cert.r = r;
  cert.margin_required = margin_required;
  cert.lemma_value = r;

  auto probe = [&](double alpha) -> ExtremalityCertificate::Record {
    ExtremalityCertificate::Record rec;
    rec.alpha = alpha;
    try {
      const SlitDiskDomain d = build_symmetric_slit_disk(n, r, alpha);
      // (n-1)-fold symmetry: one slit direction suffices
      const DirectionalBound b =
          directional_squeeze_upper_bound(d, 0, Complex(0, 0), 0.0, resolution, tol);
      rec.epsilon = b.epsilon;
      rec.ring_modulus = b.ring_modulus;
      rec.modulus_error = b.modulus_error;
      rec.resolution = b.resolution;
      rec.bound = b.bound;
      rec.pass = rec.bound <= r - margin_required;
      rec.margin = rec.pass ? r - rec.bound : 0.0;
    } catch (const std::exception&) {
      rec.pass = false;
      rec.bound = 1.0;
    }
    return rec;
  };

  const double alpha_floor = 1e-4;
  double alpha_lo = alpha_floor;
  double alpha_hi = 0.95 * M_PI / (n - 1);

  auto rec_lo = probe(alpha_lo);
  cert.records.push_back(rec_lo);
  if (!rec_lo.pass) {
    cert.conclusive = false;  // never a false certificate
    cert.alpha_star = 0.0;
    return cert;
  }
  auto rec_hi = probe(alpha_hi);
  cert.records.push_back(rec_hi);
  if (rec_hi.pass) {
    alpha_lo = alpha_hi;
  } else {
    for (int it = 0; it < 12; ++it) {
      const double mid = 0.5 * (alpha_lo + alpha_hi);
      auto rec = probe(mid);
      cert.records.push_back(rec);
      (rec.pass ? alpha_lo : alpha_hi) = mid;
    }
  }
  cert.alpha_star = alpha_lo;
  // support points below alpha_star
  for (double frac : {0.5, 0.25}) {
    auto rec = probe(alpha_lo * frac);
    cert.records.push_back(rec);
    if (!rec.pass) {
      cert.conclusive = false;
      cert.alpha_star = 0.0;
      return cert;
    }
  }
  // keep only records at or below alpha_star plus the failing witnesses above
  cert.conclusive = true;
  if (!cert.revalidate()) {
    cert.conclusive = false;
    cert.alpha_star = 0.0;
  }
  return cert;
}

double equilibrium_annulus(double r) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("r must lie in (0,1)");
  return std::sqrt(r);
}

namespace {
MonotonicityProbe compare_intervals(double sub_lo, double sub_hi, double super_lo,
                                    double super_hi) {
  MonotonicityProbe p;
  p.sub_lo = sub_lo;
  p.sub_hi = sub_hi;
  p.super_lo = super_lo;
  p.super_hi = super_hi;
  if (sub_lo > super_hi)
    p.outcome = ProbeOutcome::confirmed;
  else if (sub_hi < super_lo)
    p.outcome = ProbeOutcome::refuted;
  else
    p.outcome = ProbeOutcome::inconclusive;
  return p;
}
}  // namespace

MonotonicityProbe monotonicity_probe(const RingDomain& omega,
                                     const RingDomain& omega_sub, Complex z,
                                     int resolution, const ToleranceConfig& tol) {
  // containment: same outer continuum, enlarged inner continuum
  const auto* c1 = std::get_if<Circle>(&omega.inner);
  const auto* c2 = std::get_if<Circle>(&omega_sub.inner);
  const auto* a1 = std::get_if<CircularArcSlit>(&omega.inner);
  const auto* a2 = std::get_if<CircularArcSlit>(&omega_sub.inner);
  if (c1 && c2) {
    if (std::abs(c1->center) > 1e-14 || std::abs(c2->center) > 1e-14)
      throw std::domain_error("probe supports concentric ring pairs");
    if (!(c2->radius > c1->radius))
      throw std::domain_error("omega_sub must be a proper subdomain");
  } else if (a1 && a2) {
    // the subdomain's slit must contain the original arc
    double gap = std::abs(wrap_angle(a1->center_angle) - wrap_angle(a2->center_angle));
    gap = std::min(gap, 2.0 * M_PI - gap);
    if (a1->radius != a2->radius || !(a2->half_width > a1->half_width) ||
        gap + a1->half_width > a2->half_width)
      throw std::domain_error("omega_sub must enlarge the slit arc");
  } else {
    throw std::domain_error("unsupported ring pair");
  }

  const CanonicalMapResult m_sub = slit_radii(omega_sub, z, resolution, {}, tol);
  const CanonicalMapResult m_sup = slit_radii(omega, z, resolution, {}, tol);
  const double e_sub = 2.0 * m_sub.error_estimate + 1e-12;
  const double e_sup = 2.0 * m_sup.error_estimate + 1e-12;
  auto p = compare_intervals(m_sub.r_toward_inner - e_sub, m_sub.r_toward_inner + e_sub,
                             m_sup.r_toward_inner - e_sup, m_sup.r_toward_inner + e_sup);
  p.note = "directional value toward the enlarged inner continuum";
  return p;
}

MonotonicityProbe monotonicity_probe(const SlitDiskDomain& omega,
                                     const SlitDiskDomain& omega_sub, Complex z,
                                     int resolution, const ToleranceConfig& tol) {
  omega.validate();
  omega_sub.validate();
  if (omega.slits.size() != omega_sub.slits.size())
    throw std::domain_error("probe expects the same number of continua");
  const std::size_t last = omega.slits.size() - 1;
  for (std::size_t k = 0; k + 1 < omega.slits.size(); ++k)
    if (omega.slits[k].radius != omega_sub.slits[k].radius ||
        omega.slits[k].center_angle != omega_sub.slits[k].center_angle ||
        omega.slits[k].half_width != omega_sub.slits[k].half_width)
      throw std::domain_error("probe expects shared continua except the last");
  const CircularArcSlit& s1 = omega.slits[last];
  const CircularArcSlit& s2 = omega_sub.slits[last];
  if (s1.radius != s2.radius || !(s2.half_width > s1.half_width))
    throw std::domain_error("omega_sub must widen the last slit");

  // rasterized containment: plate cells of omega's slits inside omega_sub's
  const GridCondenser g1 = rasterize(omega, {}, 96, GridKind::log_polar);
  const GridCondenser g2 = rasterize(omega_sub, {}, 96, GridKind::log_polar);
  for (std::size_t c = 0; c < g1.cell.size(); ++c)
    if (g1.cell[c] == CellState::plate1 && g2.cell[c] != CellState::plate1)
      throw std::domain_error("rasterized containment check failed");

  // certified intervals toward the last slit: no explicit lower-bound map is
  // available for slit directions, so the probe is honest about [0, bound]
  const DirectionalBound b_sub = directional_squeeze_upper_bound(
      omega_sub, static_cast<int>(last), z, 0.0, resolution, tol);
  const DirectionalBound b_sup = directional_squeeze_upper_bound(
      omega, static_cast<int>(last), z, 0.0, resolution, tol);
  auto p = compare_intervals(0.0, b_sub.bound, 0.0, b_sup.bound);
  p.note = "interval comparison toward the widened slit; confirmation needs "
           "disjoint intervals";
  return p;
}

}  // namespace sqz
