#include "sqz/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "sqz/errors.hpp"
#include "sqz/svg.hpp"
#include "sqz/version.hpp"

namespace sqz {

namespace fs = std::filesystem;

namespace {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& bytes) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("output path not writable: " + path);
    out << bytes;
  }
  fs::rename(tmp, p);
}

void emit(const RunConfig& cfg, const std::string& bytes) {
  if (cfg.output.empty())
    std::cout << bytes;
  else
    write_atomic(cfg.output, bytes);
}

std::string resolved_cache_dir(const RunConfig& cfg) {
  if (cfg.no_cache) return {};
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("SQUEEZELAB_CACHE_DIR")) return env;
  return {};
}

std::string cache_ext(const std::string& format) {
  if (format == "csv") return ".csv";
  if (format == "svg") return ".svg";
  return ".json";
}

bool cache_load(const RunConfig& cfg, const std::string& key, std::string& bytes) {
  const std::string dir = resolved_cache_dir(cfg);
  if (dir.empty()) return false;
  std::ifstream in(fs::path(dir) / (key + cache_ext(cfg.format)), std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  bytes = os.str();
  if (bytes.empty()) {
    std::cerr << "cache: corrupt entry " << key << ", recomputing\n";
    return false;
  }
  if (cfg.format == "json") {
    try {
      parse_json_text(bytes);
    } catch (const std::exception&) {
      std::cerr << "cache: corrupt entry " << key << ", recomputing\n";
      return false;
    }
  }
  return true;
}

void cache_store(const RunConfig& cfg, const std::string& key, const std::string& bytes) {
  const std::string dir = resolved_cache_dir(cfg);
  if (dir.empty()) return;
  fs::create_directories(dir);
  write_atomic((fs::path(dir) / (key + cache_ext(cfg.format))).string(), bytes);
}

Json report_shell(const RunConfig& cfg, Json inputs, Json result) {
  return Json{{"format_version", kFormatVersion},
              {"tool", "squeezelab"},
              {"version", kVersion},
              {"command", cfg.command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// artifact-producing commands: each returns the output bytes

std::string cmd_modulus(const RunConfig& cfg, const Json& inputs, const DomainSpec& spec) {
  ModulusResult m;
  if (spec.ring) {
    m = ring_modulus(*spec.ring, cfg.resolution, GridKind::log_polar);
  } else if (spec.slit_disk) {
    const GridCondenser coarse =
        rasterize(*spec.slit_disk, PlateAssignment{}, cfg.resolution / 2, GridKind::log_polar);
    const GridCondenser fine =
        rasterize(*spec.slit_disk, PlateAssignment{}, cfg.resolution, GridKind::log_polar);
    const double m2h = ring_modulus(coarse).value;
    const double mh = ring_modulus(fine).value;
    m.value = mh + (mh - m2h) / 3.0;
    m.error_estimate = std::abs(mh - m2h) / 3.0;
    m.resolution_used = cfg.resolution;
  } else {
    throw std::invalid_argument("modulus: needs a ring or slit-disk domain");
  }
  return dump(report_shell(cfg, inputs, to_json(m)));
}

std::string cmd_reduced_modulus(const RunConfig& cfg, const Json& inputs,
                                const DomainSpec& spec) {
  if (!spec.disk) throw std::invalid_argument("reduced-modulus: needs a disk domain");
  const Complex z0(cfg.z_re, cfg.z_im);
  const GridKind kind =
      std::abs(spec.disk->center) < 1e-15 ? GridKind::log_polar : GridKind::cartesian;
  const GridCondenser g = raster_disk(*spec.disk, cfg.resolution, kind);
  return dump(report_shell(cfg, inputs, to_json(reduced_module(g, z0))));
}

std::string cmd_slit_map(const RunConfig& cfg, const Json& inputs) {
  AnnulusSlitMap map{cfg.q, cfg.a, cfg.truncation};
  map.validate();
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "circle,theta,z_re,z_im,f_re,f_im,abs_f\n";
    for (int k = 0; k < cfg.samples; ++k) {
      const double t = 2.0 * M_PI * k / cfg.samples;
      for (const auto& [label, rad] : {std::pair<const char*, double>{"outer", 1.0},
                                       std::pair<const char*, double>{"inner", map.q}}) {
        const Complex z = std::polar(rad, t);
        const Complex f = annulus_slit_map_eval(map, z);
        os << label << "," << num(t) << "," << num(z.real()) << "," << num(z.imag())
           << "," << num(f.real()) << "," << num(f.imag()) << "," << num(std::abs(f))
           << "\n";
      }
    }
    return os.str();
  }
  if (cfg.format == "svg") {
    SvgCanvas svg;
    svg.add_circle(Complex(0, 0), 1.0, "black");
    svg.add_legend_entry("unit circle", "black");
    std::vector<Complex> inner_image;
    for (int k = 0; k <= 256; ++k) {
      const double t = 2.0 * M_PI * k / 256;
      inner_image.push_back(annulus_slit_map_eval(map, std::polar(map.q, t)));
    }
    svg.add_polyline(inner_image, false, "#c0392b", 3.0);
    svg.add_legend_entry("image of the inner circle (slit)", "#c0392b");
    svg.add_circle(Complex(0, 0), map.a, "#bbbbbb", 1.0, true);
    svg.add_legend_entry("circle |w| = a", "#bbbbbb");
    return svg.str();
  }
  const SlitMapCertificate c = certify_slit_map(map);
  Json result{{"q", map.q},
              {"a", map.a},
              {"truncation", map.truncation},
              {"max_inner_deviation", c.max_inner_dev},
              {"max_outer_deviation", c.max_outer_dev},
              {"zero_residual", c.zero_residual},
              {"winding_number", c.winding},
              {"tail_bound", c.tail_bound}};
  return dump(report_shell(cfg, inputs, result));
}

SqueezeReport squeeze_dispatch(const DomainSpec& spec, Complex z, int resolution) {
  if (spec.ring) return squeeze_doubly_connected(*spec.ring, z, resolution);
  if (spec.slit_disk) {
    if (spec.slit_disk->slits.size() == 1)
      return squeeze_doubly_connected(make_slit_ring(spec.slit_disk->slits[0]), z,
                                      resolution);
    return squeeze_bounds(*spec.slit_disk, z, std::min(resolution, 192));
  }
  throw std::invalid_argument("squeeze: unsupported domain type");
}

std::string cmd_squeeze(const RunConfig& cfg, const Json& inputs, const DomainSpec& spec) {
  const SqueezeReport rep =
      squeeze_dispatch(spec, Complex(cfg.z_re, cfg.z_im), cfg.resolution);
  return dump(report_shell(cfg, inputs, to_json(rep)));
}

std::string cmd_sweep(const RunConfig& cfg, const DomainSpec& spec) {
  const double angle = (cfg.z_re == 0.0 && cfg.z_im == 0.0)
                           ? 0.0
                           : std::atan2(cfg.z_im, cfg.z_re);
  double rho_lo = 0.05, rho_hi = 0.93;
  if (spec.ring) {
    if (const auto* c = std::get_if<Circle>(&spec.ring->inner))
      rho_lo = std::abs(c->center) + c->radius + 0.04;
  }
  const int n = std::max(2, cfg.samples);
  struct Row {
    Complex z;
    double lo = 0.0, hi = 0.0;
    std::string dir;
    bool ok = false;
  };
  std::vector<Row> rows(n);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    const double rho = rho_lo + (rho_hi - rho_lo) * k / (n - 1);
    const Complex z = std::polar(rho, angle);
    rows[k].z = z;
    try {
      const SqueezeReport rep = squeeze_dispatch(spec, z, cfg.resolution);
      rows[k].lo = rep.lo;
      rows[k].hi = rep.hi;
      rows[k].dir = rep.witness;
      rows[k].ok = true;
    } catch (const std::exception&) {
      rows[k].ok = false;
    }
  }
  std::ostringstream os;
  os << "z_re,z_im,S_lo,S_hi,direction\n";
  for (const Row& r : rows) {
    if (!r.ok) continue;
    os << num(r.z.real()) << "," << num(r.z.imag()) << "," << num(r.lo) << ","
       << num(r.hi) << ",\"" << r.dir << "\"\n";
  }
  return os.str();
}

std::string cmd_partition(const RunConfig& cfg, const Json& inputs,
                          const BarrierSet& barriers) {
  OptimizeDiagnostics diag;
  const PartitionResult res = optimize_partition(barriers, cfg.alpha1, cfg.alpha2,
                                                 cfg.harmonics, cfg.resolution, {}, &diag);
  if (cfg.format == "svg") {
    std::vector<Complex> curve;
    for (int k = 0; k <= 512; ++k) {
      const double t = 2.0 * M_PI * k / 512;
      curve.push_back(std::polar(res.candidate.radius(t), t));
    }
    FigureView view;
    view.barriers = &barriers;
    view.curve = &curve;
    view.annulus_band = {barriers.r1, barriers.r2};
    return render_figure_svg(view);
  }
  return dump(report_shell(cfg, inputs, to_json(res, &diag)));
}

std::string cmd_plot(const DomainSpec& spec) {
  FigureView view;
  if (spec.slit_disk) view.slit_disk = &*spec.slit_disk;
  if (spec.ring) view.ring = &*spec.ring;
  if (spec.disk) view.disk = &*spec.disk;
  if (spec.threefold) view.threefold = &*spec.threefold;
  return render_figure_svg(view);
}

// ---------------------------------------------------------------------------
// verify suites: print the raw numbers behind every inequality

struct CheckPrinter {
  bool all_pass = true;
  void operator()(const std::string& label, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS " : "FAIL ") << label << ": " << detail << "\n";
    all_pass = all_pass && pass;
  }
};

int verify_thm1(const RunConfig& cfg) {
  CheckPrinter check;
  const double r = 0.25;
  const RingDomain annulus = make_annulus(r);
  double dev_exact = 0.0;
  for (int k = 3; k <= 9; ++k) {
    const double a = k / 10.0;
    const double want = std::max(a, r / a);
    const double got = squeeze_doubly_connected(annulus, Complex(a, 0)).value();
    dev_exact = std::max(dev_exact, std::abs(got - want));
  }
  check("analytic pipeline vs closed form max(a, r/a)", dev_exact < 1e-6,
        "max deviation " + num(dev_exact) + " (tolerance 1e-6)");

  MoebiusDiskAutomorphism t;
  t.a = Complex(0.2, 0.0);
  const RingDomain distorted = make_moebius_annulus(r, t);
  double dev_grid = 0.0;
  for (double a : {0.4, 0.6, 0.8}) {
    const double want = std::max(a, r / a);
    const Complex z = apply_moebius(t, Complex(a, 0));
    const double got =
        squeeze_doubly_connected(distorted, z, std::max(cfg.resolution, 384)).value();
    dev_grid = std::max(dev_grid, std::abs(got - want));
  }
  check("grid pipeline on a Moebius-distorted annulus", dev_grid < 1e-3,
        "max deviation " + num(dev_grid) + " (tolerance 1e-3)");

  const double eq = equilibrium_annulus(r);
  const double cross = std::abs(eq - r / eq);
  check("equilibrium circle sqrt(r)", std::abs(eq - 0.5) < 1e-6 && cross < 1e-12,
        "sqrt(0.25) = " + num(eq) + ", |a - r/a| at the crossing = " + num(cross));
  return check.all_pass ? kExitOk : kExitCheckFailed;
}

int verify_rw(const RunConfig& cfg) {
  CheckPrinter check;
  AnnulusSlitMap map{cfg.q, cfg.a, cfg.truncation};
  const SlitMapCertificate c = certify_slit_map(map);
  check("inner circle maps onto |w| = a", c.max_inner_dev < 1e-8,
        "max | |f| - " + num(cfg.a) + " | = " + num(c.max_inner_dev) +
            " over 256 samples (tolerance 1e-8, tail bound " + num(c.tail_bound) + ")");
  check("outer circle maps onto the unit circle", c.max_outer_dev < 1e-10,
        "max | |f| - 1 | = " + num(c.max_outer_dev) + " (tolerance 1e-10)");
  check("marked point is the zero", c.zero_residual < 1e-10,
        "|f(a)| = " + num(c.zero_residual));
  check("boundary winding number is 1", c.winding == 1,
        "winding = " + std::to_string(c.winding));
  return check.all_pass ? kExitOk : kExitCheckFailed;
}

std::vector<BarrierSet> thm2_barrier_sets() {
  std::vector<BarrierSet> sets;
  auto mk = [](std::vector<CircularArcSlit> arcs) {
    BarrierSet b;
    b.arcs = std::move(arcs);
    b.r1 = 0.4;
    b.r2 = 0.6;
    return b;
  };
  sets.push_back(mk({{0.5, 0.0, M_PI / 2}}));
  sets.push_back(mk({{0.45, 0.0, 0.6}, {0.55, M_PI, 0.7}}));
  sets.push_back(mk({{0.4, 0.0, 0.5}, {0.5, 2.1, 0.5}, {0.6, 4.2, 0.5}}));
  sets.push_back(mk({{0.6, 1.0, 1.0}}));
  sets.push_back(mk({{0.42, 0.3, 0.8}, {0.58, 3.5, 0.9}}));
  return sets;
}

int verify_thm2(const RunConfig& cfg) {
  CheckPrinter check;
  const auto sets = thm2_barrier_sets();
  const int nsets = std::min<int>(cfg.trials, static_cast<int>(sets.size()));
  const int res = std::min(cfg.resolution, 128);
  for (int i = 0; i < nsets; ++i) {
    for (const auto& [a1, a2] : {std::pair<double, double>{1.0, 2.0},
                                 std::pair<double, double>{2.0, 1.0}}) {
      const PartitionResult r = optimize_partition(sets[i], a1, a2, 4, res);
      const LocationCheck lc = check_free_boundary_location(r, sets[i], a1, a2, 0.02);
      const std::string label = "barrier set " + std::to_string(i + 1) + ", case " +
                                std::string(1, lc.case_label);
      if (lc.case_label == 'a')
        check(label, lc.pass,
              "max_radius = " + num(lc.max_radius) + " <= r2 + 0.02 = " + num(0.62));
      else
        check(label, lc.pass,
              "min_radius = " + num(lc.min_radius) + " >= r1 - 0.02 = " + num(0.38));
    }
  }
  return check.all_pass ? kExitOk : kExitCheckFailed;
}

int verify_thm3(const RunConfig& cfg) {
  CheckPrinter check;
  const ExtremalityCertificate cert =
      certify_extremal_slit_disk(3, 0.5, 0.05, std::min(cfg.resolution, 192));
  check("certificate conclusive", cert.conclusive,
        "alpha_star = " + num(cert.alpha_star));
  check("alpha_star above the floor", cert.alpha_star >= 1e-3,
        "alpha_star = " + num(cert.alpha_star) + " >= 0.001");
  double bound_at_star = 1.0;
  for (const auto& rec : cert.records)
    if (rec.alpha == cert.alpha_star && rec.pass) bound_at_star = rec.bound;
  check("certified margin", bound_at_star <= 0.45,
        "mu^{-1}(2 pi M) = " + num(bound_at_star) + " <= 0.45 < 0.5 = r");
  check("revalidation from stored moduli", cert.revalidate(),
        "all stored inequalities reproduce");
  std::cout << "  conclusion: squeezing value at 0 equals r = 0.5 with the identity "
               "witness, unique up to rotation\n";
  return check.all_pass ? kExitOk : kExitCheckFailed;
}

int verify_polarization(const RunConfig& cfg) {
  CheckPrinter check;
  int worst_idx = -1;
  double worst = -1.0;
  bool all = true;
  for (int i = 0; i < 100; ++i) {
    const GridCondenser g = random_lattice_ring_condenser(cfg.seed + i, 96);
    const double t =
        random_admissible_polarization_radius(g, cfg.seed * 1000003ULL + i);
    const PolarizeResult p = polarize(g, t);
    const double c0 = capacity(g);
    const double c1 = capacity(p.condenser);
    const double excess = c1 - c0;
    if (excess > worst) {
      worst = excess;
      worst_idx = i;
    }
    all = all && (excess <= 1e-12);
  }
  check("capacity(polarized) <= capacity(original) + 1e-12 on 100 seeded trials", all,
        "worst excess " + num(worst) + " at trial " + std::to_string(worst_idx));
  return check.all_pass && all ? kExitOk : kExitCheckFailed;
}

int verify_lemma2(const RunConfig& cfg) {
  CheckPrinter check;
  RingDomain d;
  d.outer = UnitCircleWithSlits{{RadialSegment{M_PI, 0.8, 1.0}}};
  d.inner = Circle{Complex(0, 0), 0.3};
  const int res = std::max(cfg.resolution, 192);

  double worst_excess = -1.0;
  bool contract = true;
  for (int k = 0; k < 8; ++k) {
    // sampled arcs placed away from the whisker attachment at angle pi
    const double center = (2 * k + 1) * M_PI / 8.0;
    const double hw = M_PI / 10.0;
    const double meas = mapped_arc_measure(d, center - hw, center + hw, res);
    const double excess = meas - 2 * hw;
    worst_excess = std::max(worst_excess, excess);
    contract = contract && (excess <= 0.01);
    std::cout << "  arc at " << num(center) << ": image measure " << num(meas)
              << " vs arc measure " << num(2 * hw) << "\n";
  }
  check("image measure contracts on 8 sampled arcs", contract,
        "worst excess " + num(worst_excess) + " (tolerance 0.01)");

  double total = 0.0;
  for (int k = 0; k < 8; ++k)
    total += mapped_arc_measure(d, k * M_PI / 4.0, (k + 1) * M_PI / 4.0, res);
  check("full partition of the unit circle sums to 2 pi",
        std::abs(total - 2 * M_PI) < 0.01 * 2 * M_PI,
        "total = " + num(total) + " vs " + num(2 * M_PI));

  const RingDomain pure = make_annulus(0.3);
  const double id_meas = mapped_arc_measure(pure, -M_PI / 4, M_PI / 4, res);
  check("identity map on the pure annulus", std::abs(id_meas - M_PI / 2) < 0.01,
        "image measure " + num(id_meas) + " vs " + num(M_PI / 2));
  return check.all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.suite == "thm1") return verify_thm1(cfg);
  if (cfg.suite == "rw") return verify_rw(cfg);
  if (cfg.suite == "thm2") return verify_thm2(cfg);
  if (cfg.suite == "thm3") return verify_thm3(cfg);
  if (cfg.suite == "polarization") return verify_polarization(cfg);
  if (cfg.suite == "lemma2") return verify_lemma2(cfg);
  throw std::invalid_argument(
      "unknown verify suite '" + cfg.suite +
      "' (expected thm1, rw, thm2, thm3, polarization, or lemma2)");
}

}  // namespace

std::string cache_key(const RunConfig& cfg, const Json& canonical_inputs) {
  Json key{{"command", cfg.command},
           {"inputs", canonical_inputs},
           {"resolution", cfg.resolution},
           {"format", cfg.format},
           {"seed", cfg.seed},
           {"version", kVersion}};
  return fnv1a64_hex(key.dump());
}

int run(const RunConfig& cfg) {
  try {
    if (cfg.command == "verify") return cmd_verify(cfg);

    Json inputs{{"resolution", cfg.resolution}, {"seed", cfg.seed}};
    DomainSpec spec;
    BarrierSet barriers;
    const bool needs_domain = cfg.command == "modulus" ||
                              cfg.command == "reduced-modulus" ||
                              cfg.command == "squeeze" || cfg.command == "sweep" ||
                              cfg.command == "plot";
    if (needs_domain) {
      spec = load_domain_arg(cfg.domain_arg);
      inputs["domain"] = spec.canonical;
    }
    if (cfg.command == "squeeze" || cfg.command == "sweep" ||
        cfg.command == "reduced-modulus")
      inputs["z"] = Json::array({cfg.z_re, cfg.z_im});
    if (cfg.command == "slit-map") {
      inputs["q"] = cfg.q;
      inputs["a"] = cfg.a;
      inputs["truncation"] = cfg.truncation;
      inputs["samples"] = cfg.samples;
    }
    if (cfg.command == "sweep") inputs["samples"] = cfg.samples;
    if (cfg.command == "partition") {
      barriers = load_barriers_arg(cfg.barriers_arg);
      inputs["barriers"] = barriers_to_json(barriers);
      inputs["alpha1"] = cfg.alpha1;
      inputs["alpha2"] = cfg.alpha2;
      inputs["harmonics"] = cfg.harmonics;
    }

    const std::string key = cache_key(cfg, inputs);
    std::string bytes;
    if (cache_load(cfg, key, bytes)) {
      emit(cfg, bytes);
      std::cerr << "cache: hit " << key << "\n";
      return kExitOk;
    }

    if (cfg.command == "modulus")
      bytes = cmd_modulus(cfg, inputs, spec);
    else if (cfg.command == "reduced-modulus")
      bytes = cmd_reduced_modulus(cfg, inputs, spec);
    else if (cfg.command == "slit-map")
      bytes = cmd_slit_map(cfg, inputs);
    else if (cfg.command == "squeeze")
      bytes = cmd_squeeze(cfg, inputs, spec);
    else if (cfg.command == "sweep")
      bytes = cmd_sweep(cfg, spec);
    else if (cfg.command == "partition")
      bytes = cmd_partition(cfg, inputs, barriers);
    else if (cfg.command == "plot")
      bytes = cmd_plot(spec);
    else
      throw std::invalid_argument("unknown command: " + cfg.command);

    emit(cfg, bytes);
    cache_store(cfg, key, bytes);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sqz
