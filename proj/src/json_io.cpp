#include "sqz/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqz {

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based position in the input
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col;
    throw std::invalid_argument(os.str());
  }
}

namespace {

double need_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument(std::string("domain JSON: missing numeric field '") +
                                key + "'");
  return j[key].get<double>();
}

Complex need_point(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
    throw std::invalid_argument(std::string("domain JSON: field '") + key +
                                "' must be [re, im]");
  return Complex(j[key][0].get<double>(), j[key][1].get<double>());
}

CircularArcSlit parse_arc(const Json& j) {
  CircularArcSlit a;
  a.radius = need_number(j, "radius");
  a.center_angle = wrap_angle(need_number(j, "center_angle"));
  a.half_width = need_number(j, "half_width");
  a.validate();
  return a;
}

RadialSegment parse_segment(const Json& j) {
  RadialSegment s;
  s.angle = wrap_angle(need_number(j, "angle"));
  s.rho_lo = need_number(j, "rho_lo");
  s.rho_hi = need_number(j, "rho_hi");
  s.validate();
  return s;
}

Json arc_to_json(const CircularArcSlit& a) {
  return Json{{"radius", a.radius},
              {"center_angle", a.center_angle},
              {"half_width", a.half_width}};
}

Json segment_to_json(const RadialSegment& s) {
  return Json{{"angle", s.angle}, {"rho_lo", s.rho_lo}, {"rho_hi", s.rho_hi}};
}

BoundaryCurve parse_curve(const Json& j) {
  if (!j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("curve JSON: missing string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "circle") {
    Circle c;
    c.center = j.contains("center") ? need_point(j, "center") : Complex(0, 0);
    c.radius = need_number(j, "radius");
    return c;
  }
  if (kind == "arc") return parse_arc(j);
  if (kind == "slit_union") {
    SlitUnion u;
    if (j.contains("arcs"))
      for (const auto& a : j["arcs"]) u.arcs.push_back(parse_arc(a));
    if (j.contains("segments"))
      for (const auto& s : j["segments"]) u.segments.push_back(parse_segment(s));
    if (u.arcs.empty() && u.segments.empty())
      throw std::invalid_argument("slit_union curve needs arcs or segments");
    return u;
  }
  if (kind == "unit_circle_with_slits") {
    UnitCircleWithSlits c;
    if (j.contains("whiskers"))
      for (const auto& s : j["whiskers"]) c.whiskers.push_back(parse_segment(s));
    return c;
  }
  if (kind == "polyline") {
    PolylineCurve p;
    if (!j.contains("points") || !j["points"].is_array() || j["points"].size() < 3)
      throw std::invalid_argument("polyline curve needs >= 3 points");
    for (const auto& pt : j["points"])
      p.points.push_back(Complex(pt[0].get<double>(), pt[1].get<double>()));
    return p;
  }
  if (kind == "point") return PointMarker{need_point(j, "at")};
  throw std::invalid_argument("curve JSON: unknown kind '" + kind + "'");
}

Json curve_to_json(const BoundaryCurve& c) {
  if (const auto* v = std::get_if<Circle>(&c))
    return Json{{"kind", "circle"},
                {"center", Json::array({v->center.real(), v->center.imag()})},
                {"radius", v->radius}};
  if (const auto* v = std::get_if<CircularArcSlit>(&c)) {
    Json j = arc_to_json(*v);
    j["kind"] = "arc";
    return j;
  }
  if (const auto* v = std::get_if<SlitUnion>(&c)) {
    Json arcs = Json::array(), segs = Json::array();
    for (const auto& a : v->arcs) arcs.push_back(arc_to_json(a));
    for (const auto& s : v->segments) segs.push_back(segment_to_json(s));
    return Json{{"kind", "slit_union"}, {"arcs", arcs}, {"segments", segs}};
  }
  if (const auto* v = std::get_if<UnitCircleWithSlits>(&c)) {
    Json segs = Json::array();
    for (const auto& s : v->whiskers) segs.push_back(segment_to_json(s));
    return Json{{"kind", "unit_circle_with_slits"}, {"whiskers", segs}};
  }
  if (const auto* v = std::get_if<PolylineCurve>(&c)) {
    Json pts = Json::array();
    for (Complex p : v->points) pts.push_back(Json::array({p.real(), p.imag()}));
    return Json{{"kind", "polyline"}, {"points", pts}};
  }
  const auto& v = std::get<PointMarker>(c);
  return Json{{"kind", "point"}, {"at", Json::array({v.at.real(), v.at.imag()})}};
}

}  // namespace

DomainSpec parse_domain(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("domain JSON: missing string field 'type'");
  DomainSpec spec;
  spec.type = j["type"].get<std::string>();

  if (spec.type == "annulus") {
    const double r = need_number(j, "r");
    spec.ring = make_annulus(r);
    spec.canonical = Json{{"type", "annulus"}, {"r", r}};
    return spec;
  }
  if (spec.type == "moebius_annulus") {
    const double r = need_number(j, "r");
    MoebiusDiskAutomorphism t;
    t.a = need_point(j, "a");
    t.rotation = j.value("rotation", 0.0);
    t.validate();
    spec.ring = make_moebius_annulus(r, t);
    spec.canonical = Json{{"type", "moebius_annulus"},
                          {"r", r},
                          {"a", Json::array({t.a.real(), t.a.imag()})},
                          {"rotation", t.rotation}};
    return spec;
  }
  if (spec.type == "slit_disk") {
    SlitDiskDomain d;
    if (j.contains("symmetric")) {
      const Json& s = j["symmetric"];
      d = build_symmetric_slit_disk(static_cast<int>(need_number(s, "n")),
                                    need_number(s, "r"), need_number(s, "alpha"));
    } else if (j.contains("slits")) {
      for (const auto& a : j["slits"]) d.slits.push_back(parse_arc(a));
      d.validate();
    } else {
      throw std::invalid_argument("slit_disk JSON needs 'slits' or 'symmetric'");
    }
    Json arcs = Json::array();
    for (const auto& a : d.slits) arcs.push_back(arc_to_json(a));
    spec.canonical = Json{{"type", "slit_disk"}, {"slits", arcs}};
    spec.slit_disk = std::move(d);
    return spec;
  }
  if (spec.type == "ring") {
    if (!j.contains("outer") || !j.contains("inner"))
      throw std::invalid_argument("ring JSON needs 'outer' and 'inner' curves");
    RingDomain d{parse_curve(j["outer"]), parse_curve(j["inner"])};
    d.validate();
    spec.canonical = Json{{"type", "ring"},
                          {"outer", curve_to_json(d.outer)},
                          {"inner", curve_to_json(d.inner)}};
    spec.ring = std::move(d);
    return spec;
  }
  if (spec.type == "disk") {
    Circle c;
    c.center = j.contains("center") ? need_point(j, "center") : Complex(0, 0);
    c.radius = need_number(j, "radius");
    if (!(c.radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    spec.disk = c;
    spec.canonical = Json{{"type", "disk"},
                          {"center", Json::array({c.center.real(), c.center.imag()})},
                          {"radius", c.radius}};
    return spec;
  }
  if (spec.type == "threefold_example") {
    const double a = need_number(j, "a");
    spec.threefold = build_threefold_example(a);
    spec.canonical = Json{{"type", "threefold_example"}, {"a", a}};
    return spec;
  }
  throw std::invalid_argument("domain JSON: unknown type '" + spec.type + "'");
}

namespace {
std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool looks_like_path(const std::string& s) {
  return !s.empty() && s.front() != '{' && s.find(':') == std::string::npos;
}
}  // namespace

DomainSpec load_domain_arg(const std::string& arg) {
  if (arg.rfind("annulus:", 0) == 0) {
    const double r = std::stod(arg.substr(8));
    return parse_domain(Json{{"type", "annulus"}, {"r", r}});
  }
  if (!arg.empty() && arg.front() == '{') return parse_domain(parse_json_text(arg));
  if (looks_like_path(arg)) return parse_domain(parse_json_text(read_text_file(arg)));
  throw std::invalid_argument("unrecognized domain argument: " + arg);
}

BarrierSet parse_barriers(const Json& j) {
  BarrierSet b;
  if (!j.is_object() || !j.contains("arcs"))
    throw std::invalid_argument("barrier JSON needs an 'arcs' array");
  for (const auto& a : j["arcs"]) b.arcs.push_back(parse_arc(a));
  if (j.contains("r1")) {
    b.r1 = need_number(j, "r1");
    b.r2 = need_number(j, "r2");
  } else {
    b.r1 = 1.0;
    b.r2 = 0.0;
    for (const auto& a : b.arcs) {
      b.r1 = std::min(b.r1, a.radius);
      b.r2 = std::max(b.r2, a.radius);
    }
  }
  b.validate();
  return b;
}

BarrierSet load_barriers_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return parse_barriers(parse_json_text(arg));
  return parse_barriers(parse_json_text(read_text_file(arg)));
}

Json barriers_to_json(const BarrierSet& b) {
  Json arcs = Json::array();
  for (const auto& a : b.arcs) arcs.push_back(arc_to_json(a));
  return Json{{"arcs", arcs}, {"r1", b.r1}, {"r2", b.r2}};
}

Json to_json(const ModulusResult& r) {
  return Json{{"value", r.value},
              {"error_estimate", r.error_estimate},
              {"resolution_used", r.resolution_used}};
}

Json to_json(const ReducedModuleResult& r) {
  return Json{{"value", r.value}, {"conformal_radius", r.conformal_radius}};
}

Json to_json(const SqueezeReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(Json{{c.name, c.value}});
  Json j{{"kind", r.exact ? "exact" : "interval"}, {"witness", r.witness},
         {"certificates", certs}};
  if (r.exact)
    j["value"] = r.lo;
  else {
    j["lo"] = r.lo;
    j["hi"] = r.hi;
  }
  return j;
}

Json to_json(const CanonicalMapResult& r) {
  return Json{{"modulus", std::isinf(r.modulus) ? Json("inf") : Json(r.modulus)},
              {"inner_radius", r.inner_radius},
              {"r_toward_outer", r.r_toward_outer},
              {"r_toward_inner", r.r_toward_inner},
              {"error_estimate", r.error_estimate},
              {"resolution_used", r.resolution_used}};
}

Json to_json(const PartitionResult& r, const OptimizeDiagnostics* diag) {
  Json fourier = Json::array();
  for (const auto& [a, b] : r.candidate.fourier)
    fourier.push_back(Json::array({a, b}));
  Json j{{"objective", r.objective},
         {"alpha1", r.alpha1},
         {"alpha2", r.alpha2},
         {"candidate", Json{{"c0", r.candidate.c0}, {"fourier", fourier}}},
         {"m1", to_json(r.m1)},
         {"m2", to_json(r.m2)},
         {"max_radius", r.max_radius},
         {"min_radius", r.min_radius},
         {"resolution", r.resolution},
         {"family", r.family}};
  if (diag) {
    Json hist = Json::array();
    for (double h : diag->objective_history) hist.push_back(h);
    j["diagnostics"] = Json{{"iterations", diag->iterations},
                            {"evaluations", diag->evaluations},
                            {"infeasible", diag->infeasible},
                            {"simplex_diameter", diag->simplex_diameter},
                            {"objective_history", hist}};
  }
  return j;
}

Json to_json(const ExtremalityCertificate& c) {
  Json recs = Json::array();
  for (const auto& r : c.records)
    recs.push_back(Json{{"alpha", r.alpha},
                        {"epsilon", r.epsilon},
                        {"ring_modulus", r.ring_modulus},
                        {"modulus_error", r.modulus_error},
                        {"bound", r.bound},
                        {"margin", r.margin},
                        {"resolution", r.resolution},
                        {"pass", r.pass}});
  return Json{{"n", c.n},
              {"r", c.r},
              {"alpha_star", c.alpha_star},
              {"margin_required", c.margin_required},
              {"conclusive", c.conclusive},
              {"squeeze_toward_unit_circle", c.lemma_value},
              {"witness", "identity map, unique up to rotation about 0"},
              {"records", recs}};
}

}  // namespace sqz
