#include "sqz/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sqz {

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
}  // namespace

SvgCanvas::SvgCanvas(double half_extent, int pixels) : half_(half_extent), px_(pixels) {}

double SvgCanvas::sx(double x) const { return (x + half_) / (2 * half_) * px_; }
double SvgCanvas::sy(double y) const { return (half_ - y) / (2 * half_) * px_; }

void SvgCanvas::add_circle(Complex c, double r, const std::string& color, double width,
                           bool dashed) {
  body_ += "  <circle cx=\"" + fmt(sx(c.real())) + "\" cy=\"" + fmt(sy(c.imag())) +
           "\" r=\"" + fmt(r / (2 * half_) * px_) + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"" + fmt(width) + "\"" +
           (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
}

void SvgCanvas::add_arc(const CircularArcSlit& arc, const std::string& color,
                        double width) {
  const Complex a = std::polar(arc.radius, arc.angle_lo());
  const Complex b = std::polar(arc.radius, arc.angle_hi());
  const double r_px = arc.radius / (2 * half_) * px_;
  const int large = arc.half_width > M_PI / 2 ? 1 : 0;
  // sweep flag 0: svg y axis points down, so increasing angle looks clockwise
  body_ += "  <path d=\"M " + fmt(sx(a.real())) + " " + fmt(sy(a.imag())) + " A " +
           fmt(r_px) + " " + fmt(r_px) + " 0 " + std::to_string(large) + " 0 " +
           fmt(sx(b.real())) + " " + fmt(sy(b.imag())) + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgCanvas::add_segment(Complex a, Complex b, const std::string& color,
                            double width) {
  body_ += "  <line x1=\"" + fmt(sx(a.real())) + "\" y1=\"" + fmt(sy(a.imag())) +
           "\" x2=\"" + fmt(sx(b.real())) + "\" y2=\"" + fmt(sy(b.imag())) +
           "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgCanvas::add_polyline(const std::vector<Complex>& pts, bool closed,
                             const std::string& color, double width) {
  if (pts.size() < 2) return;
  std::string d = "M " + fmt(sx(pts[0].real())) + " " + fmt(sy(pts[0].imag()));
  for (std::size_t i = 1; i < pts.size(); ++i)
    d += " L " + fmt(sx(pts[i].real())) + " " + fmt(sy(pts[i].imag()));
  if (closed) d += " Z";
  body_ += "  <path d=\"" + d + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgCanvas::add_dot(Complex at, const std::string& color, double radius_px) {
  body_ += "  <circle cx=\"" + fmt(sx(at.real())) + "\" cy=\"" + fmt(sy(at.imag())) +
           "\" r=\"" + fmt(radius_px) + "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::add_legend_entry(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

std::string SvgCanvas::str() const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_ << "\" height=\""
     << px_ << "\" viewBox=\"0 0 " << px_ << " " << px_ << "\">\n"
     << "  <rect width=\"" << px_ << "\" height=\"" << px_ << "\" fill=\"white\"/>\n"
     << body_;
  double y = 18.0;
  for (const auto& [label, color] : legend_) {
    os << "  <rect x=\"10\" y=\"" << fmt(y - 9) << "\" width=\"14\" height=\"4\" fill=\""
       << color << "\"/>\n"
       << "  <text x=\"30\" y=\"" << fmt(y - 3)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    y += 18.0;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_figure_svg(const FigureView& view) {
  double half = 1.1;
  if (view.threefold) half = view.threefold->a + 0.3;
  SvgCanvas svg(half);
  svg.add_circle(Complex(0, 0), 1.0, "black", 1.5);
  svg.add_legend_entry("unit circle", "black");

  if (view.annulus_band.first > 0.0) {
    svg.add_circle(Complex(0, 0), view.annulus_band.first, "#bbbbbb", 1.0, true);
    svg.add_circle(Complex(0, 0), view.annulus_band.second, "#bbbbbb", 1.0, true);
    svg.add_legend_entry("enclosing annulus", "#bbbbbb");
  }
  if (view.slit_disk) {
    for (const auto& s : view.slit_disk->slits) svg.add_arc(s, "#c0392b");
    svg.add_legend_entry("slits", "#c0392b");
  }
  if (view.ring) {
    auto draw_curve = [&](const BoundaryCurve& c, const std::string& color) {
      if (const auto* v = std::get_if<Circle>(&c))
        svg.add_circle(v->center, v->radius, color);
      else if (const auto* v = std::get_if<CircularArcSlit>(&c))
        svg.add_arc(*v, color);
      else if (const auto* v = std::get_if<SlitUnion>(&c)) {
        for (const auto& a : v->arcs) svg.add_arc(a, color);
        for (const auto& s : v->segments)
          svg.add_segment(std::polar(s.rho_lo, s.angle), std::polar(s.rho_hi, s.angle),
                          color, 3.0);
      } else if (const auto* v = std::get_if<UnitCircleWithSlits>(&c)) {
        for (const auto& s : v->whiskers)
          svg.add_segment(std::polar(s.rho_lo, s.angle), std::polar(s.rho_hi, s.angle),
                          color, 3.0);
      } else if (const auto* v = std::get_if<PolylineCurve>(&c)) {
        svg.add_polyline(v->points, true, color);
      } else if (const auto* v = std::get_if<PointMarker>(&c)) {
        svg.add_dot(v->at, color);
      }
    };
    draw_curve(view.ring->outer, "#2c3e50");
    draw_curve(view.ring->inner, "#c0392b");
    svg.add_legend_entry("boundary continua", "#c0392b");
  }
  if (view.disk) {
    svg.add_circle(view.disk->center, view.disk->radius, "#2c3e50");
    svg.add_legend_entry("domain boundary", "#2c3e50");
  }
  if (view.threefold) {
    for (const auto& s : view.threefold->slits)
      svg.add_segment(std::polar(s.rho_lo, s.angle), std::polar(s.rho_hi, s.angle),
                      "#c0392b", 3.0);
    for (const auto& s : view.threefold->inverted_slits)
      svg.add_segment(std::polar(s.rho_lo, s.angle), std::polar(s.rho_hi, s.angle),
                      "#e67e22", 2.0);
    svg.add_legend_entry("slits", "#c0392b");
    svg.add_legend_entry("inverted slits", "#e67e22");
  }
  if (view.barriers) {
    for (const auto& a : view.barriers->arcs) svg.add_arc(a, "#c0392b");
    svg.add_legend_entry("barrier set", "#c0392b");
  }
  if (view.curve) {
    svg.add_polyline(*view.curve, true, "#2980b9", 2.0);
    svg.add_legend_entry("computed curve", "#2980b9");
  }
  return svg.str();
}

}  // namespace sqz
