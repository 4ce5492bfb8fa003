#pragma once

#include <string>
#include <vector>

#include "sqz/domains.hpp"
#include "sqz/partition.hpp"

namespace sqz {

// Minimal SVG writer for plane figures: fixed square viewport, y axis up.
class SvgCanvas {
 public:
  explicit SvgCanvas(double half_extent = 1.1, int pixels = 640);

  void add_circle(Complex center, double radius, const std::string& color,
                  double width = 1.5, bool dashed = false);
  void add_arc(const CircularArcSlit& arc, const std::string& color, double width = 3.0);
  void add_segment(Complex a, Complex b, const std::string& color, double width = 1.5);
  void add_polyline(const std::vector<Complex>& pts, bool closed,
                    const std::string& color, double width = 1.5);
  void add_dot(Complex at, const std::string& color, double radius_px = 3.0);
  void add_legend_entry(const std::string& label, const std::string& color);

  std::string str() const;

 private:
  double sx(double x) const;
  double sy(double y) const;
  double half_;
  int px_;
  std::string body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

// What to draw: a domain plus optional overlays.
struct FigureView {
  const SlitDiskDomain* slit_disk = nullptr;
  const RingDomain* ring = nullptr;
  const ThreefoldExample* threefold = nullptr;
  const Circle* disk = nullptr;
  const BarrierSet* barriers = nullptr;
  const std::vector<Complex>* curve = nullptr;  // sampled free boundary
  std::pair<double, double> annulus_band{0.0, 0.0};  // r1, r2 guides (0 = off)
};

std::string render_figure_svg(const FigureView& view);

}  // namespace sqz
