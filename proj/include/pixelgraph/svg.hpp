#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "pixelgraph/cellset.hpp"
#include "pixelgraph/pixel_graph.hpp"

namespace pxg {
namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace detail

// SVG 1.1, 1024x1024 viewport, y flipped so row 1 sits at the bottom. Each
// graph contributes exactly one <rect> per column; overlay cells are drawn as
// <path> outlines so rect counts stay per-graph.
inline std::string render_svg(const std::vector<PixelGraph>& graphs, const CellSet* overlay = nullptr) {
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  const double side = 1024.0;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1024\" height=\"1024\" "
         "viewBox=\"0 0 1024 1024\">\n";
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const PixelGraph& g = graphs[gi];
    const double w = side / static_cast<double>(g.width());
    const double h = side / static_cast<double>(std::uint64_t(1) << g.n);
    const char* color = kPalette[gi % (sizeof kPalette / sizeof kPalette[0])];
    out += "  <g fill=\"" + std::string(color) + "\" fill-opacity=\"" + (graphs.size() > 1 ? "0.55" : "0.85") +
           "\">\n";
    for (std::uint64_t k = 0; k < g.width(); ++k) {
      const double x = static_cast<double>(k) * w;
      const double y = side - static_cast<double>(g.levels[k]) * h;
      out += "    <rect x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(y) + "\" width=\"" +
             detail::svg_num(w) + "\" height=\"" + detail::svg_num(h) + "\"/>\n";
    }
    out += "  </g>\n";
  }
  if (overlay != nullptr) {
    const double c = side / static_cast<double>(std::int64_t(1) << overlay->depth);
    out += "  <g fill=\"#333333\" fill-opacity=\"0.35\">\n";
    for (const Cell& cell : overlay->cells) {
      const double x = static_cast<double>(cell.col - 1) * c;
      const double y = side - static_cast<double>(cell.row) * c;
      out += "    <path d=\"M" + detail::svg_num(x) + " " + detail::svg_num(y) + "h" + detail::svg_num(c) + "v" +
             detail::svg_num(c) + "h-" + detail::svg_num(c) + "Z\"/>\n";
    }
    out += "  </g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pxg
