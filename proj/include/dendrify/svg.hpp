#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "dendrify/attractor.hpp"

namespace dendrify {

namespace detail {

// 9 significant digits, deterministic.
inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

/// Deterministic SVG 1.1 rendering of a refinement: one path per cell with
/// id "cell-<address>", plus optional highlighted polylines (arc overlays)
/// and highlighted cells (an arc's chain). The viewBox is the bounding box
/// of the base polygon; a group transform flips the y axis so the figure
/// appears in standard orientation.
inline std::string render_svg(const PolygonalSystem& sys, const Refinement& r,
                              const std::vector<std::vector<Vec2d>>& polylines = {},
                              std::vector<Address> highlight = {}) {
  std::sort(highlight.begin(), highlight.end());
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const Point2& v : sys.base.vertices) {
    Vec2d p = to_vec2d(v);
    if (first) { xmin = xmax = p.x; ymin = ymax = p.y; first = false; }
    xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
  }
  double w = xmax - xmin, h = ymax - ymin;
  double stroke = std::max(w, h) * 0.002;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"";
  out += detail::fmt9(xmin) + " " + detail::fmt9(ymin) + " " + detail::fmt9(w) + " " + detail::fmt9(h) + "\">\n";
  out += "<g transform=\"matrix(1 0 0 -1 0 " + detail::fmt9(ymin + ymax) + ")\" fill=\"none\" stroke=\"#303030\" stroke-width=\"" +
         detail::fmt9(stroke) + "\">\n";
  for (const Cell& c : r.cells) {
    bool lit = std::binary_search(highlight.begin(), highlight.end(), c.address);
    out += "<path id=\"cell-" + format_address(c.address, sys.index_count()) + "\" d=\"";
    for (size_t i = 0; i < c.polygon.vertices.size(); ++i) {
      Vec2d p = to_vec2d(c.polygon.vertices[i]);
      out += (i == 0 ? "M" : "L");
      out += detail::fmt9(p.x) + " " + detail::fmt9(p.y);
    }
    out += lit ? "Z\" fill=\"#f3c6c6\"/>\n" : "Z\"/>\n";
  }
  for (size_t k = 0; k < polylines.size(); ++k) {
    out += "<polyline stroke=\"#c03030\" stroke-width=\"" + detail::fmt9(stroke * 2.5) + "\" points=\"";
    for (size_t i = 0; i < polylines[k].size(); ++i) {
      if (i) out += " ";
      out += detail::fmt9(polylines[k][i].x) + "," + detail::fmt9(polylines[k][i].y);
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace dendrify
