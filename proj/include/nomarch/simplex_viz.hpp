#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/text.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

// k anchor points on the unit circle, anchor j at angle 2*pi*j/k from the
// positive x axis (counterclockwise, 0-based).
inline Matrix simplex_anchors(int k) {
  if (k < 1) throw dimension_error("simplex_anchors: k must be >= 1");
  Matrix A(k, 2);
  const double pi = std::acos(-1.0);
  for (int j = 0; j < k; ++j) {
    const double t = 2.0 * pi * j / k;
    A(j, 0) = std::cos(t);
    A(j, 1) = std::sin(t);
  }
  return A;
}

struct SimplexLayout {
  Matrix anchors;  // k x 2
  Matrix points;   // n x 2
  std::vector<std::string> color_labels;   // one per point, or empty
  std::vector<std::string> anchor_labels;  // one per anchor
};

// Barycentric projection: each simplex row maps to the matching convex
// combination of the circle anchors.
inline SimplexLayout project_simplex(const Matrix& alpha,
                                     std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(alpha.rows());
  const int k = static_cast<int>(alpha.cols());
  if (k < 1) throw dimension_error("project_simplex: alpha has no columns");
  if (!alpha.allFinite())
    throw numeric_error("project_simplex: non-finite weights");
  for (int i = 0; i < n; ++i) {
    if (alpha.row(i).minCoeff() < -1e-6)
      throw domain_error("project_simplex: row " + std::to_string(i) +
                         " has a negative weight");
    if (std::abs(alpha.row(i).sum() - 1.0) > 1e-6)
      throw domain_error("project_simplex: row " + std::to_string(i) +
                         " does not sum to 1");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw dimension_error("project_simplex: label count does not match rows");

  SimplexLayout lay;
  lay.anchors = simplex_anchors(k);
  lay.points = alpha * lay.anchors;
  lay.color_labels = std::move(labels);
  for (int j = 0; j < k; ++j) lay.anchor_labels.push_back(std::to_string(j + 1));
  return lay;
}

struct VizOptions {
  double scale = 200.0;       // unit circle radius in user units
  double glyph_radius = 2.0;
  double glyph_opacity = 0.6;
  double margin = 0.05;       // viewBox padding, fraction of content extent
};

namespace detail {

inline const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> p = {
      "black",  "red",  "royalblue", "darkorange", "forestgreen",
      "purple", "teal", "saddlebrown", "deeppink",  "gray"};
  return p;
}

// distinct labels in first-appearance order
inline std::vector<std::string> label_order(const std::vector<std::string>& ls) {
  std::vector<std::string> order;
  for (const auto& l : ls)
    if (std::find(order.begin(), order.end(), l) == order.end())
      order.push_back(l);
  return order;
}

}  // namespace detail

// Scatter of the projected points inside the anchor polygon, colored by
// label. Default colors follow label appearance order (black, then red, ...);
// an explicit color map must cover every observed label.
inline std::string render_svg(const SimplexLayout& lay,
                              const std::map<std::string, std::string>& color_map = {},
                              const VizOptions& opts = {}) {
  const int k = static_cast<int>(lay.anchors.rows());
  const int n = static_cast<int>(lay.points.rows());
  if (k < 1) throw dimension_error("render_svg: layout has no anchors");
  if (!lay.color_labels.empty() &&
      static_cast<int>(lay.color_labels.size()) != n)
    throw dimension_error("render_svg: label count does not match points");
  if (static_cast<int>(lay.anchor_labels.size()) != k)
    throw dimension_error("render_svg: anchor label count does not match");

  const std::vector<std::string> order = detail::label_order(lay.color_labels);
  std::map<std::string, std::string> colors;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!color_map.empty()) {
      auto it = color_map.find(order[i]);
      if (it == color_map.end())
        throw config_error("render_svg: no color mapped for label '" +
                           order[i] + "'");
      colors[order[i]] = it->second;
    } else {
      const auto& pal = detail::default_palette();
      colors[order[i]] = pal[i % pal.size()];
    }
  }

  const double S = opts.scale;
  // svg y grows downward; flip the y axis
  auto X = [&](double wx) { return wx * S; };
  auto Y = [&](double wy) { return -wy * S; };

  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  bool first = true;
  auto grow = [&](double x, double y, double pad) {
    if (first) {
      lo_x = x - pad; hi_x = x + pad;
      lo_y = y - pad; hi_y = y + pad;
      first = false;
      return;
    }
    lo_x = std::min(lo_x, x - pad); hi_x = std::max(hi_x, x + pad);
    lo_y = std::min(lo_y, y - pad); hi_y = std::max(hi_y, y + pad);
  };

  const double font = 12.0;
  std::string glyphs, marks, legend, outline;

  // anchor polygon outline
  if (k >= 2) {
    outline += "  <polygon points=\"";
    for (int j = 0; j < k; ++j) {
      if (j) outline += ' ';
      outline += format_number(X(lay.anchors(j, 0))) + ',' +
                 format_number(Y(lay.anchors(j, 1)));
    }
    outline += "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }

  // anchor markers with their index labels just outside the circle
  for (int j = 0; j < k; ++j) {
    const double ax = X(lay.anchors(j, 0));
    const double ay = Y(lay.anchors(j, 1));
    grow(ax, ay, 4.0);
    marks += "  <circle cx=\"" + format_number(ax) + "\" cy=\"" +
             format_number(ay) + "\" r=\"4\" fill=\"#444444\"/>\n";
    const double lx = X(lay.anchors(j, 0) * 1.10);
    const double ly = Y(lay.anchors(j, 1) * 1.10);
    const std::string text = xml_escape(lay.anchor_labels[static_cast<std::size_t>(j)]);
    grow(lx, ly, font * (0.35 * static_cast<double>(text.size()) + 0.6));
    marks += "  <text x=\"" + format_number(lx) + "\" y=\"" +
             format_number(ly) +
             "\" font-family=\"sans-serif\" font-size=\"" + format_number(font) +
             "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" + text +
             "</text>\n";
  }

  // data glyphs
  for (int i = 0; i < n; ++i) {
    const double px = X(lay.points(i, 0));
    const double py = Y(lay.points(i, 1));
    grow(px, py, opts.glyph_radius);
    const std::string fill =
        lay.color_labels.empty()
            ? detail::default_palette()[0]
            : colors.at(lay.color_labels[static_cast<std::size_t>(i)]);
    glyphs += "  <circle cx=\"" + format_number(px) + "\" cy=\"" +
              format_number(py) + "\" r=\"" + format_number(opts.glyph_radius) +
              "\" fill=\"" + fill + "\" fill-opacity=\"" +
              format_number(opts.glyph_opacity) + "\"/>\n";
  }

  // legend to the right of the circle
  if (!order.empty()) {
    double ly = -S;
    const double lx = S * 1.25;
    for (const auto& label : order) {
      const std::string text = xml_escape(label);
      grow(lx, ly, 6.0);
      grow(lx + 12.0 + font * 0.62 * static_cast<double>(text.size()), ly,
           font);
      legend += "  <circle cx=\"" + format_number(lx) + "\" cy=\"" +
                format_number(ly) + "\" r=\"5\" fill=\"" + colors.at(label) +
                "\"/>\n";
      legend += "  <text x=\"" + format_number(lx + 12.0) + "\" y=\"" +
                format_number(ly) +
                "\" font-family=\"sans-serif\" font-size=\"" +
                format_number(font) +
                "\" dominant-baseline=\"middle\">" + text + "</text>\n";
      ly += font * 1.6;
    }
  }

  const double mx = (hi_x - lo_x) * opts.margin;
  const double my = (hi_y - lo_y) * opts.margin;
  const double pad = std::max({mx, my, 1.0});
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         format_number(lo_x - pad) + " " + format_number(lo_y - pad) + " " +
         format_number(hi_x - lo_x + 2 * pad) + " " +
         format_number(hi_y - lo_y + 2 * pad) + "\">\n";
  svg += outline + marks + glyphs + legend;
  svg += "</svg>\n";
  return svg;
}

}  // namespace nomarch
