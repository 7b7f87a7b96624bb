#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "fblpp/table.hpp"

namespace fblpp {

// Minimal self-contained SVG line chart: axes box, decade/linear ticks,
// one polyline per curve, legend.  No plotting dependency.
struct ChartSpec {
  std::string x_column;                 // column holding the x value
  std::vector<std::string> y_columns;   // one curve (per group) for each
  std::vector<std::string> group_by;    // extra columns splitting curves
  bool x_log = true;
  bool y_log = true;
  std::string title, x_label, y_label;
};

namespace detail {

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string fmt_pos(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string render_svg_chart(const Table& table, const ChartSpec& spec) {
  const int xi = table.column_index(spec.x_column);
  if (xi < 0) throw std::invalid_argument("chart: unknown x column " + spec.x_column);

  std::vector<detail::Curve> curves;
  for (const auto& ycol : spec.y_columns) {
    const int yi = table.column_index(ycol);
    if (yi < 0) throw std::invalid_argument("chart: unknown y column " + ycol);
    std::vector<int> gi;
    for (const auto& g : spec.group_by) {
      const int idx = table.column_index(g);
      if (idx >= 0) gi.push_back(idx);
    }
    std::map<std::string, detail::Curve> grouped;
    for (const auto& row : table.rows) {
      std::string key;
      for (int g : gi) key += table.columns[static_cast<size_t>(g)] + "=" + row[static_cast<size_t>(g)] + " ";
      auto& curve = grouped[key];
      if (curve.label.empty()) curve.label = spec.y_columns.size() > 1 || key.empty() ? ycol + " " + key : key;
      const double x = std::strtod(row[static_cast<size_t>(xi)].c_str(), nullptr);
      const double y = std::strtod(row[static_cast<size_t>(yi)].c_str(), nullptr);
      if ((spec.x_log && !(x > 0.0)) || (spec.y_log && !(y > 0.0))) continue;
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      curve.points.emplace_back(x, y);
    }
    for (auto& [key, curve] : grouped)
      if (!curve.points.empty()) curves.push_back(curve);
  }
  if (curves.empty()) throw std::invalid_argument("chart: no plottable points");

  auto tx = [&](double v) { return spec.x_log ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.y_log ? std::log10(v) : v; };
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& c : curves)
    for (const auto& [x, y] : c.points) {
      x_min = std::min(x_min, tx(x));
      x_max = std::max(x_max, tx(x));
      y_min = std::min(y_min, ty(y));
      y_max = std::max(y_max, ty(y));
    }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 800, height = 560;
  const double ml = 80, mr = 180, mt = 50, mb = 60;
  auto px = [&](double v) { return ml + (tx(v) - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double v) { return height - mb - (ty(v) - y_min) / (y_max - y_min) * (height - mt - mb); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + detail::fmt_pos(ml) + "\" y=\"" + detail::fmt_pos(mt) + "\" width=\"" +
         detail::fmt_pos(width - ml - mr) + "\" height=\"" + detail::fmt_pos(height - mt - mb) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!spec.title.empty())
    svg += "<text x=\"" + detail::fmt_pos((ml + width - mr) / 2) +
           "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" + spec.title + "</text>\n";

  // ticks: decades for log axes, 6 even steps for linear
  auto emit_x_tick = [&](double v) {
    const double x = px(v);
    svg += "<line x1=\"" + detail::fmt_pos(x) + "\" y1=\"" + detail::fmt_pos(height - mb) +
           "\" x2=\"" + detail::fmt_pos(x) + "\" y2=\"" + detail::fmt_pos(height - mb + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt_pos(x) + "\" y=\"" + detail::fmt_pos(height - mb + 18) +
           "\" text-anchor=\"middle\">" + detail::fmt_tick(v) + "</text>\n";
  };
  auto emit_y_tick = [&](double v) {
    const double y = py(v);
    svg += "<line x1=\"" + detail::fmt_pos(ml - 5) + "\" y1=\"" + detail::fmt_pos(y) + "\" x2=\"" +
           detail::fmt_pos(ml) + "\" y2=\"" + detail::fmt_pos(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt_pos(ml - 8) + "\" y=\"" + detail::fmt_pos(y + 4) +
           "\" text-anchor=\"end\">" + detail::fmt_tick(v) + "</text>\n";
  };
  if (spec.x_log) {
    for (int e = static_cast<int>(std::ceil(x_min)); e <= static_cast<int>(std::floor(x_max)); ++e)
      emit_x_tick(std::pow(10.0, e));
  } else {
    for (int i = 0; i <= 6; ++i) emit_x_tick(x_min + (x_max - x_min) * i / 6.0);
  }
  if (spec.y_log) {
    for (int e = static_cast<int>(std::ceil(y_min)); e <= static_cast<int>(std::floor(y_max)); ++e)
      emit_y_tick(std::pow(10.0, e));
  } else {
    for (int i = 0; i <= 6; ++i) emit_y_tick(y_min + (y_max - y_min) * i / 6.0);
  }
  if (!spec.x_label.empty())
    svg += "<text x=\"" + detail::fmt_pos((ml + width - mr) / 2) + "\" y=\"" +
           detail::fmt_pos(height - 15) + "\" text-anchor=\"middle\">" + spec.x_label + "</text>\n";
  if (!spec.y_label.empty())
    svg += "<text x=\"20\" y=\"" + detail::fmt_pos((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           detail::fmt_pos((mt + height - mb) / 2) + ")\">" + spec.y_label + "</text>\n";

  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& curve = curves[ci];
    const char* color = detail::kPalette[ci % 8];
    std::string pts;
    for (const auto& [x, y] : curve.points) pts += detail::fmt_pos(px(x)) + "," + detail::fmt_pos(py(y)) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    const double ly = mt + 18.0 * static_cast<double>(ci) + 10.0;
    svg += "<line x1=\"" + detail::fmt_pos(width - mr + 10) + "\" y1=\"" + detail::fmt_pos(ly) +
           "\" x2=\"" + detail::fmt_pos(width - mr + 30) + "\" y2=\"" + detail::fmt_pos(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + detail::fmt_pos(width - mr + 35) + "\" y=\"" + detail::fmt_pos(ly + 4) +
           "\">" + curve.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fblpp
