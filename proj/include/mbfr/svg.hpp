#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "mbfr/errors.hpp"
#include "mbfr/filter.hpp"
#include "mbfr/morisita.hpp"

namespace mbfr {

namespace detail {

inline std::string svg_header(int w, int h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
     << "\">\n<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"white\"/>\n";
  return os.str();
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace detail

// Dissimilarity profile: one point per SFS step, a dashed horizontal line
// at M_2(Y) and the knee suggestion.
inline void emit_profile_svg(const SelectionTrace& trace,
                             const std::string& path) {
  if (trace.steps.empty()) throw DataError("emit_profile_svg: empty trace");
  const int width = 720, height = 440;
  const int ml = 70, mr = 30, mt = 40, mb = 70;
  const int pw = width - ml - mr, ph = height - mt - mb;

  double y_max = trace.target_id;
  double y_min = 0.0;
  for (const auto& s : trace.steps) {
    y_max = std::max(y_max, s.diss);
    y_min = std::min(y_min, s.diss);
  }
  double span = std::max(y_max - y_min, 1e-9);
  y_max += 0.1 * span;
  y_min -= 0.1 * span;
  span = y_max - y_min;

  auto sx = [&](std::size_t step) {
    double denom = std::max<std::size_t>(trace.steps.size() - 1, 1);
    return ml + static_cast<double>(step) / static_cast<double>(denom) * pw;
  };
  auto sy = [&](double v) { return mt + (y_max - v) / span * ph; };

  std::ostringstream os;
  os << detail::svg_header(width, height);
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";

  // Reference line at the target ID.
  os << "<line x1=\"" << ml << "\" y1=\"" << sy(trace.target_id) << "\" x2=\""
     << ml + pw << "\" y2=\"" << sy(trace.target_id)
     << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  os << "<text x=\"" << ml + pw - 4 << "\" y=\"" << sy(trace.target_id) - 6
     << "\" font-size=\"12\" text-anchor=\"end\" fill=\"gray\">M2(Y) = "
     << detail::fmt(trace.target_id) << "</text>\n";

  // Profile polyline and points.
  if (trace.steps.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" "
          "points=\"";
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
      os << sx(i) << "," << sy(trace.steps[i].diss) << " ";
    os << "\"/>\n";
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    os << "<circle cx=\"" << sx(i) << "\" cy=\"" << sy(trace.steps[i].diss)
       << "\" r=\"4\" fill=\"#c0392b\"/>\n";
    os << "<text x=\"" << sx(i) << "\" y=\"" << mt + ph + 18
       << "\" font-size=\"12\" text-anchor=\"middle\">"
       << trace.steps[i].feature << "</text>\n";
  }

  int knee = knee_step(trace);
  os << "<line x1=\"" << sx(static_cast<std::size_t>(knee - 1)) << "\" y1=\""
     << mt << "\" x2=\"" << sx(static_cast<std::size_t>(knee - 1))
     << "\" y2=\"" << mt + ph
     << "\" stroke=\"#2980b9\" stroke-dasharray=\"3,3\"/>\n";
  os << "<text x=\"" << sx(static_cast<std::size_t>(knee - 1)) + 4 << "\" y=\""
     << mt + 14
     << "\" font-size=\"12\" fill=\"#2980b9\">suggested cut-off</text>\n";

  os << "<text x=\"" << ml / 4 << "\" y=\"" << mt + ph / 2
     << "\" font-size=\"12\" transform=\"rotate(-90 " << ml / 4 << " "
     << mt + ph / 2 << ")\" text-anchor=\"middle\">dissimilarity</text>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 16
     << "\" font-size=\"12\" text-anchor=\"middle\">selected feature"
        " (SFS order)</text>\n";
  os << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << os.str();
}

// Log-log diagnostic of one ID estimate: the probe points and the fitted
// regression line.
inline void emit_loglog_svg(const IdEstimate& est, const std::string& path) {
  if (est.points.size() < 2) throw DataError("emit_loglog_svg: too few points");
  const int width = 640, height = 420;
  const int ml = 70, mr = 30, mt = 30, mb = 60;
  const int pw = width - ml - mr, ph = height - mt - mb;

  double x_min = est.points.front().first, x_max = x_min;
  double y_min = est.points.front().second, y_max = y_min;
  for (const auto& [x, y] : est.points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  double xs = std::max(x_max - x_min, 1e-9), ys = std::max(y_max - y_min, 1e-9);
  y_min -= 0.1 * ys;
  y_max += 0.1 * ys;
  ys = y_max - y_min;
  auto px = [&](double x) { return ml + (x - x_min) / xs * pw; };
  auto py = [&](double y) { return mt + (y_max - y) / ys * ph; };

  // Line through the first point with the fitted slope.
  double x0 = est.points.front().first, y0 = est.points.front().second;
  double yl = y0 + est.slope * (x_min - x0);
  double yr = y0 + est.slope * (x_max - x0);

  std::ostringstream os;
  os << detail::svg_header(width, height);
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(x_min) << "\" y1=\"" << py(yl) << "\" x2=\""
     << px(x_max) << "\" y2=\"" << py(yr)
     << "\" stroke=\"#2980b9\" stroke-width=\"1.5\"/>\n";
  for (const auto& [x, y] : est.points)
    os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
       << "\" r=\"3.5\" fill=\"#c0392b\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
     << "\" font-size=\"12\" text-anchor=\"middle\">log(1/l)</text>\n";
  os << "<text x=\"" << ml / 4 << "\" y=\"" << mt + ph / 2
     << "\" font-size=\"12\" transform=\"rotate(-90 " << ml / 4 << " "
     << mt + ph / 2 << ")\" text-anchor=\"middle\">log I</text>\n";
  os << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16
     << "\" font-size=\"12\">slope = " << detail::fmt(est.slope)
     << ", M" << est.m << " = " << detail::fmt(est.intrinsic_dim)
     << "</text>\n";
  os << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << os.str();
}

}  // namespace mbfr
