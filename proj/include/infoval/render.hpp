#pragma once

#include "infoval/acquisition.hpp"
#include "infoval/decision.hpp"
#include "infoval/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>
#include <utility>

namespace infoval {

namespace renderdetail {

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                 "#b07aa1", "#76b7b2", "#edc948", "#9c755f"};
  return colors[i % 8];
}

/// Kink positions of a two-state value function in the state-2 probability.
inline std::vector<double> breakpoints(const DecisionProblem<double>& d) {
  std::vector<double> xs{0.0, 1.0};
  for (const auto& cell : subdivision(d).cells)
    for (const auto& v : cell.region.vertices()) xs.push_back(v.p[1]);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());
  return xs;
}

}  // namespace renderdetail

/// CSV of the two-state value function sampled on a regular mesh, with the
/// exact kink locations merged in.
inline std::string value_curve_csv(const DecisionProblem<double>& d,
                                   std::size_t samples = 200) {
  if (d.num_states != 2)
    throw input_error("value curves are a two-state rendering");
  std::vector<double> xs = renderdetail::breakpoints(d);
  for (std::size_t i = 0; i <= samples; ++i)
    xs.push_back(static_cast<double>(i) / samples);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());
  std::ostringstream out;
  out << "belief_state2,value\n";
  for (double x : xs)
    out << renderdetail::num(x) << ','
        << renderdetail::num(value_at(d, {1.0 - x, x})) << '\n';
  return out.str();
}

/// CSV of value, cost potential, and their difference, the acquisition
/// objective before concavification.
inline std::string objective_curve_csv(const DecisionProblem<double>& d,
                                       const UPSCost<double>& cost,
                                       std::size_t samples = 200) {
  if (d.num_states != 2)
    throw input_error("objective curves are a two-state rendering");
  std::ostringstream out;
  out << "belief_state2,value,cost_potential,objective\n";
  for (std::size_t i = 0; i <= samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    const std::vector<double> mu{1.0 - x, x};
    const double v = value_at(d, mu);
    const double c = eval_potential(cost, mu);
    out << renderdetail::num(x) << ',' << renderdetail::num(v) << ','
        << renderdetail::num(c) << ',' << renderdetail::num(v - c) << '\n';
  }
  return out.str();
}

/// SVG graph of a two-state value function: a polyline through its kinks.
inline std::string value_function_svg(const DecisionProblem<double>& d) {
  if (d.num_states != 2)
    throw input_error("value-function figures are a two-state rendering");
  const auto xs = renderdetail::breakpoints(d);
  std::vector<double> ys;
  ys.reserve(xs.size());
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ys.push_back(value_at(d, {1.0 - xs[i], xs[i]}));
    if (i == 0) lo = hi = ys[0];
    lo = std::min(lo, ys[i]);
    hi = std::max(hi, ys[i]);
  }
  if (hi <= lo) hi = lo + 1;

  const double width = 640, height = 400, margin = 50;
  auto px = [&](double x) { return margin + x * (width - 2 * margin); };
  auto py = [&](double y) {
    return height - margin - (y - lo) / (hi - lo) * (height - 2 * margin);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
  svg << "  <line x1=\"" << renderdetail::coord(px(0)) << "\" y1=\""
      << renderdetail::coord(py(lo)) << "\" x2=\"" << renderdetail::coord(px(1))
      << "\" y2=\"" << renderdetail::coord(py(lo))
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "  <line x1=\"" << renderdetail::coord(px(0)) << "\" y1=\""
      << renderdetail::coord(py(lo)) << "\" x2=\"" << renderdetail::coord(px(0))
      << "\" y2=\"" << renderdetail::coord(py(hi))
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "  <polyline fill=\"none\" stroke=\"#4e79a7\" stroke-width=\"2\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) svg << ' ';
    svg << renderdetail::coord(px(xs[i])) << ',' << renderdetail::coord(py(ys[i]));
  }
  svg << "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    svg << "  <circle cx=\"" << renderdetail::coord(px(xs[i])) << "\" cy=\""
        << renderdetail::coord(py(ys[i]))
        << "\" r=\"3\" fill=\"#e15759\"/>\n";
  svg << "  <text x=\"" << renderdetail::coord(px(0)) << "\" y=\""
      << renderdetail::coord(height - margin + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n";
  svg << "  <text x=\"" << renderdetail::coord(px(1)) << "\" y=\""
      << renderdetail::coord(height - margin + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\">1</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

/// SVG of a three-state subdivision: cells drawn inside the belief triangle
/// with state-1, state-2, and state-3 vertices at the corners.
inline std::string subdivision_svg(const Subdivision<double>& sub) {
  if (sub.num_states != 3)
    throw input_error("subdivision figures are a three-state rendering");
  const double ax = 80, ay = 430;    // state 1
  const double bx = 560, by = 430;   // state 2
  const double cx = 320, cy = 14.3;  // state 3
  auto px = [&](const std::vector<double>& mu) {
    return mu[0] * ax + mu[1] * bx + mu[2] * cx;
  };
  auto py = [&](const std::vector<double>& mu) {
    return mu[0] * ay + mu[1] * by + mu[2] * cy;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < sub.cells.size(); ++i) {
    const auto& cell = sub.cells[i];
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : cell.region.vertices())
      pts.emplace_back(px(v.p), py(v.p));
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x / pts.size();
      my += y / pts.size();
    }
    std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
      return std::atan2(a.second - my, a.first - mx) <
             std::atan2(b.second - my, b.first - mx);
    });
    svg << "  <polygon fill=\"" << renderdetail::palette(i)
        << "\" fill-opacity=\"0.45\" stroke=\"#333333\" stroke-width=\"1\" "
           "points=\"";
    for (std::size_t v = 0; v < pts.size(); ++v) {
      if (v) svg << ' ';
      svg << renderdetail::coord(pts[v].first) << ','
          << renderdetail::coord(pts[v].second);
    }
    svg << "\"/>\n";
    const auto center = cell.region.interior_point();
    std::string label;
    for (const auto& l : cell.labels) {
      if (!label.empty()) label += "+";
      label += l;
    }
    svg << "  <text x=\"" << renderdetail::coord(px(center)) << "\" y=\""
        << renderdetail::coord(py(center))
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">"
        << label << "</text>\n";
  }
  svg << "  <polygon fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" "
         "points=\""
      << renderdetail::coord(ax) << ',' << renderdetail::coord(ay) << ' '
      << renderdetail::coord(bx) << ',' << renderdetail::coord(by) << ' '
      << renderdetail::coord(cx) << ',' << renderdetail::coord(cy) << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace infoval
