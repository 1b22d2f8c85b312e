// Overlaid empirical-CDF step plots as standalone SVG.
//
// Output is byte-deterministic for fixed inputs: fixed canvas, fixed
// palette, fixed-precision number formatting, no timestamps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plancklab/empirical.hpp"

namespace plancklab {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

inline void emit_plot(const std::vector<EmpiricalDistribution>& dists,
                      const std::string& path) {
  if (dists.empty()) throw std::invalid_argument("emit_plot: need at least one distribution");
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
  const int width = 720, height = 480;
  const int ml = 70, mr = 20, mt = 20, mb = 50;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  double lo = dists.front().min(), hi = dists.front().max();
  for (const auto& d : dists) {
    lo = std::min(lo, d.min());
    hi = std::max(hi, d.max());
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.03 * (hi - lo);
  lo -= pad;
  hi += pad;

  const auto px = [&](double t) { return ml + plot_w * (t - lo) / (hi - lo); };
  const auto py = [&](double f) { return mt + plot_h * (1.0 - f); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
      << "\" y2=\"" << mt + plot_h << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + plot_h << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = lo + (hi - lo) * i / 5.0;
    const double f = i / 5.0;
    out << "<line x1=\"" << detail::fmt(px(t)) << "\" y1=\"" << mt + plot_h << "\" x2=\""
        << detail::fmt(px(t)) << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << detail::fmt(px(t)) << "\" y=\"" << mt + plot_h + 20
        << "\" text-anchor=\"middle\">" << detail::fmt_label(t) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::fmt(py(f)) << "\" x2=\"" << ml
        << "\" y2=\"" << detail::fmt(py(f)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 10 << "\" y=\"" << detail::fmt(py(f) + 4)
        << "\" text-anchor=\"end\">" << detail::fmt_label(f) << "</text>\n";
  }
  out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">value</text>\n";
  out << "<text x=\"18\" y=\"" << mt + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + plot_h / 2
      << ")\">empirical CDF</text>\n";
  out << "</g>\n";

  for (std::size_t d = 0; d < dists.size(); ++d) {
    const auto& s = dists[d].samples();
    const double n = static_cast<double>(s.size());
    const std::size_t stride = std::max<std::size_t>(1, s.size() / 2000);
    std::string points;
    points += detail::fmt(px(lo)) + "," + detail::fmt(py(0.0)) + " ";
    for (std::size_t i = 0; i < s.size(); i += stride) {
      const double f0 = static_cast<double>(i) / n;
      const double f1 = static_cast<double>(std::min(i + stride, s.size())) / n;
      points += detail::fmt(px(s[i])) + "," + detail::fmt(py(f0)) + " ";
      points += detail::fmt(px(s[i])) + "," + detail::fmt(py(f1)) + " ";
    }
    points += detail::fmt(px(s.back())) + "," + detail::fmt(py(1.0));
    const char* color = kPalette[d % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << points << "\"/>\n";
    const std::string label =
        dists[d].provenance().label.empty() ? ("series " + std::to_string(d + 1))
                                            : dists[d].provenance().label;
    out << "<g font-family=\"sans-serif\" font-size=\"12\">"
        << "<line x1=\"" << ml + 10 << "\" y1=\"" << mt + 14 + 16 * static_cast<int>(d)
        << "\" x2=\"" << ml + 34 << "\" y2=\"" << mt + 14 + 16 * static_cast<int>(d)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>"
        << "<text x=\"" << ml + 40 << "\" y=\"" << mt + 18 + 16 * static_cast<int>(d)
        << "\">" << label << "</text></g>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("emit_plot: write failed for " + path);
}

}  // namespace plancklab
