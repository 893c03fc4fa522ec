// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/svg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace density_lab::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi == lo) lo -= 0.5, hi += 0.5;
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

}  // namespace

std::string sig4(double value) { return fmt::format("{:.4g}", value); }

std::string render(const Plot& plot) {
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  Range xr, yr;
  for (const auto& s : plot.series) {
    for (const auto& [x, y] : s.points) {
      if (plot.log_y && !(y > 0.0)) continue;
      xr.add(x);
      yr.add(ty(y));
    }
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) {
    return kTop + ph - (ty(y) - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      kWidth, kHeight);
  out += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\">{}</text>\n",
                     num(kLeft), escape(plot.title));

  // Axes.
  out += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      num(kLeft), num(kTop + ph), num(kLeft + pw), num(kTop));

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    std::string label = sig4(xv);
    if (plot.date_axis) {
      const Date d = plot.date_axis->reference_date.plus_days(
          static_cast<std::int64_t>(std::llround(xv)));
      label = d.iso().substr(0, 7);
    }
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>"
        "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
        num(sx(xv)), num(kTop + ph), num(kTop + ph + 5), num(kTop + ph + 20),
        escape(label));
    const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    const double shown = plot.log_y ? std::pow(10.0, yv) : yv;
    const double py = kTop + ph - (yv - yr.lo) / (yr.hi - yr.lo) * ph;
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>"
        "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
        num(kLeft - 5), num(kLeft), num(py), num(kLeft - 8), num(py + 4),
        sig4(shown));
  }
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
      num(kLeft + pw / 2), num(kHeight - 15), escape(plot.x_label));
  out += fmt::format(
      "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 20 {0})\">{1}</text>\n",
      num(kTop + ph / 2), escape(plot.y_label + (plot.log_y ? " (log)" : "")));

  for (const auto& s : plot.series) {
    std::string d;
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (plot.log_y && !(y > 0.0)) continue;
      const double px = sx(x), py = sy(y);
      if (s.style == Style::kLine) {
        d += fmt::format("{}{} {} ", first ? "M" : "L", num(px), num(py));
      } else {
        const double r = s.marker_radius;
        d += fmt::format("M{} {} a{} {} 0 1 0 {} 0 a{} {} 0 1 0 {} 0 ",
                         num(px - r), num(py), num(r), num(r), num(2 * r),
                         num(r), num(r), num(-2 * r));
      }
      first = false;
    }
    if (!d.empty()) d.pop_back();
    if (s.style == Style::kLine) {
      out += fmt::format(
          "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\">"
          "<title>{}</title></path>\n",
          d, s.color, escape(s.name));
    } else {
      out += fmt::format(
          "<path d=\"{}\" fill=\"{}\" fill-opacity=\"0.75\" stroke=\"none\">"
          "<title>{}</title></path>\n",
          d, s.color, escape(s.name));
    }
  }

  // Legend.
  double ly = kTop + 10;
  for (const auto& s : plot.series) {
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>"
        "<text x=\"{}\" y=\"{}\">{}</text>\n",
        num(kLeft + pw + 15), num(ly), s.color, num(kLeft + pw + 32),
        num(ly + 10), escape(s.name));
    ly += 20;
  }
  double ay = kTop + 16;
  for (const auto& a : plot.annotations) {
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(kLeft + 10),
                       num(ay), escape(a));
    ay += 16;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace density_lab::svg
