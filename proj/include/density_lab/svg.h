// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "density_lab/date.h"

namespace density_lab::svg {

enum class Style { kMarkers, kLine };

/// One plotted series; rendered as exactly one <path> element.
struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
  Style style = Style::kMarkers;
  std::string color = "#1f77b4";
  double marker_radius = 3.0;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  /// When set, x values are days since this epoch and ticks show YYYY-MM.
  std::optional<Epoch> date_axis;
  std::vector<Series> series;
  std::vector<std::string> annotations;  // one text line each, top-left
};

/// Self-contained SVG document. Axes, ticks and legend use <line>, <rect>
/// and <text>, so <path> elements correspond one-to-one with `series`.
std::string render(const Plot& plot);

/// Four significant digits, as used for all numeric annotations.
std::string sig4(double value);

}  // namespace density_lab::svg
