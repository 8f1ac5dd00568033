#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lobench {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool markers = false;  // draw point markers in addition to the polyline
};

/// Minimal dependency-free polyline chart: axes, ticks, labels, legend.
/// CSV files remain the canonical output; this is for quick visual checks.
void write_svg_chart(std::ostream& os, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series);

void save_svg_chart(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace lobench
