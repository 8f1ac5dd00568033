#include "lobench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lobench/errors.hpp"

namespace lobench {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_chart(std::ostream& os, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series) {
  Range xr, yr;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (std::isfinite(x) && std::isfinite(y)) {
        xr.widen(x);
        yr.widen(y);
      }
    }
  xr.pad();
  yr.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * plot_h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << title << "</text>\n";

  // axes
  os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
     << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
     << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

  // ticks
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / ticks;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / ticks;
    const double gx = px(fx);
    const double gy = py(fy);
    os << "<line x1=\"" << gx << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << gx
       << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << gx << "\" y=\"" << kMarginTop + plot_h + 20
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fx)
       << "</text>\n";
    os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kMarginLeft
       << "\" y2=\"" << gy << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << gy + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fy)
       << "</text>\n";
  }

  os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\""
     << "rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
    std::ostringstream pts;
    for (const auto& [x, y] : series[s].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts << px(x) << ',' << py(y) << ' ';
    }
    if (series[s].points.size() > 1)
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
         << pts.str() << "\"/>\n";
    if (series[s].markers || series[s].points.size() == 1) {
      for (const auto& [x, y] : series[s].points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color
           << "\"/>\n";
      }
    }
    // legend
    const double ly = kMarginTop + 8 + 16.0 * static_cast<double>(s);
    os << "<line x1=\"" << kMarginLeft + plot_w - 130 << "\" y1=\"" << ly << "\" x2=\""
       << kMarginLeft + plot_w - 110 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kMarginLeft + plot_w - 104 << "\" y=\"" << ly + 4
       << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
}

void save_svg_chart(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<SvgSeries>& series) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::parse, "cannot write " + path);
  write_svg_chart(out, title, x_label, y_label, series);
}

}  // namespace lobench
