#include "snngbp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace snngbp {

std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# snngbp %s config=%016llx seed=%llu", kToolVersion,
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

namespace {

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi > lo ? hi - lo : 1.0; }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  constexpr double width = 720.0, height = 440.0;
  constexpr double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
  Extent ex, ey;
  for (const PlotSeries& s : series) {
    for (double v : s.x) ex.grow(v);
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      const double band = i < s.band_half_width.size() ? s.band_half_width[i] : 0.0;
      ey.grow(s.y[i] - band);
      ey.grow(s.y[i] + band);
    }
  }
  if (!std::isfinite(ex.lo)) {
    ex = {0.0, 1.0};
    ey = {0.0, 1.0};
  }
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double v) { return left + (v - ex.lo) / ex.span() * plot_w; };
  auto py = [&](double v) { return top + plot_h - (v - ey.lo) / ey.span() * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = ex.lo + ex.span() * tick / 4.0;
    const double fy = ey.lo + ey.span() * tick / 4.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(fx)
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(fx) << "</text>\n"
        << "<line x1=\"" << left - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << left
        << "\" y2=\"" << py(fy) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << y_label
      << "</text>\n";

  double legend_y = top + 14.0;
  for (const PlotSeries& s : series) {
    if (!s.band_half_width.empty() && s.x.size() == s.y.size()) {
      out << "<path d=\"M";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << (i == 0 ? "" : " L") << px(s.x[i]) << ' '
            << py(s.y[i] + s.band_half_width[i]);
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        out << " L" << px(s.x[i]) << ' ' << py(s.y[i] - s.band_half_width[i]);
      }
      out << " Z\" fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    if (s.points_only) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
            << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      }
    } else if (!s.x.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
      out << "\"/>\n";
    }
    out << "<rect x=\"" << left + plot_w - 150 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"4\" fill=\"" << s.color << "\"/>\n"
        << "<text x=\"" << left + plot_w - 132 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    legend_y += 16.0;
  }
  out << "</svg>\n";
}

}  // namespace snngbp
