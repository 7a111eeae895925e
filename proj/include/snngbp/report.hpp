// CSV provenance and static SVG plot rendering for the CLI outputs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace snngbp {

inline constexpr const char* kToolVersion = "0.1.0";

/// First line of every CSV the CLI emits: tool version, config hash, seed.
std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed);

/// Fixed-format double rendering shared by all CSV writers.
std::string csv_number(double value);

/// One polyline (or point series) of a plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band_half_width;  // optional +-band around y
  std::string color = "#1f6fb2";
  bool points_only = false;
};

/// Render a static line plot (axes, ticks, legend) as an SVG document.
void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace snngbp
