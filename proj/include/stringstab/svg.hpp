#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stringstab {

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    bool log_x = false;  ///< positive x values only; others are skipped
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 840;
    int height = 520;
};

/// Minimal standalone SVG line chart, one polyline per series. Deterministic
/// output for identical input. Throws std::invalid_argument when no series
/// contains a drawable point.
void write_svg_lines(std::ostream& out, const std::vector<SvgSeries>& series,
                     const SvgOptions& options);

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& options);

}  // namespace stringstab
