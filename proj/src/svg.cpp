#include "stringstab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace stringstab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};
constexpr int kPaletteSize = 10;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg_lines(std::ostream& out, const std::vector<SvgSeries>& series,
                     const SvgOptions& options) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    bool any_point = false;
    for (const auto& s : series) {
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            double x = s.x[k];
            if (options.log_x) {
                if (!(x > 0.0)) continue;
                x = std::log10(x);
            }
            if (!std::isfinite(x) || !std::isfinite(s.y[k])) continue;
            any_point = true;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, s.y[k]);
            y_max = std::max(y_max, s.y[k]);
        }
    }
    if (!any_point) {
        throw std::invalid_argument("write_svg_lines: no drawable points");
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double margin_left = 72.0;
    const double margin_right = 16.0;
    const double margin_top = options.title.empty() ? 16.0 : 36.0;
    const double margin_bottom = 48.0;
    const double plot_w = options.width - margin_left - margin_right;
    const double plot_h = options.height - margin_top - margin_bottom;

    auto map_x = [&](double x) { return margin_left + plot_w * (x - x_min) / (x_max - x_min); };
    auto map_y = [&](double y) {
        return margin_top + plot_h * (1.0 - (y - y_min) / (y_max - y_min));
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << " " << options.height
        << "\">\n";
    out << "<rect width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << fmt2(margin_left) << "\" y=\"" << fmt2(margin_top) << "\" width=\""
        << fmt2(plot_w) << "\" height=\"" << fmt2(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    if (!options.title.empty()) {
        out << "<text x=\"" << fmt2(options.width / 2.0)
            << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
            << escape(options.title) << "</text>\n";
    }

    constexpr int kTicks = 5;
    for (int k = 0; k < kTicks; ++k) {
        const double frac = static_cast<double>(k) / (kTicks - 1);
        const double xv = x_min + frac * (x_max - x_min);
        const double yv = y_min + frac * (y_max - y_min);
        const double px = map_x(xv);
        const double py = map_y(yv);
        out << "<line x1=\"" << fmt2(px) << "\" y1=\"" << fmt2(margin_top + plot_h) << "\" x2=\""
            << fmt2(px) << "\" y2=\"" << fmt2(margin_top + plot_h + 5) << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << fmt2(px) << "\" y=\"" << fmt2(margin_top + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(options.log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
        out << "<line x1=\"" << fmt2(margin_left - 5) << "\" y1=\"" << fmt2(py) << "\" x2=\""
            << fmt2(margin_left) << "\" y2=\"" << fmt2(py) << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << fmt2(margin_left - 8) << "\" y=\"" << fmt2(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
            << "</text>\n";
    }

    if (!options.x_label.empty()) {
        out << "<text x=\"" << fmt2(margin_left + plot_w / 2.0) << "\" y=\""
            << fmt2(options.height - 10.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
            << escape(options.x_label) << "</text>\n";
    }
    if (!options.y_label.empty()) {
        out << "<text x=\"18\" y=\"" << fmt2(margin_top + plot_h / 2.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "transform=\"rotate(-90 18 "
            << fmt2(margin_top + plot_h / 2.0) << ")\">" << escape(options.y_label) << "</text>\n";
    }

    int color_index = 0;
    for (const auto& s : series) {
        std::string points;
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            double x = s.x[k];
            if (options.log_x) {
                if (!(x > 0.0)) continue;
                x = std::log10(x);
            }
            if (!std::isfinite(x) || !std::isfinite(s.y[k])) continue;
            points += fmt2(map_x(x));
            points += ',';
            points += fmt2(map_y(s.y[k]));
            points += ' ';
        }
        if (points.empty()) continue;
        points.pop_back();
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[color_index % kPaletteSize]
            << "\" stroke-width=\"1.3\" points=\"" << points << "\"/>\n";
        ++color_index;
    }

    // Legend only when it stays readable.
    if (series.size() <= 6) {
        double ly = margin_top + 14.0;
        int idx = 0;
        for (const auto& s : series) {
            if (s.name.empty()) {
                ++idx;
                continue;
            }
            const double lx = margin_left + plot_w - 150.0;
            out << "<line x1=\"" << fmt2(lx) << "\" y1=\"" << fmt2(ly - 4) << "\" x2=\""
                << fmt2(lx + 24) << "\" y2=\"" << fmt2(ly - 4) << "\" stroke=\""
                << kPalette[idx % kPaletteSize] << "\" stroke-width=\"1.3\"/>\n";
            out << "<text x=\"" << fmt2(lx + 30) << "\" y=\"" << fmt2(ly)
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name)
                << "</text>\n";
            ly += 16.0;
            ++idx;
        }
    }

    out << "</svg>\n";
}

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_svg_lines: cannot open " + path);
    }
    write_svg_lines(out, series, options);
    if (!out) {
        throw std::runtime_error("write_svg_lines: write failed for " + path);
    }
}

}  // namespace stringstab
