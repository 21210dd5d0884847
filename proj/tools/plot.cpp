#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "rtquad/csv.hpp"

namespace rtquad::plot {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double margin_left = 70.0;
constexpr double margin_right = 170.0;
constexpr double margin_top = 40.0;
constexpr double margin_bottom = 50.0;
constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#7f7f7f"};

std::string fixed(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    return format_double(r == 0.0 ? 0.0 : r);
}

} // namespace

void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (!(x_min < x_max)) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if (!(y_min < y_max)) {
        y_min -= 1.0;
        y_max += 1.0;
    }
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;
    auto px = [&](double x) { return margin_left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return margin_top + (y_max - y) / (y_max - y_min) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_min + (x_max - x_min) * k / 4.0;
        const double yv = y_min + (y_max - y_min) * k / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << height - margin_bottom + 16
            << "\" text-anchor=\"middle\">" << fixed(xv) << "</text>\n";
        out << "<text x=\"" << margin_left - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\">" << fixed(yv) << "</text>\n";
    }
    out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << margin_top + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << margin_top + plot_h / 2
        << ")\">" << y_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % palette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            }
        }
        out << "\"/>\n";
        const double ly = margin_top + 16.0 * static_cast<double>(k + 1);
        const double lx = width - margin_right + 12.0;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 20 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n";
        out << "<text x=\"" << lx + 26 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

void write_columns(std::ostream& out, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns) {
    out << '#';
    for (const auto& n : names) {
        out << ' ' << n;
    }
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << (c ? " " : "") << format_double(columns[c][r]);
        }
        out << '\n';
    }
}

} // namespace rtquad::plot
