#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtquad::plot {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

// Minimal line chart; non-finite points are skipped.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series);

// Whitespace-separated columns with a '#' header line, one row per x value.
void write_columns(std::ostream& out, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns);

} // namespace rtquad::plot
