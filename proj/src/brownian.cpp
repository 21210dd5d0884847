#include "rtquad/brownian.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rtquad/csv.hpp"

namespace rtquad {

double BrownianPath::grid_time(std::size_t j) const {
    return j == cells() ? total_time : static_cast<double>(j) * fine_step;
}

void BrownianPath::validate() const {
    if (grid.size() != offsets.size() + 1 || mid_values.size() != offsets.size() ||
        offsets.empty()) {
        throw std::invalid_argument("brownian path: inconsistent array sizes");
    }
    if (grid.front() != 0.0) {
        throw std::invalid_argument("brownian path: B(0) must be 0");
    }
    if (!(fine_step > 0.0) || !(total_time > 0.0)) {
        throw std::invalid_argument("brownian path: non-positive step or horizon");
    }
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        if (!(offsets[j] > 0.0 && offsets[j] < 1.0)) {
            throw std::invalid_argument("brownian path: offset " + std::to_string(j) +
                                        " outside (0, 1)");
        }
    }
}

int offset_bits(std::size_t cells) {
    return std::max(1, 53 - static_cast<int>(std::bit_width(cells)));
}

namespace {

std::size_t fine_cell_count(double total_time, double fine_step) {
    if (!(fine_step > 0.0) || !std::isfinite(fine_step)) {
        throw std::invalid_argument("brownian path: h_ref must be positive");
    }
    if (!(total_time > 0.0) || !std::isfinite(total_time)) {
        throw std::invalid_argument("brownian path: T must be positive");
    }
    if (fine_step > total_time) {
        throw std::invalid_argument("brownian path: h_ref exceeds T");
    }
    const double ratio = total_time / fine_step;
    const double cells = std::round(ratio);
    if (std::abs(cells - ratio) > 1e-9 * ratio) {
        throw std::invalid_argument("brownian path: h_ref does not divide T");
    }
    return static_cast<std::size_t>(cells);
}

double bridge_draw(double left_value, double right_value, double fraction, double span,
                   RngStream& stream) {
    const double mean = (1.0 - fraction) * left_value + fraction * right_value;
    const double variance = fraction * (1.0 - fraction) * span;
    return mean + std::sqrt(variance) * stream.standard_normal();
}

} // namespace

BrownianPath bridge_fill(std::vector<double> grid, std::vector<double> offsets, double total_time,
                         RngStream& stream) {
    BrownianPath path;
    path.total_time = total_time;
    path.fine_step = total_time / static_cast<double>(offsets.size());
    path.grid = std::move(grid);
    path.offsets = std::move(offsets);
    path.mid_values.assign(path.offsets.size(), 0.0);
    if (path.grid.size() != path.offsets.size() + 1) {
        throw std::invalid_argument("bridge_fill: grid must have one more value than offsets");
    }
    for (std::size_t j = 0; j < path.offsets.size(); ++j) {
        path.mid_values[j] = bridge_draw(path.grid[j], path.grid[j + 1], path.offsets[j],
                                         path.fine_step, stream);
    }
    path.validate();
    return path;
}

BrownianPath sample_brownian_path(RngStream& stream, double total_time, double fine_step) {
    const std::size_t cells = fine_cell_count(total_time, fine_step);
    const double h_ref = total_time / static_cast<double>(cells);
    const double scale = std::sqrt(h_ref);

    std::vector<double> grid(cells + 1, 0.0);
    for (std::size_t j = 0; j < cells; ++j) {
        grid[j + 1] = grid[j] + scale * stream.standard_normal();
    }
    const int bits = offset_bits(cells);
    std::vector<double> offsets(cells);
    for (auto& tau : offsets) {
        tau = stream.uniform_dyadic(bits);
    }
    return bridge_fill(std::move(grid), std::move(offsets), total_time, stream);
}

std::size_t CoarseTau::mirror_exact_count() const {
    return static_cast<std::size_t>(std::count(mirror_is_exact.begin(), mirror_is_exact.end(), 1));
}

CoarseTau coarsen_tau(const BrownianPath& path, double coarse_step, RngStream& stream) {
    path.validate();
    const double ratio = coarse_step / path.fine_step;
    const double rounded = std::round(ratio);
    if (!(coarse_step > 0.0) || rounded < 1.0 || std::abs(rounded - ratio) > 1e-9 * ratio) {
        throw std::invalid_argument("coarsen_tau: coarse step " + format_double(coarse_step) +
                                    " is not an integer multiple of h_ref " +
                                    format_double(path.fine_step));
    }
    const auto k = static_cast<std::size_t>(rounded);
    if (path.cells() % k != 0) {
        throw std::invalid_argument("coarsen_tau: coarse step does not tile [0, T]");
    }
    const std::size_t coarse_cells = path.cells() / k;
    const auto kd = static_cast<double>(k);

    CoarseTau out;
    out.factor = k;
    out.coarse_step = coarse_step;
    out.values.resize(coarse_cells);
    out.selected.resize(coarse_cells);
    out.selected_values.resize(coarse_cells);
    out.mirror_values.resize(coarse_cells);
    out.mirror_is_exact.resize(coarse_cells);

    for (std::size_t n = 0; n < coarse_cells; ++n) {
        const std::size_t slot = stream.uniform_index(k);
        const std::size_t fine = n * k + slot;
        const double tau = path.offsets[fine];
        out.selected[n] = fine;
        out.values[n] = (static_cast<double>(slot) + tau) / kd;
        out.selected_values[n] = path.mid_values[fine];

        // The complementary time sits at fraction 1 - tau of the mirrored fine cell.
        const std::size_t mirror = n * k + (k - 1 - slot);
        const double fraction = 1.0 - tau;
        const double stored = path.offsets[mirror];
        if (stored == fraction) {
            out.mirror_values[n] = path.mid_values[mirror];
            out.mirror_is_exact[n] = 1;
            continue;
        }
        double left_at = 0.0, right_at = 1.0;
        double left = path.grid[mirror], right = path.grid[mirror + 1];
        if (fraction < stored) {
            right_at = stored;
            right = path.mid_values[mirror];
        } else {
            left_at = stored;
            left = path.mid_values[mirror];
        }
        const double width = right_at - left_at;
        out.mirror_values[n] = bridge_draw(left, right, (fraction - left_at) / width,
                                           width * path.fine_step, stream);
        out.mirror_is_exact[n] = 0;
    }
    return out;
}

void write_path_csv(std::ostream& out, const BrownianPath& path) {
    CsvWriter csv(out, {"j", "t", "B_grid", "tau", "t_mid", "B_mid"});
    for (std::size_t j = 0; j <= path.cells(); ++j) {
        csv.field(j).field(path.grid_time(j)).field(path.grid[j]);
        if (j < path.cells()) {
            csv.field(path.offsets[j]).field(path.mid_time(j)).field(path.mid_values[j]);
        } else {
            csv.empty().empty().empty();
        }
        csv.end_row();
    }
}

namespace {

double parse_double(const std::string& text, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("path csv: bad number '" + text + "' on line " +
                                    std::to_string(line));
    }
    return value;
}

} // namespace

BrownianPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{
                                                               "j", "t", "B_grid", "tau", "t_mid",
                                                               "B_mid"}) {
        throw std::invalid_argument("path csv: missing or unexpected header");
    }
    BrownianPath path;
    std::vector<double> times;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw std::invalid_argument("path csv: expected 6 fields on line " +
                                        std::to_string(line_no));
        }
        times.push_back(parse_double(fields[1], line_no));
        path.grid.push_back(parse_double(fields[2], line_no));
        if (!fields[3].empty()) {
            path.offsets.push_back(parse_double(fields[3], line_no));
            path.mid_values.push_back(parse_double(fields[5], line_no));
        }
    }
    if (times.size() < 2) {
        throw std::invalid_argument("path csv: need at least two grid rows");
    }
    path.total_time = times.back();
    path.fine_step = path.total_time / static_cast<double>(times.size() - 1);
    path.validate();
    return path;
}

} // namespace rtquad
