#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rtquad/random.hpp"

namespace rtquad {

// Brownian motion sampled on the fine grid j*h_ref, j = 0..J, plus one
// bridge-sampled point at (j + tau_j)*h_ref inside every fine cell.
struct BrownianPath {
    double total_time = 0.0;
    double fine_step = 0.0;
    std::vector<double> grid;       // B(j h_ref), size J+1, grid[0] == 0
    std::vector<double> offsets;    // tau_j in (0,1), size J
    std::vector<double> mid_values; // B((j + tau_j) h_ref), size J

    [[nodiscard]] std::size_t cells() const { return offsets.size(); }
    [[nodiscard]] double grid_time(std::size_t j) const;
    [[nodiscard]] double mid_time(std::size_t j) const {
        return (static_cast<double>(j) + offsets[j]) * fine_step;
    }

    // Throws std::invalid_argument when sizes or B(0) are inconsistent.
    void validate() const;
};

// Bit width used for fine-cell offsets so (j + tau_j) is exact for j < cells.
int offset_bits(std::size_t cells);

// Grid increments are N(0, h_ref); mid points follow the Brownian bridge
// N((1 - tau) B_j + tau B_{j+1}, tau (1 - tau) h_ref).
// Throws std::invalid_argument for h_ref <= 0, h_ref > T, or h_ref not dividing T.
BrownianPath sample_brownian_path(RngStream& stream, double total_time, double fine_step);

// Builds a path from given grid values and offsets, bridge-sampling the mid points.
BrownianPath bridge_fill(std::vector<double> grid, std::vector<double> offsets,
                         double total_time, RngStream& stream);

// Offsets for a coarse grid of step k*h_ref taken from the fine intermediate
// points: coarse cell n uses fine slot s_n (uniform on 0..k-1), so
// t_n + tau^h_n h == mid_time(n k + s_n).
//
// The value of B at the complementary time t_n + (1 - tau^h_n) h is also
// resolved here: it is the stored point of the mirrored slot k-1-s_n when that
// lands exactly on the time, and otherwise a bridge draw conditional on the
// nearest known values in that fine cell.
struct CoarseTau {
    std::size_t factor = 1;
    double coarse_step = 0.0;
    std::vector<double> values;                // tau^h_n
    std::vector<std::size_t> selected;         // fine cell index feeding slot n
    std::vector<double> selected_values;       // B(t_n + tau^h_n h)
    std::vector<double> mirror_values;         // B(t_n + (1 - tau^h_n) h)
    std::vector<std::uint8_t> mirror_is_exact; // 1 when reused, 0 when bridge-drawn

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] std::size_t mirror_exact_count() const;
};

// Throws std::invalid_argument when coarse_step is not an integer multiple of
// h_ref or does not tile the path.
CoarseTau coarsen_tau(const BrownianPath& path, double coarse_step, RngStream& stream);

// CSV with columns j,t,B_grid,tau,t_mid,B_mid (the last grid row leaves the
// three mid columns empty). Doubles use shortest round-trip formatting.
void write_path_csv(std::ostream& out, const BrownianPath& path);
BrownianPath read_path_csv(std::istream& in);

} // namespace rtquad
