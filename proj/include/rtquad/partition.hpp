#pragma once

#include <cstddef>

namespace rtquad {

// Equidistant grid t_j = j*h on [0, T] with N intervals of width h = T/N.
class Partition {
public:
    Partition(double total_time, std::size_t intervals);

    [[nodiscard]] double total_time() const { return total_time_; }
    [[nodiscard]] std::size_t intervals() const { return intervals_; }
    [[nodiscard]] double step() const { return step_; }

    // The last node is pinned to T so that t_N == T exactly.
    [[nodiscard]] double node(std::size_t j) const {
        return j == intervals_ ? total_time_ : static_cast<double>(j) * step_;
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    double total_time_;
    std::size_t intervals_;
    double step_;
};

// Throws std::invalid_argument for T <= 0 (or non-finite) and N == 0.
Partition make_partition(double total_time, std::size_t intervals);

} // namespace rtquad
