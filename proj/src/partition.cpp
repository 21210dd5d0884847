#include "rtquad/partition.hpp"

#include <cmath>
#include <stdexcept>

namespace rtquad {

Partition::Partition(double total_time, std::size_t intervals)
    : total_time_(total_time), intervals_(intervals) {
    if (!(total_time > 0.0) || !std::isfinite(total_time)) {
        throw std::invalid_argument("partition: total time must be positive and finite");
    }
    if (intervals == 0) {
        throw std::invalid_argument("partition: number of intervals must be at least 1");
    }
    step_ = total_time / static_cast<double>(intervals);
}

Partition make_partition(double total_time, std::size_t intervals) {
    return Partition(total_time, intervals);
}

} // namespace rtquad
