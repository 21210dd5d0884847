#include "rtquad/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rtquad {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t index) const {
    return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(~index)));
}

double RngStream::uniform_open() {
    while (true) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0) {
            return u;
        }
    }
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_index: empty range");
    }
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const std::uint64_t r = engine_();
        if (r >= threshold) {
            return r % n;
        }
    }
}

double RngStream::uniform_dyadic(int bits) {
    if (bits < 1 || bits > 53) {
        throw std::invalid_argument("uniform_dyadic: bits must be in [1, 53], got " +
                                    std::to_string(bits));
    }
    while (true) {
        const std::uint64_t m = engine_() >> (64 - bits);
        if (m != 0) {
            return std::ldexp(static_cast<double>(m), -bits);
        }
    }
}

double RngStream::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

TauSequence::TauSequence(std::vector<double> values, std::uint64_t seed)
    : values_(std::move(values)), seed_(seed) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0 && values_[i] < 1.0)) {
            throw std::invalid_argument("tau sequence: value " + std::to_string(i) +
                                        " is outside (0, 1)");
        }
    }
}

TauSequence TauSequence::complemented() const {
    std::vector<double> flipped(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        flipped[i] = 1.0 - values_[i];
    }
    return TauSequence(std::move(flipped), seed_);
}

TauSequence sample_tau_sequence(RngStream& stream, std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("sample_tau_sequence: count must be at least 1");
    }
    std::vector<double> values(count);
    for (auto& v : values) {
        // 1 - 2^-53 is the largest draw, so only the lower endpoint needs a redraw.
        v = stream.uniform_open();
    }
    return TauSequence(std::move(values), stream.seed());
}

} // namespace rtquad
