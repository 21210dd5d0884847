#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rtquad {

// A reproducible random stream identified by (seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq over the four
// 32-bit halves of (seed, stream_id); both are fully specified by the
// standard, so draws are identical across conforming toolchains. Uniform and
// Gaussian variates are produced by hand-written transforms for the same
// reason (std:: distributions are implementation-defined).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

    // Child stream under the same seed with a stream id mixed from
    // (stream_id, index). Does not advance this stream.
    [[nodiscard]] RngStream substream(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1) with 53 random bits; an exact 0 is redrawn.
    double uniform_open();

    // Uniform integer on [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    // Uniform on {m * 2^-bits : m = 1 .. 2^bits - 1}.
    double uniform_dyadic(int bits);

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double standard_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Offsets tau_0..tau_{N-1}, each strictly inside (0, 1).
class TauSequence {
public:
    explicit TauSequence(std::vector<double> values, std::uint64_t seed = 0);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double complement(std::size_t i) const { return 1.0 - values_[i]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    // tau_i -> 1 - tau_i for every i.
    [[nodiscard]] TauSequence complemented() const;

private:
    std::vector<double> values_;
    std::uint64_t seed_;
};

TauSequence sample_tau_sequence(RngStream& stream, std::size_t count);

} // namespace rtquad
