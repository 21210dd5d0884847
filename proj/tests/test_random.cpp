#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "rtquad/random.hpp"

using namespace rtquad;

TEST_CASE("the engine is the standard mt19937_64") {
    // The standard fixes the 10000th output of a default-constructed engine.
    std::mt19937_64 engine;
    engine.discard(9999);
    CHECK(engine() == 9981545732273789042ULL);
}

TEST_CASE("same seed and stream id reproduce the same tau sequence") {
    RngStream a(42, 7), b(42, 7);
    const auto x = sample_tau_sequence(a, 1000);
    const auto y = sample_tau_sequence(b, 1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        REQUIRE(x[i] == y[i]);
    }
    RngStream c(42, 8);
    CHECK(sample_tau_sequence(c, 1)[0] != x[0]);
}

TEST_CASE("uniform moments over 1e5 draws") {
    RngStream stream(2021, 0);
    const std::size_t n = 100000;
    const auto tau = sample_tau_sequence(stream, n);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(tau[i] > 0.0);
        REQUIRE(tau[i] < 1.0);
        sum += tau[i];
    }
    const double mean = sum / n;
    for (std::size_t i = 0; i < n; ++i) {
        sq += (tau[i] - mean) * (tau[i] - mean);
    }
    const double var = sq / (n - 1);
    CHECK(std::abs(mean - 0.5) <= 0.01);
    CHECK(std::abs(var - 1.0 / 12.0) <= 0.005);
}

TEST_CASE("two stream ids are uncorrelated") {
    RngStream a(2021, 1), b(2021, 2);
    const std::size_t n = 100000;
    const auto x = sample_tau_sequence(a, n);
    const auto y = sample_tau_sequence(b, n);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) <= 0.02);
}

TEST_CASE("substreams are reproducible and distinct") {
    const RngStream parent(5, 3);
    auto a = parent.substream(0);
    auto b = parent.substream(0);
    auto c = parent.substream(1);
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());

    std::set<std::uint64_t> ids;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        ids.insert(parent.substream(i).stream_id());
    }
    CHECK(ids.size() == 1000);
}

TEST_CASE("standard normal moments") {
    RngStream stream(77, 0);
    const int n = 200000;
    double sum = 0, sq = 0, quart = 0;
    for (int i = 0; i < n; ++i) {
        const double z = stream.standard_normal();
        sum += z;
        sq += z * z;
        quart += z * z * z * z;
    }
    CHECK(std::abs(sum / n) <= 0.01);
    CHECK(std::abs(sq / n - 1.0) <= 0.01);
    CHECK(std::abs(quart / n - 3.0) <= 0.06);
}

TEST_CASE("dyadic and index draws stay in range") {
    RngStream stream(9, 9);
    for (int i = 0; i < 10000; ++i) {
        const double u = stream.uniform_dyadic(3);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(u * 8.0 == std::floor(u * 8.0));
        REQUIRE(stream.uniform_index(5) < 5);
    }
    CHECK(stream.uniform_index(1) == 0);
}

TEST_CASE("TauSequence rejects endpoints") {
    CHECK_THROWS_AS(TauSequence({0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(TauSequence({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TauSequence({std::nan("")}), std::invalid_argument);
    RngStream stream(1, 1);
    CHECK_THROWS_AS(sample_tau_sequence(stream, 0), std::invalid_argument);

    const TauSequence tau({0.25, 0.125});
    const auto flipped = tau.complemented();
    CHECK(flipped[0] == 0.75);
    CHECK(flipped[1] == 0.875);
}

TEST_CASE("splitmix64 is a bijective mixer on a sample") {
    std::set<std::uint64_t> out;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        out.insert(splitmix64(i));
    }
    CHECK(out.size() == 10000);
}
