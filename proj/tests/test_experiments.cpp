#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rtquad/experiments.hpp"
#include "rtquad/integrands.hpp"

using namespace rtquad;

namespace {

ErrorLadder synthetic(double factor, double order, int first = 5, int last = 10) {
    ErrorLadder ladder(Rule::ctq, {ErrorMetric::absolute});
    for (int e = first; e <= last; ++e) {
        const double h = std::ldexp(1.0, -e);
        ladder.add({h, std::size_t{1} << e, factor * std::pow(h, order), 0.0, 0.0, 1});
    }
    return ladder;
}

} // namespace

TEST_CASE("fit_order recovers exact power laws") {
    const auto a = fit_order(synthetic(1.0, 2.0));
    CHECK(std::abs(a.fitted_order - 2.0) <= 1e-12);
    CHECK(std::abs(a.intercept) <= 1e-12);
    CHECK(a.residual <= 1e-12);

    const auto b = fit_order(synthetic(3.0, 2.5));
    CHECK(std::abs(b.fitted_order - 2.5) <= 1e-12);
    CHECK(std::abs(b.intercept - std::log2(3.0)) <= 1e-12);

    const auto c = fit_order(synthetic(0.7, 1.37, 2, 20));
    CHECK(std::abs(c.fitted_order - 1.37) <= 1e-12);
    CHECK(std::abs(c.intercept - std::log2(0.7)) <= 1e-12);
}

TEST_CASE("refitting a fitted ladder is bit-for-bit stable") {
    const auto first = fit_order(synthetic(2.0, 2.2));
    const auto second = fit_order(first.ladder);
    CHECK(first.fitted_order == second.fitted_order);
    CHECK(first.intercept == second.intercept);
}

TEST_CASE("fit_order skips zero rows and needs two usable rows") {
    ErrorLadder ladder(Rule::rtq, {ErrorMetric::pathwise});
    ladder.add({0.5, 2, 0.25, 0, 0, 1});
    ladder.add({0.25, 4, 0.0, 0, 0, 1});
    ladder.add({0.125, 8, 0.015625, 0, 0, 1});
    const auto r = fit_order(ladder);
    CHECK(r.fitted_order == doctest::Approx(2.0));
    CHECK(r.warnings.size() == 1);

    ErrorLadder sparse(Rule::rtq, {ErrorMetric::pathwise});
    sparse.add({0.5, 2, 0.0, 0, 0, 1});
    sparse.add({0.25, 4, 0.1, 0, 0, 1});
    CHECK_THROWS_AS(fit_order(sparse), std::invalid_argument);
}

TEST_CASE("ErrorLadder enforces its invariants") {
    ErrorLadder ladder(Rule::ctq, {ErrorMetric::absolute});
    ladder.add({0.5, 2, 0.1, 0, 0, 1});
    CHECK_THROWS_AS(ladder.add({0.5, 2, 0.1, 0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(ladder.add({1.0, 1, 0.1, 0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(ladder.add({0.25, 4, -1.0, 0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(ladder.add({0.25, 4, std::nan(""), 0, 0, 1}), std::invalid_argument);
    CHECK(ladder.rows().size() == 1);
    CHECK(MetricSpec{ErrorMetric::lp_monte_carlo, 2.0}.name() == "L2_monte_carlo");
    CHECK(MetricSpec{ErrorMetric::lp_monte_carlo, 3.0}.name() == "Lp_monte_carlo(3)");
}

TEST_CASE("mc_lp_error: affine integrands are exact") {
    const auto g = affine_integrand(0.5, -2.0, 1.0);
    const RngStream stream(1, 1);
    for (std::size_t M : {2u, 10u, 100u}) {
        const auto e = mc_lp_error(g, make_partition(1.0, 32), 2.0, M, stream);
        CHECK(e.error <= 1e-15);
    }
}

TEST_CASE("mc_lp_error: argument checks") {
    const auto g = power_integrand(1.5, 1.0);
    const RngStream stream(1, 1);
    CHECK_THROWS_AS(mc_lp_error(g, make_partition(1.0, 4), 2.0, 1, stream), std::invalid_argument);
    const auto bare = Integrand::from_scalar("bare", [](double t) { return t; });
    CHECK_THROWS_AS(mc_lp_error(bare, make_partition(1.0, 4), 2.0, 10, stream),
                    std::invalid_argument);
    CHECK_NOTHROW(mc_lp_error(bare, make_partition(1.0, 4), 2.0, 10, stream, Vector{0.5}));
}

TEST_CASE("mc_lp_error: RTQ beats CTQ at N = 32 for gamma = 3/2") {
    const auto g = power_integrand(1.5, 1.0);
    const auto part = make_partition(1.0, 32);
    const auto lp = mc_lp_error(g, part, 2.0, 1000, RngStream(default_seed, 1));
    const double ctq_error = std::abs(ctq(g, part).scalar() - 0.4);
    CHECK(lp.error < ctq_error);
    CHECK(lp.std_error > 0.0);
}

TEST_CASE("mc_lp_error: doubling M is statistically consistent") {
    const auto g = power_integrand(1.5, 1.0);
    const auto part = make_partition(1.0, 32);
    const RngStream stream(7, 1);
    const auto small = mc_lp_error(g, part, 2.0, 1000, stream);
    const auto large = mc_lp_error(g, part, 2.0, 2000, stream);
    CHECK(std::abs(small.error - large.error) < 3.0 * small.std_error);
}

TEST_CASE("parallel replications match the serial reference bitwise") {
    const auto g = power_integrand(1.25, 1.0);
    const auto part = make_partition(1.0, 64);
    const RngStream stream(11, 1);
    CHECK(rtq_replications(g, part, 257, stream) == rtq_replications_serial(g, part, 257, stream));
    const auto a = mc_lp_error(g, part, 3.0, 500, stream);
    const auto b = mc_lp_error_serial(g, part, 3.0, 500, stream);
    CHECK(a.error == b.error);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("as_rate_check: affine integrand passes everywhere") {
    const auto g = affine_integrand(1.0, 3.0, 1.0);
    std::vector<double> steps;
    for (int e = 5; e <= 10; ++e) steps.push_back(std::ldexp(1.0, -e));
    const auto check = as_rate_check(g, 1.0, 1.5, 0.25, steps, RngStream(3, 2));
    CHECK(check.exponent == doctest::Approx(1.75));
    REQUIRE(check.rows.size() == 6);
    for (const auto& row : check.rows) {
        CHECK(row.max_prefix_error <= 1e-14);
        CHECK(row.pass);
    }
    CHECK(check.first_passing_index == std::optional<std::size_t>{0});
}

TEST_CASE("as_rate_check: gamma = 7/4 passes from some rung onward") {
    const auto g = power_integrand(1.75, 1.0);
    std::vector<double> steps;
    for (int e = 5; e <= 10; ++e) steps.push_back(std::ldexp(1.0, -e));
    const double sigma = std::nextafter(2.0, 0.0);
    const auto check = as_rate_check(g, 1.0, sigma, 0.25, steps, RngStream(default_seed, 2));
    REQUIRE(check.passed());
    for (std::size_t i = *check.first_passing_index; i < check.rows.size(); ++i) {
        CHECK(check.rows[i].pass);
    }
    for (const auto& row : check.rows) {
        CHECK(row.pass == (row.max_prefix_error <= row.bound));
    }
}

TEST_CASE("as_rate_check: shrinking epsilon tightens bounds and shrinks the pass set") {
    const auto g = power_integrand(1.5, 1.0);
    std::vector<double> steps;
    for (int e = 3; e <= 10; ++e) steps.push_back(std::ldexp(1.0, -e));
    const RngStream master(5, 2);
    std::optional<ASRateCheck> wider;
    for (double eps : {0.45, 0.3, 0.2, 0.1, 0.01}) {
        const auto check = as_rate_check(g, 1.0, 1.5, eps, steps, master);
        if (wider) {
            for (std::size_t i = 0; i < steps.size(); ++i) {
                CHECK(check.rows[i].max_prefix_error == wider->rows[i].max_prefix_error);
                CHECK(check.rows[i].bound < wider->rows[i].bound);
                CHECK((!check.rows[i].pass || wider->rows[i].pass));
            }
        }
        wider = check;
    }
    CHECK_THROWS_AS(as_rate_check(g, 1.0, 1.5, 0.0, steps, master), std::invalid_argument);
    CHECK_THROWS_AS(as_rate_check(g, 1.0, 1.5, 0.5, steps, master), std::invalid_argument);
}

TEST_CASE("run_example1 is deterministic and ordered") {
    Example1Config config;
    config.measure_time = false;
    const auto a = run_example1(config);
    const auto b = run_example1(config);
    REQUIRE(a.per_gamma.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.per_gamma[i].rtq_lp.fitted_order == b.per_gamma[i].rtq_lp.fitted_order);
        CHECK(a.per_gamma[i].rtq_pathwise.fitted_order == b.per_gamma[i].rtq_pathwise.fitted_order);
        // CTQ error halves monotonically on this ladder.
        CHECK(a.per_gamma[i].ctq_absolute.warnings.empty());
        const auto& rows = a.per_gamma[i].ctq_absolute.ladder.rows();
        for (std::size_t r = 1; r < rows.size(); ++r) {
            CHECK(rows[r].error <= rows[r - 1].error);
        }
    }
    CHECK(a.per_gamma[1].ctq_absolute.fitted_order == doctest::Approx(1.99).epsilon(0.05));
    CHECK(a.timing.size() == 36);
}

TEST_CASE("run_example2 with an injected zero path") {
    Example2Config config;
    config.fine_exponent = 10;
    config.measure_time = false;
    const std::size_t J = 1024;
    BrownianPath zero;
    zero.total_time = 1.0;
    zero.fine_step = 1.0 / J;
    zero.grid.assign(J + 1, 0.0);
    zero.offsets.assign(J, 0.5);
    zero.mid_values.assign(J, 0.0);
    config.path_override = zero;
    const auto result = run_example2(config);
    CHECK(result.reference == 0.0);
    for (const auto* report : {&result.ctq_pathwise, &result.rtq_pathwise}) {
        REQUIRE(report->ladder.rows().size() == 6);
        for (const auto& row : report->ladder.rows()) {
            CHECK(row.error == 0.0);
        }
        CHECK(std::isnan(report->fitted_order));
        CHECK_FALSE(report->warnings.empty());
    }
}

TEST_CASE("run_example2 is reproducible") {
    Example2Config config;
    config.fine_exponent = 12;
    config.measure_time = false;
    const auto a = run_example2(config);
    const auto b = run_example2(config);
    CHECK(a.reference == b.reference);
    CHECK(a.ctq_pathwise.fitted_order == b.ctq_pathwise.fitted_order);
    CHECK(a.rtq_pathwise.fitted_order == b.rtq_pathwise.fitted_order);
    REQUIRE(a.mirror.size() == 6);
    for (const auto& m : a.mirror) {
        CHECK(m.exact + m.bridged == m.intervals);
    }
}

TEST_CASE("median_call_seconds measures something") {
    volatile double sink = 0.0;
    const double t = median_call_seconds([&] {
        for (int i = 0; i < 100; ++i) sink = sink + std::sqrt(static_cast<double>(i));
    });
    CHECK(t > 0.0);
    CHECK(t < 1e-2);
}
