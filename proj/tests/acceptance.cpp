// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "rtquad/experiments.hpp"
#include "rtquad/integrands.hpp"

using namespace rtquad;

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const Example1Result& example1() {
    static const Example1Result result = [] {
        Example1Config config;
        config.measure_time = false;
        return run_example1(config);
    }();
    return result;
}

Verdict ctq_orders() {
    const double target[] = {1.96, 1.99, 1.99};
    Verdict v{true, "orders"};
    for (std::size_t i = 0; i < 3; ++i) {
        const double o = example1().per_gamma[i].ctq_absolute.fitted_order;
        v.pass = v.pass && std::abs(o - target[i]) <= 0.15;
        v.detail += fmt(" %.3f", o);
    }
    v.detail += " vs 1.96/1.99/1.99 (+-0.15)";
    return v;
}

Verdict rtq_l2_orders() {
    const double target[] = {2.24, 2.44, 2.50};
    Verdict v{true, "orders"};
    for (std::size_t i = 0; i < 3; ++i) {
        const double o = example1().per_gamma[i].rtq_lp.fitted_order;
        v.pass = v.pass && std::abs(o - target[i]) <= 0.25;
        v.detail += fmt(" %.3f", o);
    }
    v.detail += " vs 2.24/2.44/2.50 (+-0.25)";
    return v;
}

Verdict pathwise_property() {
    Verdict v{true, ""};
    for (const auto& pg : example1().per_gamma) {
        const double path = pg.rtq_pathwise.fitted_order;
        const double gap = pg.rtq_lp.fitted_order - pg.ctq_absolute.fitted_order;
        v.pass = v.pass && path > 2.0 && gap >= 0.2;
        v.detail += fmt("gamma %.2f: ", pg.gamma) + fmt("pathwise %.3f, ", path) +
                    fmt("L2-CTQ gap %.3f; ", gap);
    }
    v.detail.resize(v.detail.size() - 2);
    return v;
}

Verdict unbiasedness() {
    const auto g = power_integrand(1.5, 1.0);
    const std::size_t M = 10000;
    const auto values =
        rtq_replications(g, make_partition(1.0, 32), M, RngStream(default_seed, 100));
    double sum = 0.0;
    for (const auto& x : values) sum += x[0];
    const double mean = sum / M;
    double sq = 0.0;
    for (const auto& x : values) sq += (x[0] - mean) * (x[0] - mean);
    const double z = std::abs(mean - 0.4) / (std::sqrt(sq / (M - 1)) / std::sqrt(double(M)));
    return {z <= 4.0, fmt("standardized deviation %.3f (<= 4)", z)};
}

Verdict affine_exactness() {
    RngStream coef(default_seed, 101);
    RngStream taus(default_seed, 102);
    double worst = 0.0;
    for (std::size_t n : {1u, 2u, 32u, 1024u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const double a = 20.0 * coef.uniform_open() - 10.0;
            const double b = trial % 2 == 0 ? 0.0 : 20.0 * coef.uniform_open() - 10.0;
            const double T = 0.5 + 3.0 * coef.uniform_open();
            const auto g = affine_integrand(a, b, T);
            const double exact = a * T + 0.5 * b * T * T;
            const double scale = std::abs(a * T) + std::abs(0.5 * b * T * T);
            const auto part = make_partition(T, n);
            const auto tau = sample_tau_sequence(taus, n);
            for (double got : {ctq(g, part).scalar(), rtq(g, part, tau).scalar()}) {
                worst = std::max(worst, std::abs(got - exact) / (eps * scale));
            }
        }
    }
    return {worst <= 8.0, fmt("worst error %.2f ulp (<= 8)", worst)};
}

Verdict order_fit_oracle() {
    double worst = 0.0;
    for (double factor : {1.0, 3.0, 0.01}) {
        for (double order : {1.0, 2.0, 2.5, 3.7}) {
            ErrorLadder ladder(Rule::rtq, {ErrorMetric::absolute});
            for (int e = 5; e <= 10; ++e) {
                const double h = std::ldexp(1.0, -e);
                ladder.add({h, std::size_t{1} << e, factor * std::pow(h, order), 0, 0, 1});
            }
            const auto r = fit_order(ladder);
            worst = std::max({worst, std::abs(r.fitted_order - order),
                              std::abs(r.intercept - std::log2(factor))});
        }
    }
    return {worst <= 1e-12, fmt("max slope/intercept deviation %.2e (<= 1e-12)", worst)};
}

Verdict brownian_machinery() {
    Verdict v{true, ""};
    // Var B(1) over 1e4 paths.
    const RngStream master(default_seed, 103);
    const std::size_t paths = 10000;
    std::vector<double> end(paths);
    for (std::size_t m = 0; m < paths; ++m) {
        auto s = master.substream(m);
        end[m] = sample_brownian_path(s, 1.0, std::ldexp(1.0, -6)).grid.back();
    }
    double mean = 0.0;
    for (double x : end) mean += x;
    mean /= paths;
    double var = 0.0;
    for (double x : end) var += (x - mean) * (x - mean);
    var /= paths - 1;
    v.pass = std::abs(var - 1.0) <= 0.05;
    v.detail += fmt("Var B(1) %.4f; ", var);

    // Bridge residuals.
    RngStream s(default_seed, 104);
    const auto path = sample_brownian_path(s, 1.0, std::ldexp(1.0, -14));
    double zm = 0.0, zs = 0.0;
    for (std::size_t j = 0; j < 10000; ++j) {
        const double tau = path.offsets[j];
        const double cm = (1.0 - tau) * path.grid[j] + tau * path.grid[j + 1];
        const double z = (path.mid_values[j] - cm) / std::sqrt(tau * (1.0 - tau) * path.fine_step);
        zm += z;
        zs += z * z;
    }
    zm /= 10000;
    const double zv = (zs - 10000 * zm * zm) / 9999;
    v.pass = v.pass && std::abs(zm) <= 0.05 && std::abs(zv - 1.0) <= 0.07;
    v.detail += fmt("bridge residual mean %.4f ", zm) + fmt("var %.4f; ", zv);

    // Coarsening exactness.
    std::size_t mismatches = 0;
    for (std::size_t k = 2; k <= 512; k *= 2) {
        const double h = static_cast<double>(k) * path.fine_step;
        const auto ct = coarsen_tau(path, h, s);
        for (std::size_t n = 0; n < ct.size(); ++n) {
            const double t = static_cast<double>(n) * h + ct.values[n] * h;
            mismatches += t != path.mid_time(ct.selected[n]);
        }
    }
    v.pass = v.pass && mismatches == 0;
    v.detail += "coarsening mismatches " + std::to_string(mismatches);
    return v;
}

Verdict example2_property() {
    const auto result = run_example2(Example2Config{});
    const double c = result.ctq_pathwise.fitted_order;
    const double r = result.rtq_pathwise.fitted_order;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < result.timing.size(); i += 2) {
        worst_ratio = std::max(worst_ratio, result.timing[i + 1].wall_time / result.timing[i].wall_time);
    }
    return {r > c && worst_ratio <= 3.0, fmt("RTQ order %.3f ", r) + fmt("vs CTQ %.3f; ", c) +
                                             fmt("worst RTQ/CTQ time ratio %.2f (<= 3)", worst_ratio)};
}

Verdict almost_sure_rate() {
    std::vector<double> steps;
    for (int e = 5; e <= 12; ++e) steps.push_back(std::ldexp(1.0, -e));
    const double sigma = std::nextafter(2.0, 0.0);
    const auto check = as_rate_check(power_integrand(1.75, 1.0), 1.0, sigma, 0.25, steps,
                                     RngStream(default_seed, 105));
    std::size_t passing = 0;
    for (const auto& row : check.rows) passing += row.pass;
    std::string detail = fmt("exponent %.4f; ", check.exponent) + std::to_string(passing) + "/" +
                         std::to_string(check.rows.size()) + " rungs pass; m0 = ";
    detail += check.first_passing_index ? std::to_string(*check.first_passing_index) : "none";
    return {check.passed(), detail};
}

Verdict double_sum_identity() {
    double worst_ulp = 0.0, worst_rel = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RngStream s(default_seed, 200 + seed);
        for (int e = 0; e <= 6; ++e) {
            const auto path = sample_brownian_path(s, 1.0, std::ldexp(1.0, -e));
            const BrownianIntegrand bi(path);
            const std::size_t N = path.cells();
            const long double h = path.fine_step;
            long double outer = 0.0L, running = 0.0L, all = 0.0L;
            for (std::size_t n = 0; n < N; ++n) {
                running = 0.0L;
                for (std::size_t i = 0; i <= n; ++i) running += path.grid[i];
                outer += running;
                all += path.grid[n];
            }
            const double oracle = static_cast<double>(h * h * outer - h * h / 2.0L * all);
            const double got = ctq_brownian(bi, make_partition(1.0, N)).scalar();
            if (oracle != 0.0) {
                worst_ulp = std::max(worst_ulp, std::abs(got - oracle) / (eps * std::abs(oracle)));
            }
        }
        const auto path = sample_brownian_path(s, 1.0, std::ldexp(1.0, -12));
        const BrownianIntegrand bi(path);
        for (std::size_t N : {1u, 8u, 64u, 1024u}) {
            const auto part = make_partition(1.0, N);
            const double fast = ctq_brownian(bi, part).scalar();
            const double generic = ctq(bi.as_integrand(), part).scalar();
            worst_rel = std::max(worst_rel, std::abs(fast - generic) / std::abs(generic));
        }
    }
    return {worst_ulp <= 2.0 && worst_rel <= 1e-12,
            fmt("O(N^2) deviation %.2f ulp (<= 2); ", worst_ulp) +
                fmt("generic ctq relative %.2e (<= 1e-12)", worst_rel)};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {1, "CTQ orders", ctq_orders, 1.0},
        {2, "RTQ L2 orders", rtq_l2_orders, 30.0},
        {3, "RTQ pathwise orders and L2 gap", pathwise_property, 30.0},
        {4, "RTQ unbiasedness", unbiasedness, 10.0},
        {5, "affine exactness", affine_exactness, 30.0},
        {6, "order-fit oracle", order_fit_oracle, 30.0},
        {7, "Brownian machinery", brownian_machinery, 30.0},
        {8, "Example 2 order and cost", example2_property, 60.0},
        {9, "almost-sure rate", almost_sure_rate, 30.0},
        {10, "double-sum identity", double_sum_identity, 30.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_s) {
            v.pass = false;
            v.detail += fmt(" [runtime budget %.0f s exceeded]", c.budget_s);
        }
        failures += !v.pass;
        std::printf("criterion %2d %-32s %s  %s  (%.2f s)\n", c.id, c.name,
                    v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
