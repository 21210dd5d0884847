#include "rtquad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include "rtquad/csv.hpp"
#include "rtquad/integrands.hpp"
#include "rtquad/summation.hpp"

namespace rtquad {

std::string MetricSpec::name() const {
    switch (kind) {
    case ErrorMetric::absolute:
        return "absolute";
    case ErrorMetric::lp_monte_carlo:
        return p == 2.0 ? "L2_monte_carlo" : "Lp_monte_carlo(" + format_double(p) + ")";
    case ErrorMetric::pathwise:
        return "pathwise";
    case ErrorMetric::pathwise_max_prefix:
        return "pathwise_max_prefix";
    }
    return "?";
}

void ErrorLadder::add(const LadderRow& row) {
    if (!(row.step > 0.0)) {
        throw std::invalid_argument("error ladder: step must be positive");
    }
    if (!rows_.empty() && !(row.step < rows_.back().step)) {
        throw std::invalid_argument("error ladder: steps must strictly decrease");
    }
    if (!(row.error >= 0.0) || !std::isfinite(row.error)) {
        throw std::invalid_argument("error ladder: error must be finite and nonnegative");
    }
    rows_.push_back(row);
}

ConvergenceReport fit_order(const ErrorLadder& ladder) {
    ConvergenceReport report{ladder, 0.0, 0.0, 0.0, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : ladder.rows()) {
        if (row.error > 0.0) {
            xs.push_back(std::log2(row.step));
            ys.push_back(std::log2(row.error));
        } else {
            report.warnings.push_back("excluded zero-error row at h = " + format_double(row.step));
        }
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("fit_order: need at least two rows with positive error");
    }
    const auto n = static_cast<double>(xs.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= n;
    y_mean /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_order: all usable rows share one step size");
    }
    report.fitted_order = sxy / sxx;
    report.intercept = y_mean - report.fitted_order * x_mean;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (report.intercept + report.fitted_order * xs[i]);
        ss += r * r;
    }
    report.residual = std::sqrt(ss / n);
    return report;
}

namespace {

Vector one_replication(const Integrand& g, const Partition& part, const RngStream& stream,
                       std::size_t m) {
    RngStream local = stream.substream(m);
    const auto tau = sample_tau_sequence(local, part.intervals());
    return rtq(g, part, tau).value;
}

double distance(const Vector& a, const Vector& b) {
    if (a.size() == 1) {
        return std::abs(a[0] - b[0]);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return std::sqrt(s);
}

LpError lp_from_samples(const std::vector<Vector>& samples, const Vector& reference, double p) {
    const auto m = static_cast<double>(samples.size());
    std::vector<double> powered(samples.size());
    CompensatedSum sum;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        powered[i] = std::pow(distance(samples[i], reference), p);
        sum.add(powered[i]);
    }
    const double mean = sum.value() / m;
    CompensatedSum squares;
    for (double y : powered) {
        squares.add((y - mean) * (y - mean));
    }
    const double variance = squares.value() / (m - 1.0);
    LpError out;
    out.error = std::pow(mean, 1.0 / p);
    out.std_error = mean > 0.0 ? std::pow(mean, 1.0 / p - 1.0) / p * std::sqrt(variance / m) : 0.0;
    return out;
}

Vector lp_reference(const Integrand& g, std::optional<Vector> reference) {
    if (reference) {
        return *reference;
    }
    if (!g.exact_integral) {
        throw std::invalid_argument("mc_lp_error: integrand '" + g.label +
                                    "' has no exact integral and no reference was supplied");
    }
    return *g.exact_integral;
}

void check_replications(std::size_t replications) {
    if (replications < 2) {
        throw std::invalid_argument("mc_lp_error: need at least 2 replications");
    }
}

} // namespace

std::vector<Vector> rtq_replications(const Integrand& g, const Partition& part,
                                     std::size_t replications, const RngStream& stream) {
    std::vector<Vector> out(replications);
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(replications);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t m = 0; m < count; ++m) {
        try {
            out[static_cast<std::size_t>(m)] =
                one_replication(g, part, stream, static_cast<std::size_t>(m));
        } catch (...) {
#pragma omp critical(rtquad_replication_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::vector<Vector> rtq_replications_serial(const Integrand& g, const Partition& part,
                                            std::size_t replications, const RngStream& stream) {
    std::vector<Vector> out(replications);
    for (std::size_t m = 0; m < replications; ++m) {
        out[m] = one_replication(g, part, stream, m);
    }
    return out;
}

LpError mc_lp_error(const Integrand& g, const Partition& part, double p, std::size_t replications,
                    const RngStream& stream, std::optional<Vector> reference) {
    check_replications(replications);
    const Vector exact = lp_reference(g, std::move(reference));
    return lp_from_samples(rtq_replications(g, part, replications, stream), exact, p);
}

LpError mc_lp_error_serial(const Integrand& g, const Partition& part, double p,
                           std::size_t replications, const RngStream& stream,
                           std::optional<Vector> reference) {
    check_replications(replications);
    const Vector exact = lp_reference(g, std::move(reference));
    return lp_from_samples(rtq_replications_serial(g, part, replications, stream), exact, p);
}

ASRateCheck as_rate_check(const Integrand& g, double total_time, double sigma, double epsilon,
                          const std::vector<double>& steps, const RngStream& master) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("as_rate_check: epsilon must lie in (0, 1/2)");
    }
    if (!g.primitive) {
        throw std::invalid_argument("as_rate_check: integrand '" + g.label +
                                    "' has no exact primitive for the prefix integrals");
    }
    ASRateCheck check;
    check.exponent = 0.5 + sigma - epsilon;
    for (std::size_t m = 0; m < steps.size(); ++m) {
        const double h = steps[m];
        const double ratio = total_time / h;
        const double intervals = std::round(ratio);
        if (!(h > 0.0) || intervals < 1.0 || std::abs(intervals - ratio) > 1e-9 * ratio) {
            throw std::invalid_argument("as_rate_check: step " + format_double(h) +
                                        " does not divide T");
        }
        const auto part = make_partition(total_time, static_cast<std::size_t>(intervals));
        RngStream stream = master.substream(m);
        const auto tau = sample_tau_sequence(stream, part.intervals());
        const auto prefix = rtq_prefix(g, part, tau);
        double worst = 0.0;
        for (std::size_t n = 1; n <= part.intervals(); ++n) {
            const auto exact = *g.integral_to(part.node(n));
            worst = std::max(worst, distance(exact, prefix[n - 1].value));
        }
        RateRow row;
        row.step = part.step();
        row.intervals = part.intervals();
        row.max_prefix_error = worst;
        row.bound = std::pow(part.step(), check.exponent);
        row.pass = worst <= row.bound;
        check.rows.push_back(row);
    }
    for (std::size_t m = check.rows.size(); m > 0 && check.rows[m - 1].pass; --m) {
        check.first_passing_index = m - 1;
    }
    return check;
}

double median_call_seconds(const std::function<void()>& fn, int repetitions,
                           std::chrono::duration<double> min_batch) {
    using clock = std::chrono::steady_clock;
    std::size_t batch = 1;
    while (true) {
        const auto start = clock::now();
        for (std::size_t i = 0; i < batch; ++i) {
            fn();
        }
        if (clock::now() - start >= min_batch || batch >= (std::size_t{1} << 30)) {
            break;
        }
        batch *= 2;
    }
    std::vector<double> samples;
    for (int r = 0; r < std::max(1, repetitions); ++r) {
        const auto start = clock::now();
        for (std::size_t i = 0; i < batch; ++i) {
            fn();
        }
        const std::chrono::duration<double> elapsed = clock::now() - start;
        samples.push_back(elapsed.count() / static_cast<double>(batch));
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

namespace {

// Stream ids under the master seed.
constexpr std::uint64_t path_stream = 0;
constexpr std::uint64_t lp_stream = 1;
constexpr std::uint64_t pathwise_stream = 2;
constexpr std::uint64_t coarsen_stream = 3;

std::vector<int> sorted_exponents(std::vector<int> exponents) {
    std::sort(exponents.begin(), exponents.end());
    exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());
    if (exponents.size() < 2) {
        throw std::invalid_argument("experiment: need at least two distinct step exponents");
    }
    for (int e : exponents) {
        if (e < 0 || e > 30) {
            throw std::invalid_argument("experiment: step exponent " + std::to_string(e) +
                                        " out of range [0, 30]");
        }
    }
    return exponents;
}

ConvergenceReport fit_or_nan(const ErrorLadder& ladder) {
    const auto usable = std::count_if(ladder.rows().begin(), ladder.rows().end(),
                                      [](const LadderRow& r) { return r.error > 0.0; });
    if (usable >= 2) {
        return fit_order(ladder);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return ConvergenceReport{ladder, nan, nan, nan,
                             {"fewer than two nonzero errors; order not fitted"}};
}

} // namespace

Example1Result run_example1(const Example1Config& config) {
    const auto exponents = sorted_exponents(config.exponents);
    const MetricSpec lp_metric{ErrorMetric::lp_monte_carlo, config.p};
    Example1Result result;
    const RngStream lp_master(config.seed, lp_stream);
    const RngStream pathwise_master(config.seed, pathwise_stream);

    for (std::size_t gi = 0; gi < config.gammas.size(); ++gi) {
        const double gamma = config.gammas[gi];
        const auto g = power_integrand(gamma, config.total_time);
        const double exact = g.exact_integral->at(0);

        ErrorLadder ctq_ladder(Rule::ctq, {ErrorMetric::absolute});
        ErrorLadder lp_ladder(Rule::rtq, lp_metric);
        ErrorLadder pathwise_ladder(Rule::rtq, {ErrorMetric::pathwise});

        for (int e : exponents) {
            const std::size_t n = std::size_t{1} << e;
            const auto part = make_partition(config.total_time, n);
            const auto ei = static_cast<std::uint64_t>(e);

            const double ctq_value = ctq(g, part).scalar();
            double ctq_time = 0.0;
            double rtq_time = 0.0;
            if (config.measure_time) {
                ctq_time = median_call_seconds([&] { (void)ctq(g, part); });
                RngStream timing_stream(config.seed, 0xfeed);
                rtq_time = median_call_seconds([&] {
                    const auto tau = sample_tau_sequence(timing_stream, n);
                    (void)rtq(g, part, tau);
                });
            }
            ctq_ladder.add({part.step(), n, std::abs(ctq_value - exact), 0.0, ctq_time, 1});

            const auto lp = mc_lp_error(g, part, config.p, config.replications,
                                        lp_master.substream(gi).substream(ei));
            lp_ladder.add({part.step(), n, lp.error, lp.std_error, rtq_time, config.replications});

            RngStream path_stream_h = pathwise_master.substream(gi).substream(ei);
            const auto tau = sample_tau_sequence(path_stream_h, n);
            const double rtq_value = rtq(g, part, tau).scalar();
            pathwise_ladder.add({part.step(), n, std::abs(rtq_value - exact), 0.0, rtq_time, 1});

            result.timing.push_back({gamma, Rule::ctq, e, part.step(), n, ctq_time});
            result.timing.push_back({gamma, Rule::rtq, e, part.step(), n, rtq_time});
        }
        auto ctq_report = fit_order(ctq_ladder);
        const auto& rows = ctq_ladder.rows();
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].error > rows[i - 1].error) {
                ctq_report.warnings.push_back("CTQ error increased from h = " +
                                              format_double(rows[i - 1].step) + " to h = " +
                                              format_double(rows[i].step));
            }
        }
        result.per_gamma.push_back({gamma, std::move(ctq_report), fit_order(lp_ladder),
                                    fit_order(pathwise_ladder)});
    }
    return result;
}

Example2Result run_example2(const Example2Config& config) {
    const auto exponents = sorted_exponents(config.exponents);
    if (config.fine_exponent < 1 || config.fine_exponent > 26) {
        throw std::invalid_argument("example2: fine exponent must lie in [1, 26]");
    }
    if (exponents.back() > config.fine_exponent) {
        throw std::invalid_argument("example2: coarse step finer than h_ref");
    }
    const double h_ref = std::ldexp(1.0, -config.fine_exponent);

    Example2Result result;
    if (config.path_override) {
        result.path = *config.path_override;
        if (result.path.fine_step != h_ref || result.path.total_time != 1.0) {
            throw std::invalid_argument("example2: injected path must have T = 1 and h_ref = 2^-" +
                                        std::to_string(config.fine_exponent));
        }
    } else {
        RngStream stream(config.seed, path_stream);
        result.path = sample_brownian_path(stream, 1.0, h_ref);
    }
    const BrownianIntegrand bi(result.path);
    result.reference = union_grid_reference(bi);

    ErrorLadder ctq_ladder(Rule::ctq, {ErrorMetric::pathwise});
    ErrorLadder rtq_ladder(Rule::rtq, {ErrorMetric::pathwise});
    const RngStream coarsen_master(config.seed, coarsen_stream);
    for (int e : exponents) {
        const std::size_t n = std::size_t{1} << e;
        const auto part = make_partition(1.0, n);
        RngStream stream = coarsen_master.substream(static_cast<std::uint64_t>(e));
        const auto ctau = coarsen_tau(result.path, part.step(), stream);

        const double ctq_value = ctq_brownian(bi, part).scalar();
        const double rtq_value = rtq_brownian(bi, part, ctau).scalar();
        double ctq_time = 0.0;
        double rtq_time = 0.0;
        if (config.measure_time) {
            ctq_time = median_call_seconds([&] { (void)ctq_brownian(bi, part); });
            rtq_time = median_call_seconds([&] { (void)rtq_brownian(bi, part, ctau); });
        }
        ctq_ladder.add({part.step(), n, std::abs(ctq_value - result.reference), 0.0, ctq_time, 1});
        rtq_ladder.add({part.step(), n, std::abs(rtq_value - result.reference), 0.0, rtq_time, 1});
        result.timing.push_back({std::nullopt, Rule::ctq, e, part.step(), n, ctq_time});
        result.timing.push_back({std::nullopt, Rule::rtq, e, part.step(), n, rtq_time});
        const std::size_t exact = ctau.mirror_exact_count();
        result.mirror.push_back({e, n, exact, n - exact});
    }
    result.ctq_pathwise = fit_or_nan(ctq_ladder);
    result.rtq_pathwise = fit_or_nan(rtq_ladder);
    return result;
}

} // namespace rtquad
