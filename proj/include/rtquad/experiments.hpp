#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtquad/brownian.hpp"
#include "rtquad/integrand.hpp"
#include "rtquad/partition.hpp"
#include "rtquad/quadrature.hpp"
#include "rtquad/random.hpp"

namespace rtquad {

enum class ErrorMetric { absolute, lp_monte_carlo, pathwise, pathwise_max_prefix };

struct MetricSpec {
    ErrorMetric kind = ErrorMetric::absolute;
    double p = 2.0; // used by lp_monte_carlo only

    // "absolute", "L2_monte_carlo", "Lp_monte_carlo(3)", "pathwise", ...
    [[nodiscard]] std::string name() const;
    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

struct LadderRow {
    double step = 0.0;
    std::size_t intervals = 0;
    double error = 0.0;
    double std_error = 0.0;
    double wall_time = 0.0; // seconds per quadrature call
    std::size_t replications = 1;
};

// Errors of one rule over a ladder of step sizes, sorted by decreasing h.
class ErrorLadder {
public:
    ErrorLadder() = default;
    ErrorLadder(Rule rule, MetricSpec metric) : rule_(rule), metric_(metric) {}

    // Throws std::invalid_argument if h does not decrease or error is negative/non-finite.
    void add(const LadderRow& row);

    [[nodiscard]] Rule rule() const { return rule_; }
    [[nodiscard]] const MetricSpec& metric() const { return metric_; }
    [[nodiscard]] const std::vector<LadderRow>& rows() const { return rows_; }

private:
    Rule rule_ = Rule::ctq;
    MetricSpec metric_;
    std::vector<LadderRow> rows_;
};

struct ConvergenceReport {
    ErrorLadder ladder;
    double fitted_order = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS of log2-space residuals
    std::vector<std::string> warnings;
};

// Least squares of log2(error) against log2(h). Zero-error rows are skipped
// with a warning; throws std::invalid_argument with fewer than two usable rows.
ConvergenceReport fit_order(const ErrorLadder& ladder);

struct LpError {
    double error = 0.0;
    double std_error = 0.0;
};

// RTQ values for M independent offset sequences; replication m draws from
// stream.substream(m). OpenMP-parallel; output order is by replication.
std::vector<Vector> rtq_replications(const Integrand& g, const Partition& part,
                                     std::size_t replications, const RngStream& stream);
std::vector<Vector> rtq_replications_serial(const Integrand& g, const Partition& part,
                                            std::size_t replications, const RngStream& stream);

// (M^-1 sum_m |I - RQ_m|^p)^{1/p} with a delta-method standard error.
// `reference` overrides the integrand's exact integral. Throws
// std::invalid_argument for M < 2 or when no reference value is known.
LpError mc_lp_error(const Integrand& g, const Partition& part, double p, std::size_t replications,
                    const RngStream& stream, std::optional<Vector> reference = std::nullopt);
LpError mc_lp_error_serial(const Integrand& g, const Partition& part, double p,
                           std::size_t replications, const RngStream& stream,
                           std::optional<Vector> reference = std::nullopt);

struct RateRow {
    double step = 0.0;
    std::size_t intervals = 0;
    double max_prefix_error = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ASRateCheck {
    double exponent = 0.0; // 1/2 + sigma - epsilon
    std::vector<RateRow> rows;
    // First rung index from which every later rung passes.
    std::optional<std::size_t> first_passing_index;

    [[nodiscard]] bool passed() const { return first_passing_index.has_value(); }
};

// max_n |I^n - RQ^{tau,n}| on one realization per step, against h^{1/2+sigma-eps}.
// Step m uses master.substream(m). Requires an exact primitive.
ASRateCheck as_rate_check(const Integrand& g, double total_time, double sigma, double epsilon,
                          const std::vector<double>& steps, const RngStream& master);

// Median over `repetitions` of the per-call time of fn, each repetition
// running enough calls to last at least `min_batch`.
double median_call_seconds(const std::function<void()>& fn, int repetitions = 5,
                           std::chrono::duration<double> min_batch = std::chrono::microseconds(200));

inline constexpr std::uint64_t default_seed = 20211;

struct Example1Config {
    std::vector<double> gammas{1.25, 1.5, 1.75};
    std::vector<int> exponents{5, 6, 7, 8, 9, 10}; // h = 2^-i
    std::size_t replications = 100;
    double p = 2.0;
    double total_time = 1.0;
    std::uint64_t seed = default_seed;
    bool measure_time = true;
};

struct TimingRow {
    std::optional<double> gamma;
    Rule rule = Rule::ctq;
    int exponent = 0;
    double step = 0.0;
    std::size_t intervals = 0;
    double wall_time = 0.0;
};

struct Example1Result {
    struct PerGamma {
        double gamma = 0.0;
        ConvergenceReport ctq_absolute;
        ConvergenceReport rtq_lp;
        ConvergenceReport rtq_pathwise;
    };
    std::vector<PerGamma> per_gamma;
    std::vector<TimingRow> timing;
};

Example1Result run_example1(const Example1Config& config);

struct Example2Config {
    int fine_exponent = 14; // h_ref = 2^-fine_exponent
    std::vector<int> exponents{5, 6, 7, 8, 9, 10};
    std::uint64_t seed = default_seed;
    bool measure_time = true;
    // Replaces the sampled path (T = 1 grid with matching h_ref) when set.
    std::optional<BrownianPath> path_override;
};

struct MirrorRow {
    int exponent = 0;
    std::size_t intervals = 0;
    std::size_t exact = 0;
    std::size_t bridged = 0;
};

struct Example2Result {
    BrownianPath path;
    double reference = 0.0;
    ConvergenceReport ctq_pathwise;
    ConvergenceReport rtq_pathwise;
    std::vector<TimingRow> timing;
    std::vector<MirrorRow> mirror;
};

// Rungs with zero error stay in the ladders. When fewer than two rungs have a
// nonzero error the fitted order and intercept are NaN and a warning is attached.
Example2Result run_example2(const Example2Config& config);

} // namespace rtquad
