#include "rtquad/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rtquad/csv.hpp"
#include "rtquad/summation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rtquad {

Integrand power_integrand(double gamma, double total_time) {
    if (!(total_time > 0.0)) {
        throw std::invalid_argument("power integrand: T must be positive");
    }
    auto g = Integrand::from_scalar(
        "power(gamma=" + format_double(gamma) + ")",
        [gamma](double t) { return std::pow(t, gamma); },
        [gamma](double t) { return gamma * std::pow(t, gamma - 1.0); },
        [gamma](double t) { return std::pow(t, gamma + 1.0) / (gamma + 1.0); },
        std::pow(total_time, gamma + 1.0) / (gamma + 1.0));
    if (!(gamma > 1.0)) {
        g.warnings.push_back("gamma = " + format_double(gamma) +
                             " <= 1: t^gamma is not in W^{sigma,p} for any sigma > 1, "
                             "convergence-order claims do not apply");
    }
    return g;
}

BrownianIntegrand::BrownianIntegrand(BrownianPath path)
    : path_(std::make_shared<const BrownianPath>(std::move(path))) {
    path_->validate();
    const auto& grid = path_->grid;
    prefix_.assign(grid.size(), 0.0);
    sum_head_.assign(grid.size(), 0.0);
    sum_tail_.assign(grid.size(), 0.0);
    CompensatedSum running;
    for (std::size_t n = 1; n < grid.size(); ++n) {
        running.add(grid[n - 1]);
        sum_head_[n] = running.head();
        sum_tail_[n] = running.tail();
        prefix_[n] = path_->fine_step * running.value();
    }
}

double BrownianIntegrand::operator()(double t) const {
    const auto& p = *path_;
    if (!(t >= 0.0 && t <= p.total_time)) {
        throw std::invalid_argument("g_B: t = " + format_double(t) + " outside [0, " +
                                    format_double(p.total_time) + "]");
    }
    const auto cells = p.cells();
    auto n = static_cast<std::size_t>(std::floor(t / p.fine_step));
    if (n >= cells) {
        return prefix_[cells];
    }
    const double left = p.grid_time(n);
    if (t == left) {
        return prefix_[n];
    }
    if (t == p.grid_time(n + 1)) {
        return prefix_[n + 1];
    }
    return prefix_[n] + p.grid[n] * (t - left);
}

Integrand BrownianIntegrand::as_integrand() const {
    Integrand g;
    g.label = "brownian";
    g.dimension = 1;
    g.evaluate = [self = *this](double t, std::span<double> out) { out[0] = self(t); };
    return g;
}

BrownianIntegrand brownian_integrand(BrownianPath path) {
    return BrownianIntegrand(std::move(path));
}

namespace {

// Fine cells per coarse cell; throws unless the partition nodes are fine nodes.
std::size_t alignment_factor(const BrownianPath& path, const Partition& part) {
    const double ratio = part.step() / path.fine_step;
    const double k = std::round(ratio);
    const bool aligned = k >= 1.0 && std::abs(k - ratio) <= 1e-9 * ratio &&
                         static_cast<std::size_t>(k) * part.intervals() == path.cells() &&
                         std::abs(part.total_time() - path.total_time) <= 1e-12 * path.total_time;
    if (!aligned) {
        throw std::invalid_argument("partition with h = " + format_double(part.step()) +
                                    " is not aligned with the fine grid h_ref = " +
                                    format_double(path.fine_step));
    }
    return static_cast<std::size_t>(k);
}

} // namespace

QuadratureValue ctq_brownian(const BrownianIntegrand& bi, const Partition& part) {
    const auto& path = bi.path();
    const std::size_t k = alignment_factor(path, part);
    const std::size_t n_cells = part.intervals();

    // outer = sum_{n=1}^{N} S_{nk} - S_{Nk} / 2
    CompensatedSum outer;
    for (std::size_t n = 1; n <= n_cells; ++n) {
        outer.add(bi.grid_sum_head(n * k));
        outer.add(bi.grid_sum_tail(n * k));
    }
    outer.add(-0.5 * bi.grid_sum_head(n_cells * k));
    outer.add(-0.5 * bi.grid_sum_tail(n_cells * k));

    QuadratureValue out;
    out.rule = Rule::ctq;
    out.evaluations = n_cells + 1;
    out.value = {part.step() * path.fine_step * outer.value()};
    return out;
}

QuadratureValue rtq_brownian(const BrownianIntegrand& bi, const Partition& part,
                             const CoarseTau& ctau) {
    const auto& path = bi.path();
    const std::size_t k = alignment_factor(path, part);
    const std::size_t n_cells = part.intervals();
    if (ctau.factor != k) {
        throw std::invalid_argument("rtq_brownian: coarse offsets were built for factor " +
                                    std::to_string(ctau.factor) + ", partition needs " +
                                    std::to_string(k));
    }
    const std::size_t available =
        std::min({ctau.values.size(), ctau.selected_values.size(), ctau.mirror_values.size()});
    if (available < n_cells) {
        throw std::invalid_argument("rtq_brownian: no intermediate sample for cell " +
                                    std::to_string(available));
    }

    // G(t_n) sums (scaled by h h_ref) and the B terms (scaled by h^2/4).
    CompensatedSum nodes;
    CompensatedSum bridge_terms;
    for (std::size_t n = 0; n < n_cells; ++n) {
        nodes.add(bi.grid_sum_head(n * k));
        nodes.add(bi.grid_sum_tail(n * k));
        const double tau = ctau.values[n];
        bridge_terms.add(path.grid[n * k]);
        bridge_terms.add(tau * ctau.selected_values[n]);
        bridge_terms.add((1.0 - tau) * ctau.mirror_values[n]);
    }
    const double h = part.step();
    QuadratureValue out;
    out.rule = Rule::rtq;
    out.evaluations = 3 * n_cells;
    out.value = {h * path.fine_step * nodes.value() + 0.25 * h * h * bridge_terms.value()};
    return out;
}

double union_grid_reference(const BrownianIntegrand& bi) {
    const auto& path = bi.path();
    const auto prefix = bi.prefix();
    CompensatedSum sum;
    for (std::size_t j = 0; j < path.cells(); ++j) {
        const double left = path.grid_time(j);
        const double mid = path.mid_time(j);
        const double right = path.grid_time(j + 1);
        const double at_mid = bi(mid);
        sum.add(0.5 * (mid - left) * (prefix[j] + at_mid));
        sum.add(0.5 * (right - mid) * (at_mid + prefix[j + 1]));
    }
    return sum.value();
}

namespace {

double norm(std::span<const double> v) {
    if (v.size() == 1) {
        return std::abs(v[0]);
    }
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

struct SobolevGrid {
    std::size_t cells;
    std::size_t dim;
    double width;
    double cutoff;
    double sigma;
    double p;
    std::vector<double> midpoints;
    std::vector<double> derivatives; // cells x dim, row-major

    double row(std::size_t a) const {
        const double exponent = 1.0 + (sigma - 1.0) * p;
        std::vector<double> diff(dim);
        CompensatedSum sum;
        for (std::size_t b = 0; b < cells; ++b) {
            // A cell is dropped when any part of it lies within the cutoff band.
            const std::size_t apart = a > b ? a - b : b - a;
            if (apart == 0 || static_cast<double>(apart - 1) * width < cutoff * (1.0 - 1e-12)) {
                continue;
            }
            const double distance = std::abs(midpoints[a] - midpoints[b]);
            for (std::size_t k = 0; k < dim; ++k) {
                diff[k] = derivatives[a * dim + k] - derivatives[b * dim + k];
            }
            sum.add(std::pow(norm(diff), p) / std::pow(distance, exponent));
        }
        return sum.value() * width * width;
    }
};

SobolevEstimate sobolev_impl(const Integrand& g, double total_time, double sigma, double p,
                             std::size_t cells, double cutoff, bool parallel) {
    if (!g.derivative) {
        throw UnsupportedOperation("sobolev seminorm: integrand '" + g.label +
                                   "' has no exact derivative");
    }
    if (!(sigma >= 1.0 && sigma < 2.0)) {
        throw std::invalid_argument("sobolev seminorm: sigma must lie in [1, 2)");
    }
    if (!(p >= 2.0) || !std::isfinite(p)) {
        throw std::invalid_argument("sobolev seminorm: p must be >= 2");
    }
    if (cells < 2 || !(total_time > 0.0)) {
        throw std::invalid_argument("sobolev seminorm: need T > 0 and at least 2 cells");
    }
    SobolevGrid grid{cells, g.dimension, total_time / static_cast<double>(cells), cutoff, sigma,
                     p, {}, {}};
    if (!(grid.cutoff > 0.0)) {
        grid.cutoff = 2.0 * grid.width;
    }
    grid.midpoints.resize(cells);
    grid.derivatives.resize(cells * g.dimension);

    CompensatedSum value_sum;
    CompensatedSum derivative_sum;
    Vector scratch(g.dimension);
    for (std::size_t c = 0; c < cells; ++c) {
        const double t = (static_cast<double>(c) + 0.5) * grid.width;
        grid.midpoints[c] = t;
        g.evaluate(t, scratch);
        value_sum.add(std::pow(norm(scratch), p));
        std::span<double> row(grid.derivatives.data() + c * g.dimension, g.dimension);
        (*g.derivative)(t, row);
        derivative_sum.add(std::pow(norm(row), p));
    }

    std::vector<double> rows(cells);
    const auto n = static_cast<std::ptrdiff_t>(cells);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t a = 0; a < n; ++a) {
            rows[static_cast<std::size_t>(a)] = grid.row(static_cast<std::size_t>(a));
        }
    } else {
        for (std::ptrdiff_t a = 0; a < n; ++a) {
            rows[static_cast<std::size_t>(a)] = grid.row(static_cast<std::size_t>(a));
        }
    }
    CompensatedSum double_sum;
    for (double r : rows) {
        double_sum.add(r);
    }

    SobolevEstimate est;
    est.sigma = sigma;
    est.p = p;
    est.cutoff = grid.cutoff;
    est.cells = cells;
    est.value_term = value_sum.value() * grid.width;
    est.derivative_term = derivative_sum.value() * grid.width;
    est.seminorm_term = double_sum.value();
    est.value = std::pow(est.value_term + est.derivative_term + est.seminorm_term, 1.0 / p);
    return est;
}

} // namespace

SobolevEstimate sobolev_seminorm(const Integrand& g, double total_time, double sigma, double p,
                                 std::size_t cells, double cutoff) {
    return sobolev_impl(g, total_time, sigma, p, cells, cutoff, true);
}

SobolevEstimate sobolev_seminorm_serial(const Integrand& g, double total_time, double sigma,
                                        double p, std::size_t cells, double cutoff) {
    return sobolev_impl(g, total_time, sigma, p, cells, cutoff, false);
}

} // namespace rtquad
