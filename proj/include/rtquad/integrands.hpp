#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "rtquad/brownian.hpp"
#include "rtquad/integrand.hpp"
#include "rtquad/partition.hpp"
#include "rtquad/quadrature.hpp"

namespace rtquad {

// g(t) = t^gamma on [0, T]. gamma <= 1 is accepted but the result carries a
// warning since the regularity assumptions no longer hold.
Integrand power_integrand(double gamma, double total_time);

// g_B(t) = \int_0^t B(s) ds approximated by the left-point (Euler) rule on the
// fine grid: G_0 = 0, G_n = G_{n-1} + h_ref B(t_{n-1}).
class BrownianIntegrand {
public:
    explicit BrownianIntegrand(BrownianPath path);

    [[nodiscard]] const BrownianPath& path() const { return *path_; }
    [[nodiscard]] std::span<const double> prefix() const { return prefix_; }

    // G(t) = G_n + B(t_n)(t - t_n) for t in fine cell n. Throws
    // std::invalid_argument outside [0, T].
    [[nodiscard]] double operator()(double t) const;

    [[nodiscard]] Integrand as_integrand() const;

    // S_n = sum_{i<n} B(t_i) as an unevaluated pair head + tail.
    [[nodiscard]] double grid_sum_head(std::size_t n) const { return sum_head_[n]; }
    [[nodiscard]] double grid_sum_tail(std::size_t n) const { return sum_tail_[n]; }

private:
    std::shared_ptr<const BrownianPath> path_;
    std::vector<double> prefix_;
    std::vector<double> sum_head_;
    std::vector<double> sum_tail_;
};

BrownianIntegrand brownian_integrand(BrownianPath path);

// CTQ of g_B on a coarse partition aligned with the fine grid:
// h sum_{n=1}^{N} G(t_n) - (h/2) G(t_N), evaluated from one running prefix
// sum of B. Throws std::invalid_argument on misaligned nodes.
QuadratureValue ctq_brownian(const BrownianIntegrand& bi, const Partition& part);

// RTQ of g_B in expanded form:
// h sum G(t_n) + (h^2/4) sum B(t_n)
//   + (h^2/4) sum (tau_n B(t_n + tau_n h) + (1 - tau_n) B(t_n + (1 - tau_n) h)).
QuadratureValue rtq_brownian(const BrownianIntegrand& bi, const Partition& part,
                             const CoarseTau& ctau);

// Trapezoidal rule of the Euler-evaluated g_B on the union of fine grid points
// and fine intermediate points. Serves as the reference value for g_B.
double union_grid_reference(const BrownianIntegrand& bi);

struct SobolevEstimate {
    double sigma = 0.0;
    double p = 0.0;
    double cutoff = 0.0;
    std::size_t cells = 0;
    double value_term = 0.0;      // \int |g|^p
    double derivative_term = 0.0; // \int |g'|^p
    double seminorm_term = 0.0;   // double integral of the difference quotient
    double value = 0.0;           // (sum of terms)^{1/p}
};

class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Midpoint-rule estimate of the W^{sigma,p}(0,T) norm on a cells x cells grid,
// skipping double-integral cells with |t - s| < cutoff. cutoff <= 0 selects
// the default 2T/cells. Diagnostic only.
SobolevEstimate sobolev_seminorm(const Integrand& g, double total_time, double sigma, double p,
                                 std::size_t cells, double cutoff = 0.0);

// Single-threaded reference for the above; results agree to rounding.
SobolevEstimate sobolev_seminorm_serial(const Integrand& g, double total_time, double sigma,
                                        double p, std::size_t cells, double cutoff = 0.0);

} // namespace rtquad
