#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rtquad {

using Vector = std::vector<double>;

// Writes g(t) (or its derivative) into `out`, whose size equals the dimension.
using VectorFunction = std::function<void(double t, std::span<double> out)>;

// An R^d-valued function on [0, T]. Evaluation must be pure.
struct Integrand {
    std::string label;
    std::size_t dimension = 1;
    VectorFunction evaluate;
    std::optional<VectorFunction> derivative;
    // t -> \int_0^t g(s) ds, when known in closed form.
    std::optional<VectorFunction> primitive;
    std::optional<Vector> exact_integral;
    std::vector<std::string> warnings;

    [[nodiscard]] Vector operator()(double t) const;
    [[nodiscard]] double scalar(double t) const;

    // Exact \int_0^t g when a primitive is available.
    [[nodiscard]] std::optional<Vector> integral_to(double t) const;

    static Integrand from_scalar(std::string label, std::function<double(double)> g,
                                 std::function<double(double)> derivative = {},
                                 std::function<double(double)> primitive = {},
                                 std::optional<double> exact_integral = std::nullopt);
};

// Built-in simple integrands used by tests, the CLI and diagnostics.
Integrand constant_integrand(double c, double total_time);
Integrand affine_integrand(double a, double b, double total_time);
Integrand zero_integrand(double total_time);

} // namespace rtquad
