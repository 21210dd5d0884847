#include "rtquad/integrand.hpp"

#include <utility>

namespace rtquad {

Vector Integrand::operator()(double t) const {
    Vector out(dimension);
    evaluate(t, out);
    return out;
}

double Integrand::scalar(double t) const {
    double out = 0.0;
    evaluate(t, std::span<double>(&out, 1));
    return out;
}

std::optional<Vector> Integrand::integral_to(double t) const {
    if (!primitive) {
        return std::nullopt;
    }
    Vector out(dimension);
    (*primitive)(t, out);
    return out;
}

namespace {

VectorFunction lift(std::function<double(double)> f) {
    return [f = std::move(f)](double t, std::span<double> out) { out[0] = f(t); };
}

} // namespace

Integrand Integrand::from_scalar(std::string label, std::function<double(double)> g,
                                 std::function<double(double)> derivative,
                                 std::function<double(double)> primitive,
                                 std::optional<double> exact_integral) {
    Integrand result;
    result.label = std::move(label);
    result.dimension = 1;
    result.evaluate = lift(std::move(g));
    if (derivative) {
        result.derivative = lift(std::move(derivative));
    }
    if (primitive) {
        result.primitive = lift(std::move(primitive));
    }
    if (exact_integral) {
        result.exact_integral = Vector{*exact_integral};
    }
    return result;
}

Integrand constant_integrand(double c, double total_time) {
    return Integrand::from_scalar(
        "constant", [c](double) { return c; }, [](double) { return 0.0; },
        [c](double t) { return c * t; }, c * total_time);
}

Integrand affine_integrand(double a, double b, double total_time) {
    return Integrand::from_scalar(
        "affine", [a, b](double t) { return a + b * t; }, [b](double) { return b; },
        [a, b](double t) { return a * t + 0.5 * b * t * t; },
        a * total_time + 0.5 * b * total_time * total_time);
}

Integrand zero_integrand(double total_time) {
    auto g = constant_integrand(0.0, total_time);
    g.label = "zero";
    return g;
}

} // namespace rtquad
