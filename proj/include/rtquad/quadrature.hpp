#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtquad/integrand.hpp"
#include "rtquad/partition.hpp"
#include "rtquad/random.hpp"

namespace rtquad {

enum class Rule { ctq, rtq };

std::string_view to_string(Rule rule);

// Raised when an integrand returns a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureValue {
    Vector value;
    Rule rule = Rule::ctq;
    std::size_t evaluations = 0;

    [[nodiscard]] double scalar() const { return value.at(0); }
};

enum class CtqForm {
    // (h/2) sum (g(t_i) + g(t_{i+1})): 2N evaluations, same cost model as RTQ.
    literal,
    // Interior nodes evaluated once with weight h: N+1 evaluations.
    shared_nodes,
};

// Classical trapezoidal rule.
QuadratureValue ctq(const Integrand& g, const Partition& part, CtqForm form = CtqForm::literal);

// Randomised trapezoidal rule: (h/2) sum g(t_i + tau_i h) + g(t_i + (1 - tau_i) h).
// Throws std::invalid_argument when tau has fewer than N values.
QuadratureValue rtq(const Integrand& g, const Partition& part, const TauSequence& tau);

// Partial sums RQ^{tau,n} for n = 1..N (index n-1 in the result). The last
// element is bitwise equal to rtq(g, part, tau).
std::vector<QuadratureValue> rtq_prefix(const Integrand& g, const Partition& part,
                                        const TauSequence& tau);

} // namespace rtquad
