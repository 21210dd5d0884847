#include "rtquad/quadrature.hpp"

#include <cmath>
#include <string>

#include "rtquad/csv.hpp"
#include "rtquad/summation.hpp"

namespace rtquad {

std::string_view to_string(Rule rule) {
    switch (rule) {
    case Rule::ctq:
        return "CTQ";
    case Rule::rtq:
        return "RTQ";
    }
    return "?";
}

namespace {

// Where an evaluation happened; only rendered to text on failure.
struct Site {
    enum Kind { node, offset, complement } kind;
    std::size_t index;

    [[nodiscard]] std::string describe() const {
        switch (kind) {
        case node:
            return "node " + std::to_string(index);
        case offset:
            return "offset in interval " + std::to_string(index);
        case complement:
            return "complementary offset in interval " + std::to_string(index);
        }
        return {};
    }
};

class Accumulator {
public:
    explicit Accumulator(const Integrand& g) : g_(g), sums_(g.dimension), scratch_(g.dimension) {}

    void add(double t, double weight, Site site) {
        g_.evaluate(t, scratch_);
        ++evaluations_;
        for (std::size_t k = 0; k < scratch_.size(); ++k) {
            if (!std::isfinite(scratch_[k])) {
                throw NumericError("integrand '" + g_.label + "' is not finite at t=" +
                                   format_double(t) + " (" + site.describe() + ")");
            }
            sums_[k].add(weight == 1.0 ? scratch_[k] : weight * scratch_[k]);
        }
    }

    QuadratureValue result(double scale, Rule rule) const {
        QuadratureValue out;
        out.rule = rule;
        out.evaluations = evaluations_;
        out.value.resize(sums_.size());
        for (std::size_t k = 0; k < sums_.size(); ++k) {
            out.value[k] = scale * sums_[k].value();
        }
        return out;
    }

private:
    const Integrand& g_;
    std::vector<CompensatedSum> sums_;
    Vector scratch_;
    std::size_t evaluations_ = 0;
};

void require_tau(const Partition& part, const TauSequence& tau) {
    if (tau.size() < part.intervals()) {
        throw std::invalid_argument("rtq: tau sequence has " + std::to_string(tau.size()) +
                                    " values but the partition has " +
                                    std::to_string(part.intervals()) + " intervals");
    }
}

template <class OnPrefix>
QuadratureValue rtq_kernel(const Integrand& g, const Partition& part, const TauSequence& tau,
                           OnPrefix&& on_prefix) {
    require_tau(part, tau);
    const double h = part.step();
    const double half_h = 0.5 * h;
    Accumulator acc(g);
    for (std::size_t i = 0; i < part.intervals(); ++i) {
        const double left = part.node(i);
        acc.add(left + tau[i] * h, 1.0, {Site::offset, i});
        acc.add(left + tau.complement(i) * h, 1.0, {Site::complement, i});
        on_prefix(acc, half_h);
    }
    return acc.result(half_h, Rule::rtq);
}

} // namespace

QuadratureValue ctq(const Integrand& g, const Partition& part, CtqForm form) {
    const std::size_t n = part.intervals();
    const double h = part.step();
    Accumulator acc(g);
    if (form == CtqForm::literal) {
        for (std::size_t i = 0; i < n; ++i) {
            acc.add(part.node(i), 1.0, {Site::node, i});
            acc.add(part.node(i + 1), 1.0, {Site::node, i + 1});
        }
        return acc.result(0.5 * h, Rule::ctq);
    }
    acc.add(part.node(0), 0.5, {Site::node, 0});
    for (std::size_t j = 1; j < n; ++j) {
        acc.add(part.node(j), 1.0, {Site::node, j});
    }
    acc.add(part.node(n), 0.5, {Site::node, n});
    return acc.result(h, Rule::ctq);
}

QuadratureValue rtq(const Integrand& g, const Partition& part, const TauSequence& tau) {
    return rtq_kernel(g, part, tau, [](const Accumulator&, double) {});
}

std::vector<QuadratureValue> rtq_prefix(const Integrand& g, const Partition& part,
                                        const TauSequence& tau) {
    std::vector<QuadratureValue> prefix;
    prefix.reserve(part.intervals());
    rtq_kernel(g, part, tau, [&](const Accumulator& acc, double scale) {
        prefix.push_back(acc.result(scale, Rule::rtq));
    });
    return prefix;
}

} // namespace rtquad
