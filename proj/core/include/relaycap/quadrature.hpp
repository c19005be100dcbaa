#pragma once

#include <cstddef>
#include <vector>

namespace relaycap {

/// Gauss-Legendre abscissas and weights on [0, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule on [0, 1]; roots found by Newton iteration on the Legendre
/// recurrence. Results are cached per n.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Integrates f over [a, b] with the n-point rule.
template <typename F>
double integrate(F&& f, double a, double b, const GaussLegendre& rule) {
    const double span = b - a;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(a + span * rule.nodes[i]);
    }
    return span * acc;
}

}  // namespace relaycap
