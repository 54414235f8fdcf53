#pragma once

// Gauss-Legendre rules (Newton iteration on the Legendre recurrence) and the
// periodic trapezoid rule used for longitude integrals. Gauss-Legendre node
// sets are computed for half the interval and mirrored, so the rule is
// exactly symmetric about the midpoint.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "flagrecon/geometry.hpp"

namespace flagrecon {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    const int half = (n + 1) / 2;
    for (int k = 0; k < half; ++k) {
        // Tricomi-style initial guess for the k-th root in (0, 1].
        double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x).
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // One clean evaluation of P'_n at the converged node for the weight.
        {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out in descending order; store ascending and mirrored.
        rule.nodes[static_cast<std::size_t>(n - 1 - k)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - k)] = w;
        rule.nodes[static_cast<std::size_t>(k)] = -x;
        rule.weights[static_cast<std::size_t>(k)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

// Gauss-Legendre rule mapped to [a, b]. Open rule: no node touches a or b.
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.nodes[i] = mid + halfw * rule.nodes[i];
        rule.weights[i] *= halfw;
    }
    return rule;
}

// Node angles of the n-point periodic trapezoid rule on [0, 2*pi); every
// node carries weight 2*pi/n.
inline std::vector<double> periodic_angles(int n) {
    if (n < 1) throw std::invalid_argument("periodic_angles: n must be >= 1");
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] = kTwoPi * j / n;
    return a;
}

}  // namespace flagrecon
