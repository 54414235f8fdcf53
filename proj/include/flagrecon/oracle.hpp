#pragma once

// Synthetic inputs with known answers, plus dense brute-force quadratures
// kept separate from the production integration paths so that agreement in
// tests is evidence rather than tautology.
//
// Sphere of radius r: density r/(2*pi), flag function identically r,
// support function identically r.
//
// Harmonic densities: a positive constant plus seeded even-degree noise,
// h = 1/(2*pi) * (1 + s * p). Every node's Lindquist value is affine in the
// scale s with common intercept, so the min over the grid is exactly linear
// in s >= 0 and s solves the margin target in closed form. Coefficient draw
// order (the portable definition): for l = 2, 4, ..., lmax and m = -l..l,
// coefficient = uniform(-1, 1) / (l * (l + 1)) from the Lcg stream.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "flagrecon/errors.hpp"
#include "flagrecon/flag_field.hpp"
#include "flagrecon/geometry.hpp"
#include "flagrecon/grid.hpp"
#include "flagrecon/quadrature.hpp"
#include "flagrecon/rng.hpp"
#include "flagrecon/scalar_field.hpp"
#include "flagrecon/transforms.hpp"

namespace flagrecon {

struct SphereTruth {
    double radius = 0.0;
    GeneratingDensity density;
    FlagField flags;
    double support_value = 0.0;
};

inline SphereTruth make_sphere(double radius, const SphereGrid& grid,
                               int lmax = kDefaultLmax) {
    if (!(radius > 0.0)) throw std::invalid_argument("make_sphere: radius must be positive");
    GeneratingDensity density =
        make_density(ScalarField::constant(radius / kTwoPi, lmax), grid);
    std::vector<FlagCoeffs> coeffs(grid.node_count(), FlagCoeffs{radius, 0.0, 0.0});
    return SphereTruth{radius, std::move(density), FlagField(grid, std::move(coeffs)), radius};
}

inline GeneratingDensity make_harmonic(int lmax, std::uint64_t seed, double margin_target,
                                       const SphereGrid& grid) {
    if (lmax < 2 || lmax % 2 != 0)
        throw std::invalid_argument("make_harmonic: lmax must be even and >= 2");

    const double base_value = 0.5 / kPi;  // unit sphere density; margin 1/2
    if (margin_target >= 0.5)
        throw std::invalid_argument("make_harmonic: margin target must be < 0.5");

    ScalarField noise(lmax);
    Lcg rng(seed);
    for (int l = 2; l <= lmax; l += 2)
        for (int m = -l; m <= l; ++m)
            noise.set(l, m, rng.symmetric() / (static_cast<double>(l) * (l + 1)));

    // Lindquist value of base + s*noise at node i is
    //   1/2 * (1 + s * (A0_i - hypot(A2_i, B2_i)))   for s >= 0,
    // all lines sharing the intercept 1/2, so the grid minimum is linear in
    // s with slope min_i(A0_i - hypot_i)/2.
    double q_min = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const FlagCoeffs c = projection_coeffs(noise, grid.direction(i), grid.n_lon());
        q_min = std::min(q_min, c.a0 - std::hypot(c.a2, c.b2));
    }
    if (!(q_min < 0.0))
        throw Error("make_harmonic: noise field cannot reduce the margin; change the seed");
    const double scale = (2.0 * margin_target - 1.0) / q_min;

    ScalarField h = noise * scale;
    h.set(0, 0, base_value / kY00);
    return make_density(std::move(h), grid);
}

// Projection curvature radius by dense one-dimensional trapezoid quadrature
// of the great-circle cos^2 integral.
inline double brute_force_radius(const ScalarField& h, const Flag& flag, int n_quad = 4096) {
    const TangentFrame f = canonical_frame(flag.omega);
    const double dphi = kTwoPi / n_quad;
    double acc = 0.0;
    for (int j = 0; j < n_quad; ++j) {
        const double phi = dphi * j;
        const Direction p = Direction::from_unit(f.e1.vec() * std::cos(phi) +
                                                 f.e2.vec() * std::sin(phi));
        const double c = std::cos(flag.psi - phi);
        acc += c * c * h.evaluate(p);
    }
    return 2.0 * acc * dphi;
}

// Consistency right-hand side by dense nested quadrature, inner longitude
// integral first (the integration order is part of the definition).
inline double brute_force_consistency_rhs(const ScalarField& fbar, const Flag& flag,
                                          int n_nu = 512, int n_phi = 1024) {
    const TangentFrame f = canonical_frame(flag.omega);
    const QuadratureRule nu_rule = gauss_legendre(n_nu, 0.0, kHalfPi);
    const double dphi = kTwoPi / n_phi;
    double outer = 0.0;
    for (std::size_t k = 0; k < nu_rule.size(); ++k) {
        const double nu = nu_rule.nodes[k];
        const double cn = std::cos(nu), sn = std::sin(nu);
        double inner = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = dphi * j;
            const Direction p =
                Direction::from_unit(f.e1.vec() * (cn * std::cos(phi)) +
                                     f.e2.vec() * (cn * std::sin(phi)) + flag.omega.vec() * sn);
            inner += fbar.evaluate(p) * std::cos(2.0 * (phi - flag.psi));
        }
        outer += nu_rule.weights[k] * inner * dphi / cn;
    }
    return 0.5 * fbar.evaluate(flag.omega) - outer / kTwoPi;
}

// Lindquist margin by scanning: dense tangent-angle grid refined by ternary
// search on the dense cos^2 quadrature, minimized over the given directions.
inline double brute_force_lindquist_margin(const ScalarField& h,
                                           const std::vector<Direction>& omegas,
                                           int n_psi = 256, int n_quad = 2048) {
    double margin = std::numeric_limits<double>::infinity();
    for (const Direction& omega : omegas) {
        const TangentFrame f = canonical_frame(omega);
        std::vector<double> ring(static_cast<std::size_t>(n_quad));
        const double dphi = kTwoPi / n_quad;
        for (int j = 0; j < n_quad; ++j) {
            const double phi = dphi * j;
            ring[static_cast<std::size_t>(j)] = h.evaluate(Direction::from_unit(
                f.e1.vec() * std::cos(phi) + f.e2.vec() * std::sin(phi)));
        }
        const auto value = [&](double psi) {
            double acc = 0.0;
            for (int j = 0; j < n_quad; ++j) {
                const double c = std::cos(psi - dphi * j);
                acc += c * c * ring[static_cast<std::size_t>(j)];
            }
            return acc * dphi;
        };
        // Coarse scan, then ternary refinement around the best sample.
        double best_psi = 0.0, best = value(0.0);
        for (int k = 1; k < n_psi; ++k) {
            const double psi = kPi * k / n_psi;  // period pi
            const double v = value(psi);
            if (v < best) {
                best = v;
                best_psi = psi;
            }
        }
        double lo = best_psi - kPi / n_psi, hi = best_psi + kPi / n_psi;
        for (int iter = 0; iter < 200; ++iter) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (value(m1) < value(m2))
                hi = m2;
            else
                lo = m1;
        }
        margin = std::min(margin, value(0.5 * (lo + hi)));
    }
    return margin;
}

}  // namespace flagrecon
