#pragma once

// The four integral transforms connecting a generating density h, the flag
// function R of projection curvature radii, and the support function H:
//
//   forward map       R(omega, psi) = 2 * integral over the great circle
//                     S_omega of cos^2(psi - phi) h(phi) d(phi)
//   Lindquist margin  min over (omega, psi) of the same integral without
//                     the factor 2; nonnegative iff h generates a body
//   consistency       R(omega, psi) = Rbar(omega)/2
//                     - (1/2pi) int_0^{pi/2} [ int_0^{2pi} Rbar((nu,phi)_omega)
//                       cos 2(phi-psi) d(phi) ] d(nu)/cos(nu)
//   density recovery  f(Omega) = (1/8pi^2) [ int_{S_Omega} Fbar d(tau)
//                     - int_0^{pi/2} (1-sin u)/sin u [ int_0^{2pi}
//                       d/du Fbar((u,tau)_Omega) d(tau) ] du ]
//   support           H(xi) = integral over S^2 of |<xi, Omega>| h(Omega)
//
// Both singular transforms integrate the inner angular variable FIRST; the
// inner integral vanishes fast enough at the singular end (order cos^2(nu)
// at nu -> pi/2, order u at u -> 0) that the outer weight is integrable, and
// the outer Gauss-Legendre rules never place a node on the singular point.
// The loop order is load-bearing; do not exchange it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "flagrecon/errors.hpp"
#include "flagrecon/flag_field.hpp"
#include "flagrecon/geometry.hpp"
#include "flagrecon/grid.hpp"
#include "flagrecon/parallel.hpp"
#include "flagrecon/quadrature.hpp"
#include "flagrecon/rng.hpp"
#include "flagrecon/scalar_field.hpp"

namespace flagrecon {

inline constexpr double kBlowupBound = 1e12;
inline constexpr double kFiniteDiffStep = 1e-4;

// Tangent harmonics of the circle integral of Eq-style forward data:
// a0 = integral of h over S_omega, (a2, b2) = its second circular harmonic,
// so that R(omega, psi) = a0 + a2 cos(2 psi) + b2 sin(2 psi).
inline FlagCoeffs projection_coeffs(const ScalarField& h, const Direction& omega, int n_lon) {
    const TangentFrame f = canonical_frame(omega);
    const double dphi = kTwoPi / n_lon;
    FlagCoeffs c;
    for (int j = 0; j < n_lon; ++j) {
        const double phi = dphi * j;
        const double cp = std::cos(phi), sp = std::sin(phi);
        const Direction p = Direction::from_unit(f.e1.vec() * cp + f.e2.vec() * sp);
        const double v = h.evaluate(p);
        c.a0 += v;
        c.a2 += v * (cp * cp - sp * sp);  // cos(2 phi)
        c.b2 += v * (2.0 * cp * sp);      // sin(2 phi)
    }
    c.a0 *= dphi;
    c.a2 *= dphi;
    c.b2 *= dphi;
    return c;
}

// Projection curvature radius of the body generated by h, at one flag.
inline double projection_radius(const ScalarField& h, const Flag& flag, int n_lon = kDefaultNLon) {
    const TangentFrame f = canonical_frame(flag.omega);
    const double dphi = kTwoPi / n_lon;
    double acc = 0.0;
    for (int j = 0; j < n_lon; ++j) {
        const double phi = dphi * j;
        const Direction p =
            Direction::from_unit(f.e1.vec() * std::cos(phi) + f.e2.vec() * std::sin(phi));
        const double c = std::cos(flag.psi - phi);
        acc += c * c * h.evaluate(p);
    }
    return 2.0 * acc * dphi;
}

// min over all grid omega and all psi of the great-circle cos^2 integral of
// h; the psi-minimum is the exact closed form a0 - sqrt(a2^2 + b2^2) of the
// tangent harmonics, halved because the defining integral is R/2.
inline double lindquist_margin(const ScalarField& h, const SphereGrid& grid) {
    std::vector<double> margins(grid.node_count());
    parallel_for(grid.node_count(), [&](std::size_t i) {
        margins[i] = 0.5 * projection_coeffs(h, grid.direction(i), grid.n_lon()).psi_min();
    });
    double m = margins[0];
    for (double v : margins) m = std::min(m, v);
    return m;
}

// A density together with its body-validity data.
struct GeneratingDensity {
    ScalarField field;
    SphereGrid grid;
    double lindquist_margin = 0.0;
    double sup_norm = 0.0;

    double positivity_tol() const { return 1e-9 * sup_norm; }
    bool body_valid() const { return lindquist_margin >= -positivity_tol(); }
};

inline GeneratingDensity make_density(ScalarField h, const SphereGrid& grid) {
    GeneratingDensity d{std::move(h), grid, 0.0, 0.0};
    d.lindquist_margin = lindquist_margin(d.field, grid);
    for (std::size_t i = 0; i < grid.node_count(); ++i)
        d.sup_norm = std::max(d.sup_norm, std::abs(d.field.evaluate(grid.direction(i))));
    return d;
}

inline double projection_radius(const GeneratingDensity& h, const Flag& flag) {
    return projection_radius(h.field, flag, h.grid.n_lon());
}

// Forward map evaluated at every grid node. No tangent quadrature is needed:
// the circle harmonics are the flag coefficients exactly.
inline FlagField forward_field(const GeneratingDensity& h) {
    const SphereGrid& grid = h.grid;
    std::vector<FlagCoeffs> coeffs(grid.node_count());
    parallel_for(grid.node_count(), [&](std::size_t i) {
        coeffs[i] = projection_coeffs(h.field, grid.direction(i), grid.n_lon());
    });
    return FlagField(grid, std::move(coeffs));
}

// Consistency right-hand side restricted to one base direction, expressed in
// tangent harmonics: rhs(psi) = a0 + a2 cos(2 psi) + b2 sin(2 psi). The
// inner longitude integral runs first (periodic trapezoid); it annihilates
// the constant and first-harmonic parts of Fbar near the pole, so the
// integrand of the outer 1/cos(nu)-weighted Gauss-Legendre rule stays
// bounded.
inline FlagCoeffs consistency_rhs_coeffs(const ScalarField& fbar, const Direction& omega,
                                         const QuadratureRule& nu_rule, int n_lon) {
    const TangentFrame f = canonical_frame(omega);
    const double dphi = kTwoPi / n_lon;
    double ic = 0.0, is = 0.0;
    for (std::size_t k = 0; k < nu_rule.size(); ++k) {
        const double nu = nu_rule.nodes[k];
        const double cn = std::cos(nu), sn = std::sin(nu);
        double ring_c = 0.0, ring_s = 0.0;
        for (int j = 0; j < n_lon; ++j) {
            const double phi = dphi * j;
            const double cp = std::cos(phi), sp = std::sin(phi);
            const Direction p = Direction::from_unit(
                f.e1.vec() * (cn * cp) + f.e2.vec() * (cn * sp) + omega.vec() * sn);
            const double v = fbar.evaluate(p);
            if (!(std::abs(v) / cn < kBlowupBound))
                throw NumericalBlowup("consistency transform: integrand magnitude exceeds bound");
            ring_c += v * (cp * cp - sp * sp);
            ring_s += v * (2.0 * cp * sp);
        }
        ic += nu_rule.weights[k] * ring_c * dphi / cn;
        is += nu_rule.weights[k] * ring_s * dphi / cn;
    }
    FlagCoeffs c;
    c.a0 = 0.5 * fbar.evaluate(omega);
    c.a2 = -ic / kTwoPi;
    c.b2 = -is / kTwoPi;
    return c;
}

inline double consistency_rhs(const ScalarField& fbar, const Flag& flag,
                              int n_lat = kDefaultNLat, int n_lon = kDefaultNLon) {
    const QuadratureRule nu_rule = gauss_legendre(n_lat, 0.0, kHalfPi);
    return consistency_rhs_coeffs(fbar, flag.omega, nu_rule, n_lon).at(flag.psi);
}

struct ConsistencyReport {
    double max_residual = 0.0;
    // Residual split by tangent harmonic over the grid nodes: constant part,
    // second harmonic, and everything else (exactly the energy of ingested
    // non-{0,2} harmonics; zero for fields built by this library).
    double h0 = 0.0;
    double h2 = 0.0;
    double other = 0.0;
    int samples = 0;
    int n_lat = 0;
    int n_lon = 0;
    int lmax = 0;
    std::uint64_t seed = 0;
};

// Residual of the consistency identity over all grid nodes (at psi = 0,
// pi/4, pi/2, via exact nodal harmonics) plus seeded random flags (via the
// interpolating evaluator). Report-only: asymmetric input inflates the
// residual instead of throwing.
inline ConsistencyReport consistency_residual(const FlagField& field, int sample_count,
                                              std::uint64_t seed = 12345,
                                              int lmax = kDefaultLmax) {
    const SphereGrid& grid = field.grid();
    std::vector<double> means(grid.node_count());
    for (std::size_t i = 0; i < means.size(); ++i) means[i] = 2.0 * field.node(i).a0;
    const ScalarField fbar = analyze_projection(grid, means, lmax).field;

    const QuadratureRule nu_rule = gauss_legendre(grid.n_lat(), 0.0, kHalfPi);

    ConsistencyReport rep;
    rep.samples = sample_count;
    rep.n_lat = grid.n_lat();
    rep.n_lon = grid.n_lon();
    rep.lmax = lmax;
    rep.seed = seed;
    rep.other = field.hook_amplitude();

    // Grid nodes: nodal tangent harmonics against the transform's harmonics.
    std::vector<FlagCoeffs> rhs(grid.node_count());
    parallel_for(grid.node_count(), [&](std::size_t i) {
        rhs[i] = consistency_rhs_coeffs(fbar, grid.direction(i), nu_rule, grid.n_lon());
    });
    const double psis[3] = {0.0, 0.25 * kPi, 0.5 * kPi};
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const FlagCoeffs& lhs = field.node(i);
        rep.h0 = std::max(rep.h0, std::abs(lhs.a0 - rhs[i].a0));
        rep.h2 = std::max(rep.h2, std::hypot(lhs.a2 - rhs[i].a2, lhs.b2 - rhs[i].b2));
        for (double psi : psis) {
            double lv = lhs.at(psi);
            lv += field.hook_a4() * std::cos(4.0 * psi) + field.hook_b4() * std::sin(4.0 * psi);
            rep.max_residual = std::max(rep.max_residual, std::abs(lv - rhs[i].at(psi)));
        }
    }

    // Random flags, reproducible from the seed and independent of the grid.
    Lcg rng(seed);
    std::vector<Flag> flags;
    flags.reserve(static_cast<std::size_t>(std::max(0, sample_count)));
    for (int s = 0; s < sample_count; ++s) flags.push_back(rng.flag());
    std::vector<double> residual(flags.size());
    parallel_for(flags.size(), [&](std::size_t s) {
        const double lhs = field.evaluate(flags[s]);
        const double r =
            consistency_rhs_coeffs(fbar, flags[s].omega, nu_rule, grid.n_lon()).at(flags[s].psi);
        residual[s] = std::abs(lhs - r);
    });
    for (double r : residual) rep.max_residual = std::max(rep.max_residual, r);
    return rep;
}

// Recovers the generating density from the tangent mean Fbar of a flag
// function. The inner circle integral of the poleward derivative runs
// first; it vanishes linearly at u -> 0 because the circle average of the
// poleward derivative of an even function is zero, taming the
// (1 - sin u)/sin u weight. The outer Gauss-Legendre rule is open at u = 0.
inline GeneratingDensity blaschke_density(const ScalarField& fbar, const SphereGrid& grid) {
    const QuadratureRule u_rule = gauss_legendre(grid.n_lat(), 0.0, kHalfPi);
    const int n_lon = grid.n_lon();
    const double dtau = kTwoPi / n_lon;
    const double fd = kFiniteDiffStep;

    std::vector<double> values(grid.node_count());
    parallel_for(grid.node_count(), [&](std::size_t i) {
        const Direction pole = grid.direction(i);
        const TangentFrame f = canonical_frame(pole);

        // Equator directions of the pole-relative coordinates, reused by
        // every latitude ring of this node.
        std::vector<Vec3> ring(static_cast<std::size_t>(n_lon));
        for (int j = 0; j < n_lon; ++j) {
            const double tau = dtau * j;
            ring[static_cast<std::size_t>(j)] =
                f.e1.vec() * std::cos(tau) + f.e2.vec() * std::sin(tau);
        }

        double equator = 0.0;
        for (int j = 0; j < n_lon; ++j)
            equator += fbar.evaluate(Direction::from_unit(ring[static_cast<std::size_t>(j)]));
        equator *= dtau;

        double singular = 0.0;
        for (std::size_t k = 0; k < u_rule.size(); ++k) {
            const double u = u_rule.nodes[k];
            const double cu_p = std::cos(u + fd), su_p = std::sin(u + fd);
            const double cu_m = std::cos(u - fd), su_m = std::sin(u - fd);
            double ring_sum = 0.0;
            for (int j = 0; j < n_lon; ++j) {
                const Vec3& c = ring[static_cast<std::size_t>(j)];
                const double hi =
                    fbar.evaluate(Direction::from_unit(c * cu_p + pole.vec() * su_p));
                const double lo =
                    fbar.evaluate(Direction::from_unit(c * cu_m + pole.vec() * su_m));
                ring_sum += (hi - lo) / (2.0 * fd);
            }
            ring_sum *= dtau;
            const double weighted = ring_sum * (1.0 - std::sin(u)) / std::sin(u);
            if (!(std::abs(weighted) < kBlowupBound))
                throw NumericalBlowup("density recovery: integrand magnitude exceeds bound");
            singular += u_rule.weights[k] * weighted;
        }

        values[i] = (equator - singular) / (8.0 * kPi * kPi);
    });

    ScalarField f = analyze(grid, values, fbar.lmax());
    return make_density(std::move(f), grid);
}

// Support function H(xi) of the body generated by h. The sphere quadrature
// is re-aligned with xi as pole and split at the equator into two
// Gauss-Legendre latitude bands, so the kink of |<xi, .>| lies on a band
// boundary and each band sees a smooth integrand.
class SupportEvaluator {
  public:
    explicit SupportEvaluator(const GeneratingDensity& density)
        : field_(density.field),
          n_lon_(density.grid.n_lon()),
          band_rule_(gauss_legendre(std::max(2, density.grid.n_lat() / 2), 0.0, 1.0)),
          lindquist_margin_(density.lindquist_margin),
          body_valid_(density.body_valid()) {}

    bool body_valid() const { return body_valid_; }
    double lindquist_margin() const { return lindquist_margin_; }

    // H on unit vectors.
    double operator()(const Direction& xi) const {
        const TangentFrame f = canonical_frame(xi);
        const double dphi = kTwoPi / n_lon_;
        double acc = 0.0;
        for (std::size_t k = 0; k < band_rule_.size(); ++k) {
            const double s = band_rule_.nodes[k];  // |<xi, p>| on both bands
            const double rho = std::sqrt(std::max(0.0, 1.0 - s * s));
            double ring = 0.0;
            for (int j = 0; j < n_lon_; ++j) {
                const double phi = dphi * j;
                const Vec3 t = f.e1.vec() * (rho * std::cos(phi)) + f.e2.vec() * (rho * std::sin(phi));
                ring += field_.evaluate(Direction::from_unit(t + xi.vec() * s));
                ring += field_.evaluate(Direction::from_unit(t - xi.vec() * s));
            }
            acc += band_rule_.weights[k] * s * ring * dphi;
        }
        return acc;
    }

    // Positively homogeneous extension to all of R^3 minus the origin.
    double homogeneous(const Vec3& v) const {
        const double n = v.norm();
        return n * (*this)(Direction(v));
    }

  private:
    ScalarField field_;
    int n_lon_;
    QuadratureRule band_rule_;
    double lindquist_margin_;
    bool body_valid_;
};

}  // namespace flagrecon
