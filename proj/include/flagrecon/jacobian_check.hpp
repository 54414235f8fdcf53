#pragma once

// Numerical validation of the change-of-variables used by the half-circle
// sweep construction. Circles of spherical distance pi/2 - u about equator
// points sweep the latitude band |sin(nu)| < cos(u); on that band the sweep
// parameters (tau = position on the circle, phi_c = circle center) relate to
// latitude/longitude (nu, phi) by
//
//     d(tau) d(phi_c) = cos(nu) / sqrt(cos(u)^2 - sin(nu)^2) d(nu) d(phi).
//
// The check partitions the band into cells, estimates each cell's swept area
// two independent ways - midpoint quadrature of the weight above, and the
// exact tau-extent tau(nu) = acos(sin(nu)/cos(u)) from the circle geometry -
// and reports the worst patch discrepancy relative to the total swept area.
// The weight has an integrable inverse-square-root rim singularity, so the
// two cells touching the rim are excluded from evaluation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "flagrecon/errors.hpp"
#include "flagrecon/geometry.hpp"

namespace flagrecon {

struct JacobianBandReport {
    double max_rel_residual = 0.0;  // worst |cell discrepancy| / total swept area
    double band_area_weight = 0.0;  // midpoint-rule mass over evaluated cells
    double band_area_geom = 0.0;    // exact swept mass over the same cells
    int evaluated_cells = 0;
};

namespace detail {

inline double rim_distance(double u, double nu) {
    const double cu = std::cos(u);
    const double d = cu * cu - std::sin(nu) * std::sin(nu);
    if (d <= 1e-14)
        throw NumericalBlowup("jacobian check: evaluation point too close to the band rim");
    return d;
}

inline double band_weight(double u, double nu) {
    return std::cos(nu) / std::sqrt(rim_distance(u, nu));
}

// tau-extent of the half-circle sweep up to latitude nu.
inline double band_tau(double u, double nu) {
    const double x = std::clamp(std::sin(nu) / std::cos(u), -1.0, 1.0);
    return std::acos(x);
}

}  // namespace detail

inline JacobianBandReport jacobian_band_report(double u, int n_nu, int n_phi) {
    if (!(u > 0.0 && u < kHalfPi))
        throw std::invalid_argument("jacobian check: u must lie in (0, pi/2)");
    if (n_nu < 4 || n_phi < 1)
        throw std::invalid_argument("jacobian check: need n_nu >= 4 and n_phi >= 1");

    const double nu_rim = std::asin(std::cos(u));
    const double dnu = 2.0 * nu_rim / n_nu;
    const double dphi = kTwoPi / n_phi;

    JacobianBandReport rep;
    double worst = 0.0;
    for (int i = 1; i + 1 < n_nu; ++i) {  // skip the two rim cells
        const double nu_lo = -nu_rim + i * dnu;
        const double nu_hi = nu_lo + dnu;
        const double nu_mid = 0.5 * (nu_lo + nu_hi);
        detail::rim_distance(u, nu_lo);
        detail::rim_distance(u, nu_hi);
        const double a_weight = detail::band_weight(u, nu_mid) * dnu * dphi;
        const double a_geom = (detail::band_tau(u, nu_lo) - detail::band_tau(u, nu_hi)) * dphi;
        worst = std::max(worst, std::abs(a_weight - a_geom));
        rep.band_area_weight += a_weight * n_phi;
        rep.band_area_geom += a_geom * n_phi;
        rep.evaluated_cells += n_phi;
    }
    rep.max_rel_residual = worst / rep.band_area_geom;
    return rep;
}

inline double jacobian_identity_residual(double u, int n_nu, int n_phi) {
    return jacobian_band_report(u, n_nu, n_phi).max_rel_residual;
}

// Integrates a test function g(nu, phi) over the evaluated band both ways:
// first with the per-cell closed-form mass of the latitude weight, second by
// sweeping a fine (tau, circle-center) grid through the circle geometry and
// accumulating d(tau) d(phi_c) patch areas at the mapped points.
inline std::pair<double, double> integrate_band_both_ways(
    double u, const std::function<double(double, double)>& g, int n_nu, int n_phi,
    int fine = 16) {
    if (n_nu < 4 || n_phi < 1 || fine < 1)
        throw std::invalid_argument("jacobian check: bad grid sizes");
    const double nu_rim = std::asin(std::cos(u));
    const double su = std::sin(u), cu = std::cos(u);
    const double dnu = 2.0 * nu_rim / n_nu;
    const double dphi = kTwoPi / n_phi;

    double via_weight = 0.0, via_sweep = 0.0;
    for (int i = 1; i + 1 < n_nu; ++i) {
        const double nu_lo = -nu_rim + i * dnu;
        const double nu_hi = nu_lo + dnu;
        const double nu_mid = 0.5 * (nu_lo + nu_hi);
        (void)detail::band_weight(u, nu_mid);  // rim guard
        const double mass =
            std::asin(std::clamp(std::sin(nu_hi) / cu, -1.0, 1.0)) -
            std::asin(std::clamp(std::sin(nu_lo) / cu, -1.0, 1.0));

        const double tau_hi = detail::band_tau(u, nu_lo);  // tau decreases with nu
        const double tau_lo = detail::band_tau(u, nu_hi);
        const double dtau = (tau_hi - tau_lo) / fine;
        for (int j = 0; j < n_phi; ++j) {
            const double phi_mid = (j + 0.5) * dphi;
            via_weight += g(nu_mid, phi_mid) * mass * dphi;

            // Fine sweep: map (tau, phi_c) midpoints through the circle.
            const double phi_c = phi_mid;  // circle center longitude
            for (int k = 0; k < fine; ++k) {
                const double tau = tau_lo + (k + 0.5) * dtau;
                const double nu = std::asin(std::clamp(cu * std::cos(tau), -1.0, 1.0));
                // Mapped point of the circle about center (0, phi_c):
                // p = sin(u)*c + cos(u)*(cos(tau)*pole + sin(tau)*c').
                const double px = su * std::cos(phi_c) - cu * std::sin(tau) * std::sin(phi_c);
                const double py = su * std::sin(phi_c) + cu * std::sin(tau) * std::cos(phi_c);
                double phi = std::atan2(py, px);
                if (phi < 0.0) phi += kTwoPi;
                via_sweep += g(nu, phi) * dtau * dphi;
            }
        }
    }
    return {via_weight, via_sweep};
}

}  // namespace flagrecon
