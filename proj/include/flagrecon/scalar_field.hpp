#pragma once

// Band-limited even scalar functions on S^2. Only even-degree harmonic
// coefficients are stored, so f(-p) = f(p) holds identically; odd-degree
// content found during analysis is reported (or rejected) as a symmetry
// residual, never stored.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "flagrecon/errors.hpp"
#include "flagrecon/geometry.hpp"
#include "flagrecon/grid.hpp"
#include "flagrecon/harmonics.hpp"

namespace flagrecon {

inline constexpr int kDefaultLmax = 8;
inline constexpr int kDefaultNLat = 32;
inline constexpr int kDefaultNLon = 64;

// Odd-degree energy above 1e-6 of the even-degree energy is a symmetry
// violation; the floor keeps the gate meaningful for all-zero data.
inline constexpr double kSymmetryTol = 1e-6;
inline constexpr double kSymmetryFloor = 1e-30;

class ScalarField {
  public:
    explicit ScalarField(int lmax)
        : lmax_(validated(lmax)),
          coeffs_(even_coeff_count(lmax), 0.0),
          recurrence_(lmax) {}

    ScalarField(int lmax, std::vector<double> coeffs)
        : lmax_(validated(lmax)), coeffs_(std::move(coeffs)), recurrence_(lmax) {
        if (coeffs_.size() != even_coeff_count(lmax_))
            throw std::invalid_argument("ScalarField: coefficient count does not match lmax");
    }

    static ScalarField constant(double value, int lmax = kDefaultLmax) {
        ScalarField f(lmax);
        f.set(0, 0, value / kY00);  // Y00 is constant 1/sqrt(4*pi)
        return f;
    }

    int lmax() const { return lmax_; }
    std::span<const double> coeffs() const { return coeffs_; }

    double get(int l, int m) const { return coeffs_[even_coeff_index(l, m, lmax_)]; }
    void set(int l, int m, double value) { coeffs_[even_coeff_index(l, m, lmax_)] = value; }

    double coefficient_energy() const {
        double e = 0.0;
        for (double c : coeffs_) e += c * c;
        return e;
    }

    // Exact harmonic synthesis at an arbitrary point.
    double evaluate(const Direction& p) const {
        const double z = p.z();
        const double rho = std::hypot(p.x(), p.y());
        double cp = 1.0, sp = 0.0;
        if (rho > 0.0) {
            cp = p.x() / rho;
            sp = p.y() / rho;
        }

        std::array<double, kMaxDegree + 1> col{};
        constexpr double sqrt2 = 1.4142135623730951;
        double acc = 0.0;
        double cm = 1.0, sm = 0.0;  // cos(m*phi), sin(m*phi)
        for (int m = 0; m <= lmax_; ++m) {
            if (m > 0) {
                const double c = cm * cp - sm * sp;
                const double s = sm * cp + cm * sp;
                cm = c;
                sm = s;
            }
            recurrence_.column(m, z, rho, col.data());
            for (int l = m + (m % 2); l <= lmax_; l += 2) {
                if (m == 0) {
                    acc += get(l, 0) * col[l];
                } else {
                    acc += sqrt2 * col[l] * (get(l, m) * cm + get(l, -m) * sm);
                }
            }
        }
        return acc;
    }

    double operator()(const Direction& p) const { return evaluate(p); }

    // Nodal values over a grid (ring-major order).
    std::vector<double> sample(const SphereGrid& grid) const {
        std::vector<double> v(grid.node_count());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate(grid.direction(i));
        return v;
    }

    ScalarField& operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }
    friend ScalarField operator*(ScalarField f, double s) { return f *= s; }
    friend ScalarField operator*(double s, ScalarField f) { return f *= s; }

    ScalarField& operator+=(const ScalarField& o) {
        if (o.lmax_ != lmax_) throw std::invalid_argument("ScalarField: band limits differ");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }

  private:
    static int validated(int lmax) {
        if (lmax < 0 || lmax % 2 != 0 || lmax > kMaxDegree)
            throw std::invalid_argument("ScalarField: lmax must be even, >= 0 and <= 64");
        return lmax;
    }

    int lmax_;
    std::vector<double> coeffs_;
    LegendreRecurrence recurrence_;
};

struct AnalyzeResult {
    ScalarField field;
    double even_energy = 0.0;
    double odd_energy = 0.0;

    bool symmetric() const {
        return odd_energy <= kSymmetryTol * (even_energy + kSymmetryFloor);
    }
};

// Quadrature projection of nodal values onto harmonics up to lmax. Even
// coefficients populate the field; odd-degree coefficients (checked one
// degree beyond lmax, as far as the grid resolves) only contribute to
// odd_energy. Never throws on asymmetry.
inline AnalyzeResult analyze_projection(const SphereGrid& grid, std::span<const double> values,
                                        int lmax) {
    if (values.size() != grid.node_count())
        throw std::invalid_argument("analyze: value count does not match grid");
    if (grid.n_lat() < lmax + 1 || grid.n_lon() < 2 * lmax + 1)
        throw std::invalid_argument("analyze: grid too coarse for requested lmax");

    const int n_lat = grid.n_lat(), n_lon = grid.n_lon();
    const int lcheck = std::min({lmax + 1, n_lat - 1, (n_lon - 1) / 2});
    const int ltop = std::max(lmax, lcheck);

    // Longitude Fourier sums per ring; cos(m*phi_j) = cos_lon((m*j) % n_lon).
    const double lon_w = kTwoPi / n_lon;
    std::vector<double> fc(static_cast<std::size_t>(n_lat) * (ltop + 1), 0.0);
    std::vector<double> fs(static_cast<std::size_t>(n_lat) * (ltop + 1), 0.0);
    for (int r = 0; r < n_lat; ++r) {
        for (int m = 0; m <= ltop; ++m) {
            double sc = 0.0, ss = 0.0;
            for (int j = 0; j < n_lon; ++j) {
                const double v = values[grid.node_index(r, j)];
                const int k = (m * j) % n_lon;
                sc += v * grid.cos_lon(k);
                ss += v * grid.sin_lon(k);
            }
            fc[static_cast<std::size_t>(r) * (ltop + 1) + m] = sc * lon_w;
            fs[static_cast<std::size_t>(r) * (ltop + 1) + m] = ss * lon_w;
        }
    }

    // Latitude contraction against normalized Legendre columns.
    const LegendreRecurrence rec(ltop);
    constexpr double sqrt2 = 1.4142135623730951;
    ScalarField field(lmax);
    double odd_energy = 0.0;
    std::array<double, kMaxDegree + 1> col{};
    std::vector<double> ccoef(static_cast<std::size_t>(ltop) + 1);
    std::vector<double> scoef(static_cast<std::size_t>(ltop) + 1);
    for (int m = 0; m <= ltop; ++m) {
        for (int l = m; l <= ltop; ++l) ccoef[static_cast<std::size_t>(l)] = scoef[static_cast<std::size_t>(l)] = 0.0;
        for (int r = 0; r < n_lat; ++r) {
            const double z = grid.ring_sin_lat(r);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            rec.column(m, z, rho, col.data());
            const double w = grid.ring_weight(r);
            const double vc = fc[static_cast<std::size_t>(r) * (ltop + 1) + m];
            const double vs = fs[static_cast<std::size_t>(r) * (ltop + 1) + m];
            for (int l = m; l <= ltop; ++l) {
                ccoef[static_cast<std::size_t>(l)] += w * col[l] * vc;
                scoef[static_cast<std::size_t>(l)] += w * col[l] * vs;
            }
        }
        for (int l = m; l <= ltop; ++l) {
            double cm, sm;
            if (m == 0) {
                cm = ccoef[static_cast<std::size_t>(l)];
                sm = 0.0;
            } else {
                cm = sqrt2 * ccoef[static_cast<std::size_t>(l)];
                sm = sqrt2 * scoef[static_cast<std::size_t>(l)];
            }
            if (l % 2 == 0) {
                if (l <= lmax) {
                    field.set(l, m, cm);
                    if (m > 0) field.set(l, -m, sm);
                }
            } else if (l <= lcheck) {
                odd_energy += cm * cm + (m > 0 ? sm * sm : 0.0);
            }
        }
    }

    AnalyzeResult out{std::move(field), 0.0, odd_energy};
    out.even_energy = out.field.coefficient_energy();
    return out;
}

// Strict analysis: throws SymmetryViolation when odd-degree energy exceeds
// tolerance relative to the even-degree energy.
inline ScalarField analyze(const SphereGrid& grid, std::span<const double> values, int lmax) {
    AnalyzeResult r = analyze_projection(grid, values, lmax);
    if (!r.symmetric()) {
        std::ostringstream msg;
        msg << "analyze: odd-degree energy " << r.odd_energy << " exceeds tolerance "
            << kSymmetryTol * (r.even_energy + kSymmetryFloor)
            << "; input is not an even function";
        throw SymmetryViolation(msg.str());
    }
    return std::move(r.field);
}

// d/du f(cos(u)*from + sin(u)*toward) at u = 0, by central finite difference
// on the harmonic evaluator. `from` and `toward` must be orthogonal.
// Truncation error is O(step^2 * lmax^3 * |f|).
inline double geodesic_derivative(const ScalarField& field, const Direction& from,
                                  const Direction& toward, double step = 1e-4) {
    if (std::abs(dot(from, toward)) > 1e-9)
        throw NonOrthogonal("geodesic_derivative: directions are not orthogonal");
    const double c = std::cos(step), s = std::sin(step);
    const Direction plus = Direction::from_unit(from.vec() * c + toward.vec() * s);
    const Direction minus = Direction::from_unit(from.vec() * c - toward.vec() * s);
    return (field.evaluate(plus) - field.evaluate(minus)) / (2.0 * step);
}

}  // namespace flagrecon
