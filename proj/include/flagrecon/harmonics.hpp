#pragma once

// Real, orthonormal spherical harmonics (4*pi-normalized so that
// integral(Y_lm * Y_l'm') over S^2 = delta). No Condon-Shortley phase.
//
//   Y_{l,0}  = Pbar_l^0(z)
//   Y_{l,m}  = sqrt(2) * Pbar_l^m(z) * cos(m*phi)   (m > 0)
//   Y_{l,-m} = sqrt(2) * Pbar_l^m(z) * sin(m*phi)   (m > 0)
//
// with z = sin(latitude) and Pbar the fully normalized associated Legendre
// functions, evaluated by the standard three-term recurrence.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "flagrecon/geometry.hpp"

namespace flagrecon {

inline constexpr int kMaxDegree = 64;
inline constexpr double kY00 = 0.28209479177387814;  // 1/sqrt(4*pi)

// Recurrence coefficients for Pbar up to a fixed degree.
class LegendreRecurrence {
  public:
    explicit LegendreRecurrence(int lmax) : lmax_(lmax) {
        if (lmax < 0 || lmax > kMaxDegree)
            throw std::invalid_argument("LegendreRecurrence: degree out of range");
        diag_.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
        for (int m = 1; m <= lmax; ++m)
            diag_[static_cast<std::size_t>(m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        a_.assign(table_size(), 0.0);
        b_.assign(table_size(), 0.0);
        for (int m = 0; m <= lmax; ++m) {
            for (int l = m + 2; l <= lmax; ++l) {
                const std::size_t i = index(l, m);
                a_[i] = std::sqrt((4.0 * l * l - 1.0) /
                                  (static_cast<double>(l) * l - static_cast<double>(m) * m));
                b_[i] = std::sqrt(((static_cast<double>(l - 1) * (l - 1)) - static_cast<double>(m) * m) /
                                  (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
            }
        }
    }

    int lmax() const { return lmax_; }

    // Fills column[l] = Pbar_l^m(z) for l = m..lmax; entries below m are
    // left untouched.
    void column(int m, double z, double sin_colat, double* column) const {
        double pmm = kY00;
        for (int k = 1; k <= m; ++k) pmm *= diag_[static_cast<std::size_t>(k)] * sin_colat;
        column[m] = pmm;
        if (m + 1 <= lmax_) column[m + 1] = std::sqrt(2.0 * m + 3.0) * z * pmm;
        for (int l = m + 2; l <= lmax_; ++l) {
            const std::size_t i = index(l, m);
            column[l] = a_[i] * (z * column[l - 1] - b_[i] * column[l - 2]);
        }
    }

  private:
    std::size_t table_size() const {
        const std::size_t n = static_cast<std::size_t>(lmax_) + 1;
        return n * n;
    }
    std::size_t index(int l, int m) const {
        return static_cast<std::size_t>(m) * (static_cast<std::size_t>(lmax_) + 1) +
               static_cast<std::size_t>(l);
    }

    int lmax_;
    std::vector<double> diag_;
    std::vector<double> a_, b_;
};

// Coefficient layout for even-degree-only fields: blocks l = 0, 2, ..., lmax,
// each with m = -l..l.
inline std::size_t even_coeff_count(int lmax) {
    std::size_t n = 0;
    for (int l = 0; l <= lmax; l += 2) n += static_cast<std::size_t>(2 * l + 1);
    return n;
}

inline std::size_t even_coeff_index(int l, int m, int lmax) {
    if (l < 0 || l > lmax || l % 2 != 0 || m < -l || m > l)
        throw std::invalid_argument("even_coeff_index: (l, m) out of range");
    std::size_t base = 0;
    for (int k = 0; k < l; k += 2) base += static_cast<std::size_t>(2 * k + 1);
    return base + static_cast<std::size_t>(m + l);
}

}  // namespace flagrecon
