#pragma once

// Quadrature grid on S^2: Gauss-Legendre latitude rings (nodes of P_{n_lat}
// in sin(latitude)) times n_lon equispaced longitudes. Weights sum to 4*pi.
// The rule integrates exactly any polynomial of degree <= 2*n_lat - 1 in
// sin(latitude) times longitude harmonics of order < n_lon.
//
// n_lon must be even: the grid is then closed under the antipodal map
// (ring i, lon j) -> (ring n_lat-1-i, lon j + n_lon/2), which the evenness
// checks and the across-pole interpolation stencils rely on.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "flagrecon/geometry.hpp"
#include "flagrecon/quadrature.hpp"

namespace flagrecon {

class SphereGrid {
  public:
    SphereGrid(int n_lat, int n_lon) : n_lat_(n_lat), n_lon_(n_lon) {
        if (n_lat < 2) throw std::invalid_argument("SphereGrid: n_lat must be >= 2");
        if (n_lon < 4 || n_lon % 2 != 0)
            throw std::invalid_argument("SphereGrid: n_lon must be even and >= 4");

        const QuadratureRule gl = gauss_legendre(n_lat);
        ring_sin_lat_ = gl.nodes;  // ascending, symmetric about 0
        ring_weight_ = gl.weights;
        ring_lat_.resize(static_cast<std::size_t>(n_lat));
        for (int r = 0; r < n_lat; ++r)
            ring_lat_[static_cast<std::size_t>(r)] = std::asin(ring_sin_lat_[static_cast<std::size_t>(r)]);

        lon_.resize(static_cast<std::size_t>(n_lon));
        cos_lon_.resize(static_cast<std::size_t>(n_lon));
        sin_lon_.resize(static_cast<std::size_t>(n_lon));
        for (int j = 0; j < n_lon; ++j) {
            const double phi = kTwoPi * j / n_lon;
            lon_[static_cast<std::size_t>(j)] = phi;
            cos_lon_[static_cast<std::size_t>(j)] = std::cos(phi);
            sin_lon_[static_cast<std::size_t>(j)] = std::sin(phi);
        }

        directions_.reserve(node_count());
        weights_.reserve(node_count());
        const double lon_weight = kTwoPi / n_lon;
        for (int r = 0; r < n_lat; ++r) {
            const double z = ring_sin_lat_[static_cast<std::size_t>(r)];
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int j = 0; j < n_lon; ++j) {
                directions_.push_back(Direction::from_unit(
                    Vec3{rho * cos_lon_[static_cast<std::size_t>(j)],
                         rho * sin_lon_[static_cast<std::size_t>(j)], z}));
                weights_.push_back(ring_weight_[static_cast<std::size_t>(r)] * lon_weight);
            }
        }
    }

    int n_lat() const { return n_lat_; }
    int n_lon() const { return n_lon_; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n_lat_) * static_cast<std::size_t>(n_lon_);
    }

    std::size_t node_index(int ring, int lon) const {
        return static_cast<std::size_t>(ring) * static_cast<std::size_t>(n_lon_) +
               static_cast<std::size_t>(lon);
    }
    const Direction& direction(std::size_t i) const { return directions_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    double ring_sin_lat(int r) const { return ring_sin_lat_[static_cast<std::size_t>(r)]; }
    double ring_lat(int r) const { return ring_lat_[static_cast<std::size_t>(r)]; }
    double ring_weight(int r) const { return ring_weight_[static_cast<std::size_t>(r)]; }
    double lon_angle(int j) const { return lon_[static_cast<std::size_t>(j)]; }
    double cos_lon(int j) const { return cos_lon_[static_cast<std::size_t>(j)]; }
    double sin_lon(int j) const { return sin_lon_[static_cast<std::size_t>(j)]; }

    // Index of the node at the antipodal point (exact: latitude nodes are
    // mirrored, longitudes shift by half a turn).
    std::size_t antipode_index(std::size_t i) const {
        const int r = static_cast<int>(i) / n_lon_;
        const int j = static_cast<int>(i) % n_lon_;
        return node_index(n_lat_ - 1 - r, (j + n_lon_ / 2) % n_lon_);
    }

    SphereGrid doubled() const { return SphereGrid(2 * n_lat_, 2 * n_lon_); }

    bool same_layout(const SphereGrid& o) const {
        return n_lat_ == o.n_lat_ && n_lon_ == o.n_lon_;
    }

  private:
    int n_lat_, n_lon_;
    std::vector<double> ring_sin_lat_, ring_lat_, ring_weight_;
    std::vector<double> lon_, cos_lon_, sin_lon_;
    std::vector<Direction> directions_;
    std::vector<double> weights_;
};

}  // namespace flagrecon
