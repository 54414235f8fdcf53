#pragma once

// Coordinate-free spherical geometry: directions on S^2, the deterministic
// tangent frame convention used for all flag angles, great circles, and
// pole-relative spherical coordinates (latitude in [-pi/2, pi/2], longitude
// in [0, 2*pi)).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "flagrecon/errors.hpp"

namespace flagrecon {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

// Unit vector on S^2. Construction normalizes; a zero vector is rejected.
class Direction {
  public:
    Direction() : v_(0.0, 0.0, 1.0) {}
    explicit Direction(const Vec3& v) : v_(normalized(v)) {}
    Direction(double x, double y, double z) : Direction(Vec3{x, y, z}) {}

    // For vectors already unit by construction; keeps the components bitwise
    // as given instead of renormalizing them.
    static Direction from_unit(const Vec3& v) {
        if (std::abs(v.dot(v) - 1.0) > 1e-6)
            throw Error("Direction::from_unit: vector is not unit length");
        return Direction(negate_tag{}, v);
    }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    const Vec3& vec() const { return v_; }

    Direction operator-() const { return Direction(negate_tag{}, Vec3{-v_.x, -v_.y, -v_.z}); }

    friend double dot(const Direction& a, const Direction& b) { return a.v_.dot(b.v_); }
    friend double dot(const Direction& a, const Vec3& b) { return a.v_.dot(b); }
    friend double dot(const Vec3& a, const Direction& b) { return a.dot(b.v_); }
    friend Vec3 cross(const Direction& a, const Direction& b) { return a.v_.cross(b.v_); }

  private:
    struct negate_tag {};
    Direction(negate_tag, const Vec3& exact) : v_(exact) {}

    static Vec3 normalized(const Vec3& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw Error("Direction: cannot normalize zero or non-finite vector");
        return v / n;
    }

    Vec3 v_;
};

inline Direction x_axis() { return Direction(1.0, 0.0, 0.0); }
inline Direction y_axis() { return Direction(0.0, 1.0, 0.0); }
inline Direction z_axis() { return Direction(0.0, 0.0, 1.0); }

// Right-handed orthonormal triple {e1, e2, pole}; e1 x e2 = pole.
struct TangentFrame {
    Direction e1, e2, pole;
};

// A flag: a direction omega together with a tangent angle psi measured in
// canonical_frame(omega), reduced mod 2*pi. Tangent lines repeat with period
// pi, so psi and psi + pi name the same flag value for symmetric functions.
struct Flag {
    Direction omega;
    double psi = 0.0;

    Flag() = default;
    Flag(const Direction& om, double psi_raw) : omega(om), psi(reduce_angle(psi_raw)) {}

    static double reduce_angle(double a) {
        double r = std::fmod(a, kTwoPi);
        if (r < 0.0) r += kTwoPi;
        if (r >= kTwoPi) r = 0.0;
        return r;
    }
};

// The binding frame convention for all serialized flag data ("zcross-v1"):
// e1 = normalize(z_hat x omega), falling back to x_hat when omega is within
// 1e-9 of +-z_hat; e2 = omega x e1. Pure and deterministic: the same pole
// always yields bitwise-identical axes.
inline TangentFrame canonical_frame(const Direction& omega) {
    constexpr double pole_cut = 1.0 - 1e-9;
    const Vec3 w = omega.vec();
    Direction e1 = (std::abs(w.z) <= pole_cut) ? Direction(Vec3{-w.y, w.x, 0.0})  // z_hat x omega
                                               : x_axis();
    Direction e2 = Direction(cross(w, e1.vec()));
    return TangentFrame{e1, e2, omega};
}

inline const char* frame_convention_name() { return "zcross-v1"; }

// Point with latitude nu and longitude phi relative to `pole`, with phi
// measured from canonical_frame(pole).e1. nu = +-pi/2 returns the pole
// (or its antipode) exactly.
inline Direction point_from_pole_coords(const Direction& pole, double nu, double phi) {
    if (nu == kHalfPi) return pole;
    if (nu == -kHalfPi) return -pole;
    const TangentFrame f = canonical_frame(pole);
    const double cn = std::cos(nu), sn = std::sin(nu);
    const double cp = std::cos(phi), sp = std::sin(phi);
    return Direction(f.e1.vec() * (cn * cp) + f.e2.vec() * (cn * sp) + pole.vec() * sn);
}

// Inverse of point_from_pole_coords. Longitude is defined as 0 whenever the
// point is within 1e-12 of either pole.
inline std::pair<double, double> pole_coords(const Direction& pole, const Direction& p) {
    double s = dot(p, pole);
    s = std::clamp(s, -1.0, 1.0);
    const double nu = std::asin(s);
    if (kHalfPi - std::abs(nu) < 1e-12) return {nu, 0.0};
    const TangentFrame f = canonical_frame(pole);
    double phi = std::atan2(dot(p, f.e2), dot(p, f.e1));
    if (phi < 0.0) phi += kTwoPi;
    return {nu, phi};
}

// Point at angle phi on the great circle with pole omega.
inline Direction great_circle_point(const Direction& omega, double phi) {
    return point_from_pole_coords(omega, 0.0, phi);
}

// Unit tangent at point_from_pole_coords(pole, nu, phi) in the direction of
// increasing latitude (toward the pole along the meridian).
inline Vec3 meridian_tangent(const Direction& pole, double nu, double phi) {
    const TangentFrame f = canonical_frame(pole);
    const double cn = std::cos(nu), sn = std::sin(nu);
    const double cp = std::cos(phi), sp = std::sin(phi);
    return f.e1.vec() * (-sn * cp) + f.e2.vec() * (-sn * sp) + pole.vec() * cn;
}

}  // namespace flagrecon
