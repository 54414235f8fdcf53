#pragma once

// From a support evaluator to a triangulated boundary: support-map boundary
// points, icosphere direction sampling, mesh export, and the convexity /
// central-symmetry audits.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "flagrecon/errors.hpp"
#include "flagrecon/geometry.hpp"
#include "flagrecon/parallel.hpp"
#include "flagrecon/transforms.hpp"

namespace flagrecon {

// Boundary point of the body with outer normal omega: H(omega)*omega plus
// the tangential gradient of H, by central differences of the (smooth)
// support function along the canonical tangent directions. Differentiating
// under the integral sign is deliberately avoided: the |.| kink makes the
// differentiated integrand discontinuous, while H itself is smooth.
inline Vec3 boundary_point(const SupportEvaluator& support, const Direction& omega,
                           double step = 1e-4) {
    if (!support.body_valid())
        throw NotABody("boundary_point: density fails the Lindquist nonnegativity condition");
    const TangentFrame f = canonical_frame(omega);
    const double c = std::cos(step), s = std::sin(step);
    const auto tangential = [&](const Direction& e) {
        const double hi = support(Direction::from_unit(omega.vec() * c + e.vec() * s));
        const double lo = support(Direction::from_unit(omega.vec() * c - e.vec() * s));
        return (hi - lo) / (2.0 * step);
    };
    return omega.vec() * support(omega) + f.e1.vec() * tangential(f.e1) +
           f.e2.vec() * tangential(f.e2);
}

struct IcoSphere {
    std::vector<Direction> directions;
    std::vector<std::array<int, 3>> faces;
};

// Subdivided icosahedron with midpoints pushed to the unit sphere. The
// vertex set is closed under negation at every level (midpoints of
// antipodal edges are bitwise negations of each other).
inline IcoSphere icosphere(int subdivisions) {
    if (subdivisions < 0 || subdivisions > 7)
        throw std::invalid_argument("icosphere: subdivisions out of range [0, 7]");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : verts) v = v / v.norm();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        const auto mid = [&](int a, int b) {
            const std::pair<int, int> key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            const auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = verts[static_cast<std::size_t>(key.first)] +
                     verts[static_cast<std::size_t>(key.second)];
            m = m / m.norm();
            verts.push_back(m);
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    IcoSphere out;
    out.directions.reserve(verts.size());
    for (const Vec3& v : verts) out.directions.push_back(Direction::from_unit(v));
    out.faces = std::move(faces);
    return out;
}

struct BodyMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<std::array<int, 2>> symmetry_pairs;  // (i, j) with v_j = -v_i
    std::vector<Direction> directions;               // sampling direction per vertex
};

// Solid angle subtended at the origin by a spherical triangle (unit dirs).
inline double solid_angle(const Direction& a, const Direction& b, const Direction& c) {
    const double num = std::abs(dot(a.vec(), cross(b.vec(), c.vec())));
    const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::abs(std::atan2(num, den));
}

inline BodyMesh export_mesh(const SupportEvaluator& support, int subdivisions) {
    if (!support.body_valid())
        throw NotABody("export_mesh: density fails the Lindquist nonnegativity condition");
    const IcoSphere ico = icosphere(subdivisions);

    BodyMesh mesh;
    mesh.directions = ico.directions;
    mesh.vertices.resize(ico.directions.size());
    parallel_for(ico.directions.size(), [&](std::size_t i) {
        mesh.vertices[i] = boundary_point(support, ico.directions[i]);
    });

    mesh.faces = ico.faces;
    for (auto& f : mesh.faces) {
        if (solid_angle(ico.directions[static_cast<std::size_t>(f[0])],
                        ico.directions[static_cast<std::size_t>(f[1])],
                        ico.directions[static_cast<std::size_t>(f[2])]) < 1e-12)
            throw DegenerateMesh("export_mesh: face flatter than 1e-12 steradian");
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
        if (dot(cross(b - a, c - a), a + b + c) < 0.0) std::swap(f[1], f[2]);
    }

    // Antipodal partner of every sampling direction exists in the icosphere
    // by construction; match on exact negated components first, then within
    // tolerance.
    std::map<std::array<double, 3>, int> index;
    for (std::size_t i = 0; i < ico.directions.size(); ++i) {
        const Direction& d = ico.directions[i];
        index[{d.x(), d.y(), d.z()}] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < ico.directions.size(); ++i) {
        const Direction& d = ico.directions[i];
        const auto it = index.find({-d.x(), -d.y(), -d.z()});
        if (it == index.end())
            throw DegenerateMesh("export_mesh: direction set is not centrally symmetric");
        const int j = it->second;
        if (static_cast<int>(i) < j) mesh.symmetry_pairs.push_back({static_cast<int>(i), j});
    }
    return mesh;
}

struct ConvexityReport {
    double worst_violation = 0.0;  // largest excess outside a supporting halfspace
    double diameter = 0.0;
    double tol = 0.0;  // 1e-6 * diameter
    bool pass = false;
};

// Supporting-plane audit. Each vertex was produced as the boundary point
// with outer normal equal to its sampling direction, so the plane through
// the vertex with that normal must support the whole cloud. Face planes are
// deliberately not used: a triangulation face is a secant plane of the
// body, and nearby vertices legitimately stick out of it by the sagitta.
inline ConvexityReport convexity_audit(const BodyMesh& mesh) {
    if (mesh.directions.size() != mesh.vertices.size())
        throw std::invalid_argument(
            "convexity_audit: mesh carries no per-vertex sampling directions");
    ConvexityReport rep;
    double max_norm = 0.0;
    for (const Vec3& v : mesh.vertices) max_norm = std::max(max_norm, v.norm());
    rep.diameter = 2.0 * max_norm;  // centrally symmetric
    rep.tol = 1e-6 * rep.diameter;

    std::vector<double> worst_per_plane(mesh.vertices.size(), 0.0);
    parallel_for(mesh.vertices.size(), [&](std::size_t i) {
        const Vec3 n = mesh.directions[i].vec();
        const double offset = dot(mesh.vertices[i], n);
        double worst = -rep.diameter;
        for (const Vec3& w : mesh.vertices) worst = std::max(worst, dot(w, n) - offset);
        worst_per_plane[i] = worst;
    });
    double worst = 0.0;
    for (double w : worst_per_plane) worst = std::max(worst, w);
    rep.worst_violation = worst;
    rep.pass = rep.worst_violation <= rep.tol;
    return rep;
}

struct MeshSymmetryReport {
    double max_pair_error = 0.0;
    std::size_t pairs = 0;
    bool pass = false;
};

inline MeshSymmetryReport symmetry_audit(const BodyMesh& mesh) {
    MeshSymmetryReport rep;
    rep.pairs = mesh.symmetry_pairs.size();
    for (const auto& pr : mesh.symmetry_pairs) {
        const Vec3 sum = mesh.vertices[static_cast<std::size_t>(pr[0])] +
                         mesh.vertices[static_cast<std::size_t>(pr[1])];
        rep.max_pair_error = std::max(rep.max_pair_error, sum.norm());
    }
    rep.pass = rep.max_pair_error < 1e-8;
    return rep;
}

inline double mesh_volume(const BodyMesh& mesh) {
    double six_volume = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
        six_volume += dot(a, cross(b, c));
    }
    return six_volume / 6.0;
}

}  // namespace flagrecon
