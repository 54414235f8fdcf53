#include <doctest.h>

#include <cmath>
#include <set>

#include "flagrecon/io.hpp"
#include "flagrecon/oracle.hpp"
#include "flagrecon/reconstruct.hpp"
#include "flagrecon/rng.hpp"

using namespace flagrecon;

namespace {

const SphereGrid& default_grid() {
    static const SphereGrid grid(32, 64);
    return grid;
}

}  // namespace

TEST_CASE("icosphere counts and unit vertices") {
    for (int level : {0, 1, 2, 3}) {
        const IcoSphere ico = icosphere(level);
        const std::size_t expect_faces = 20u << (2 * level);
        CHECK(ico.faces.size() == expect_faces);
        CHECK(ico.directions.size() == expect_faces / 2 + 2);  // Euler: V = F/2 + 2
        for (const Direction& d : ico.directions)
            CHECK(std::abs(d.vec().norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("icosphere vertex set is closed under negation, bitwise") {
    const IcoSphere ico = icosphere(3);
    std::set<std::array<double, 3>> seen;
    for (const Direction& d : ico.directions) seen.insert({d.x(), d.y(), d.z()});
    for (const Direction& d : ico.directions)
        CHECK(seen.count({-d.x(), -d.y(), -d.z()}) == 1);
}

TEST_CASE("boundary points of the sphere body lie on the sphere") {
    const SphereTruth truth = make_sphere(1.5, default_grid());
    const SupportEvaluator support(truth.density);
    Lcg rng(3);
    for (int k = 0; k < 50; ++k) {
        const Direction omega = rng.direction();
        const Vec3 x = boundary_point(support, omega);
        CHECK((x - omega.vec() * 1.5).norm() < 1e-8);
    }
}

TEST_CASE("boundary point satisfies the tangency identity") {
    const GeneratingDensity h = make_harmonic(4, 5, 0.1, default_grid());
    const SupportEvaluator support(h);
    Lcg rng(7);
    for (int k = 0; k < 30; ++k) {
        const Direction omega = rng.direction();
        const Vec3 x = boundary_point(support, omega);
        CHECK(std::abs(dot(x, omega.vec()) - support(omega)) < 2e-4 * support(omega));
    }
}

TEST_CASE("boundary point map is odd") {
    const GeneratingDensity h = make_harmonic(4, 9, 0.1, default_grid());
    const SupportEvaluator support(h);
    Lcg rng(11);
    for (int k = 0; k < 30; ++k) {
        const Direction omega = rng.direction();
        CHECK((boundary_point(support, omega) + boundary_point(support, -omega)).norm() < 1e-8);
    }
}

TEST_CASE("boundary point refuses invalid densities") {
    const GeneratingDensity bad = make_harmonic(4, 13, -0.05, default_grid());
    REQUIRE_FALSE(bad.body_valid());
    const SupportEvaluator support(bad);
    CHECK_THROWS_AS(boundary_point(support, z_axis()), NotABody);
    CHECK_THROWS_AS(export_mesh(support, 2), NotABody);
}

TEST_CASE("sphere mesh at subdivision 3") {
    const SphereTruth truth = make_sphere(1.0, default_grid());
    const BodyMesh mesh = export_mesh(SupportEvaluator(truth.density), 3);
    CHECK(mesh.vertices.size() == 642);
    CHECK(mesh.faces.size() == 1280);
    for (const Vec3& v : mesh.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-4);
    CHECK(symmetry_audit(mesh).max_pair_error < 1e-8);
    CHECK(convexity_audit(mesh).worst_violation < 1e-8);
}

TEST_CASE("sphere mesh volume converges to the ball volume") {
    const SphereTruth truth = make_sphere(1.0, default_grid());
    const BodyMesh mesh = export_mesh(SupportEvaluator(truth.density), 4);
    CHECK(std::abs(mesh_volume(mesh) - 4.0 * kPi / 3.0) < 0.01 * (4.0 * kPi / 3.0));
}

TEST_CASE("mesh vertices stay inside every support halfspace") {
    const GeneratingDensity h = make_harmonic(4, 15, 0.1, default_grid());
    const SupportEvaluator support(h);
    const BodyMesh mesh = export_mesh(support, 3);
    Lcg rng(17);
    for (int k = 0; k < 100; ++k) {
        const Direction omega = rng.direction();
        const double bound = support(omega) + 1e-6;
        for (std::size_t i = 0; i < mesh.vertices.size(); i += 7)
            CHECK(dot(mesh.vertices[i], omega.vec()) <= bound);
    }
}

TEST_CASE("support function rederived from the mesh matches the evaluator") {
    const GeneratingDensity h = make_harmonic(4, 19, 0.1, default_grid());
    const SupportEvaluator support(h);
    const BodyMesh mesh = export_mesh(support, 4);
    Lcg rng(21);
    for (int k = 0; k < 20; ++k) {
        const Direction omega = rng.direction();
        double widest = -1e300;
        for (const Vec3& v : mesh.vertices) widest = std::max(widest, dot(v, omega.vec()));
        CHECK(std::abs(widest - support(omega)) < 5e-3 * support(omega));
    }
}

TEST_CASE("convexity audit on a valid synthetic body") {
    const GeneratingDensity h = make_harmonic(4, 23, 0.1, default_grid());
    const BodyMesh mesh = export_mesh(SupportEvaluator(h), 3);
    const ConvexityReport rep = convexity_audit(mesh);
    CHECK(rep.worst_violation < 1e-5);
    CHECK(rep.pass);
}

TEST_CASE("convexity audit reports a pushed vertex at its displacement") {
    const SphereTruth truth = make_sphere(1.0, default_grid());
    BodyMesh mesh = export_mesh(SupportEvaluator(truth.density), 4);
    mesh.vertices[100] = mesh.vertices[100] * 1.01;
    const ConvexityReport rep = convexity_audit(mesh);
    CHECK(rep.worst_violation > 0.005);
    CHECK(rep.worst_violation < 0.02);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("faces are consistently outward oriented") {
    const GeneratingDensity h = make_harmonic(4, 27, 0.1, default_grid());
    const BodyMesh mesh = export_mesh(SupportEvaluator(h), 2);
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
        CHECK(dot(cross(b - a, c - a), a + b + c) > 0.0);
    }
    CHECK(mesh_volume(mesh) > 0.0);
}

TEST_CASE("wavefront export format is exact") {
    BodyMesh mesh;
    mesh.vertices = {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
    mesh.faces = {{0, 1, 2}};
    CHECK(mesh_to_obj(mesh) ==
          "v 1.000000000 0.000000000 0.000000000\n"
          "v 0.000000000 1.000000000 0.000000000\n"
          "v 0.000000000 0.000000000 1.000000000\n"
          "f 1 2 3\n");
}

TEST_CASE("degenerate direction triples are rejected") {
    CHECK(solid_angle(x_axis(), y_axis(), z_axis()) == doctest::Approx(kHalfPi));
    const Direction nearly = Direction(1.0, 1e-13, 0.0);
    CHECK(solid_angle(x_axis(), nearly, Direction(1.0, 0.0, 1e-13)) < 1e-12);
}
