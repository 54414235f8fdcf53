#include <doctest.h>

#include <cmath>
#include <vector>

#include "flagrecon/flag_field.hpp"
#include "flagrecon/oracle.hpp"
#include "flagrecon/rng.hpp"
#include "flagrecon/transforms.hpp"

using namespace flagrecon;

namespace {

const SphereGrid& default_grid() {
    static const SphereGrid grid(32, 64);
    return grid;
}

FlagField sphere_flags(double r) {
    return FlagField(default_grid(),
                     std::vector<FlagCoeffs>(default_grid().node_count(), FlagCoeffs{r, 0, 0}));
}

}  // namespace

TEST_CASE("tangent mean of a sphere flag field is twice the radius") {
    const ScalarField fbar = mean_over_psi(sphere_flags(1.5));
    Lcg rng(2);
    for (int k = 0; k < 20; ++k)
        CHECK(fbar.evaluate(rng.direction()) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("tangent mean ignores the second harmonic") {
    std::vector<FlagCoeffs> coeffs(default_grid().node_count());
    Lcg rng(8);
    for (auto& c : coeffs) {
        c.a0 = 3.0;
        c.a2 = rng.symmetric();
        c.b2 = rng.symmetric();
    }
    const FlagField field(default_grid(), std::move(coeffs));
    const ScalarField fbar = mean_over_psi(field);
    CHECK(fbar.evaluate(z_axis()) == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(fbar.evaluate(Direction(1.0, 2.0, -0.5)) == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("tangent mean matches dense quadrature of the evaluator") {
    const GeneratingDensity h = make_harmonic(4, 7, 0.1, default_grid());
    const FlagField field = forward_field(h);
    const ScalarField fbar = mean_over_psi(field);
    const int n_psi = 512;
    for (std::size_t i : {std::size_t{0}, std::size_t{777}, std::size_t{2047}}) {
        const Direction& omega = default_grid().direction(i);
        double mean = 0.0;
        for (int k = 0; k < n_psi; ++k)
            mean += field.evaluate(Flag(omega, kTwoPi * k / n_psi));
        mean *= 2.0 / n_psi;  // (1/pi) * integral over [0, 2*pi)
        CHECK(std::abs(mean - fbar.evaluate(omega)) < 1e-10);
    }
}

TEST_CASE("node evaluation reproduces nodal data") {
    const GeneratingDensity h = make_harmonic(4, 3, 0.1, default_grid());
    const FlagField field = forward_field(h);
    Lcg rng(4);
    for (int k = 0; k < 200; ++k) {
        const std::size_t i = rng.next_u64() % default_grid().node_count();
        const double psi = kTwoPi * rng.uniform();
        const double direct = field.node(i).at(psi);
        const double via_eval = field.evaluate(Flag(default_grid().direction(i), psi));
        CHECK(std::abs(direct - via_eval) < 1e-13);
    }
}

TEST_CASE("sphere flag field evaluates to the radius everywhere") {
    const FlagField field = sphere_flags(2.0);
    Lcg rng(6);
    for (int k = 0; k < 500; ++k)
        CHECK(field.evaluate(rng.flag()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("off-node evaluation tracks the dense circle integral") {
    const GeneratingDensity h = make_harmonic(4, 7, 0.1, default_grid());
    const FlagField field = forward_field(h);
    Lcg rng(9);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Flag flag = rng.flag();
        worst = std::max(worst,
                         std::abs(field.evaluate(flag) - brute_force_radius(h.field, flag)));
    }
    CHECK(worst < 1e-3);  // interpolation error bound at the default resolution
    CHECK(worst > 0.0);
}

TEST_CASE("interpolation error shrinks under grid refinement") {
    const GeneratingDensity h1 = make_harmonic(4, 7, 0.1, default_grid());
    const GeneratingDensity h2 = make_density(h1.field, default_grid().doubled());
    const FlagField f1 = forward_field(h1);
    const FlagField f2 = forward_field(h2);
    Lcg rng(10);
    double w1 = 0.0, w2 = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Flag flag = rng.flag();
        const double truth = brute_force_radius(h1.field, flag);
        w1 = std::max(w1, std::abs(f1.evaluate(flag) - truth));
        w2 = std::max(w2, std::abs(f2.evaluate(flag) - truth));
    }
    CHECK(w2 < 0.5 * w1);
}

TEST_CASE("tangent minimum closed form matches a dense refined scan") {
    Lcg rng(14);
    for (int k = 0; k < 50; ++k) {
        FlagCoeffs c{rng.symmetric() * 2.0, rng.symmetric(), rng.symmetric()};
        double best = 0.0, best_val = c.at(0.0);
        for (int j = 1; j < 1024; ++j) {
            const double psi = kTwoPi * j / 1024.0;
            if (c.at(psi) < best_val) {
                best_val = c.at(psi);
                best = psi;
            }
        }
        double lo = best - kTwoPi / 1024.0, hi = best + kTwoPi / 1024.0;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (c.at(m1) < c.at(m2))
                hi = m2;
            else
                lo = m1;
        }
        CHECK(std::abs(c.at(0.5 * (lo + hi)) - c.psi_min()) < 1e-12);
    }
}

TEST_CASE("forward fields carry no tangent harmonics beyond {0, 2}") {
    const GeneratingDensity h = make_harmonic(4, 11, 0.1, default_grid());
    const FlagField field = forward_field(h);
    // dense tangent scan at a node, projected on harmonics 1, 3, 4
    const std::size_t i = 1203;
    const Direction& omega = default_grid().direction(i);
    const int n = 720;
    double c1 = 0.0, s1 = 0.0, c3 = 0.0, c4 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double psi = kTwoPi * k / n;
        const double v = brute_force_radius(h.field, Flag(omega, psi), 1024);
        c1 += v * std::cos(psi);
        s1 += v * std::sin(psi);
        c3 += v * std::cos(3.0 * psi);
        c4 += v * std::cos(4.0 * psi);
    }
    for (double x : {c1, s1, c3, c4}) CHECK(std::abs(x * 2.0 / n) < 1e-10);
    // and the nodal coefficients reproduce the dense values
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double psi = kTwoPi * k / 8.0;
        worst = std::max(worst, std::abs(field.node(i).at(psi) -
                                         brute_force_radius(h.field, Flag(omega, psi), 1024)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("symmetry validation passes spheres and forward fields") {
    CHECK(validate_symmetry(sphere_flags(1.0)).max_deviation < 1e-12);
    const GeneratingDensity h = make_harmonic(4, 5, 0.1, default_grid());
    CHECK(validate_symmetry(forward_field(h)).max_deviation < 1e-8);
}

TEST_CASE("symmetry validation reports injected asymmetry at its amplitude") {
    const GeneratingDensity h = make_harmonic(4, 5, 0.1, default_grid());
    FlagField field = forward_field(h);
    field.mutable_nodes()[150].a0 += 1e-3;
    field.refresh();
    const FlagSymmetryReport rep = validate_symmetry(field);
    CHECK(rep.max_deviation == doctest::Approx(1e-3).epsilon(0.02));
    CHECK_FALSE(rep.pass);
}

TEST_CASE("flag evaluation is periodic with period pi") {
    const GeneratingDensity h = make_harmonic(4, 7, 0.1, default_grid());
    const FlagField field = forward_field(h);
    Lcg rng(21);
    for (int k = 0; k < 100; ++k) {
        const Flag flag = rng.flag();
        const double v1 = field.evaluate(flag);
        const double v2 = field.evaluate(Flag(flag.omega, flag.psi + kPi));
        CHECK(std::abs(v1 - v2) < 1e-12);
    }
}

TEST_CASE("tangent mean rejects odd-degree content in the nodal means") {
    std::vector<FlagCoeffs> coeffs(default_grid().node_count());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i].a0 = 3.0 + 0.5 * default_grid().direction(i).z();  // odd injection
    const FlagField field(default_grid(), std::move(coeffs));
    CHECK_THROWS_AS(mean_over_psi(field), SymmetryViolation);
}

TEST_CASE("flag angles are reduced modulo a full turn") {
    const Flag f(z_axis(), 3.0 * kTwoPi + 1.25);
    CHECK(f.psi == doctest::Approx(1.25).epsilon(1e-12));
    const Flag g(z_axis(), -0.5);
    CHECK(g.psi == doctest::Approx(kTwoPi - 0.5).epsilon(1e-12));
}

TEST_CASE("injected fourth harmonic shows up in evaluation") {
    FlagField field = sphere_flags(1.0);
    field.inject_psi_harmonic4(0.05, 0.0);
    const Direction omega = default_grid().direction(40);
    CHECK(field.evaluate(Flag(omega, 0.0)) == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(field.evaluate(Flag(omega, kPi / 4)) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(field.hook_amplitude() == doctest::Approx(0.05));
}
