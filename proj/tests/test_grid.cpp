// Lattice layout, transform conventions and scale heuristics.
//
// Continuum cross-checks used below:
//   - Fourier pair of a unit Gaussian: F[e^(-b^2/2)](k) = sqrt(2*pi) e^(-k^2/2)
//   - Parseval with the conventions here: sum |psi|^2 dbeta = sum |phi|^2 dkappa/2pi
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "splitspec/errors.hpp"
#include "splitspec/grid.hpp"
#include "splitspec/wavefunction.hpp"

using namespace splitspec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Wavefunction random_state(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Wavefunction psi(g, Rep::position);
    for (cplx& a : psi.amp) a = cplx{dist(rng), dist(rng)};
    return psi;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("coupling-scaled spacings follow alpha^(-1/4) sqrt(2 pi / n)") {
    Grid g = make_grid({AxisSpec::alpha_scaled(64)}, 16.0);
    CHECK(g.dbeta[0] == doctest::Approx(0.15666426716443752).epsilon(1e-12));
    CHECK(g.dkappa[0] == doctest::Approx(0.6266570686577501).epsilon(1e-12));
    CHECK(g.dbeta[0] * g.dkappa[0] * 64 == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("box and periodic spacings divide their spans") {
    Grid box = make_grid({AxisSpec::box(1024, -16.0, 16.0)}, 1.0);
    CHECK(box.dbeta[0] == doctest::Approx(32.0 / 1024).epsilon(1e-15));
    CHECK(box.origin[0] == 0.0);

    Grid per = make_grid({AxisSpec::periodic(256, kTwoPi)}, 1.0);
    CHECK(per.dbeta[0] == doctest::Approx(kTwoPi / 256).epsilon(1e-15));
    CHECK(per.periodic[0]);
    CHECK(per.dbeta[0] * per.dkappa[0] * 256 == doctest::Approx(kTwoPi).epsilon(1e-14));
}

TEST_CASE("grid sizes must be powers of two, at least 8") {
    CHECK_THROWS_AS(make_grid({AxisSpec::alpha_scaled(12)}, 1.0), SimError);
    CHECK_THROWS_AS(make_grid({AxisSpec::alpha_scaled(4)}, 1.0), SimError);
    CHECK_THROWS_AS(make_grid({}, 1.0), SimError);
    CHECK_THROWS_AS(make_grid({AxisSpec::alpha_scaled(64)}, 0.0), SimError);
}

TEST_CASE("cells are centered symmetrically about the origin") {
    Grid g = make_grid({AxisSpec::box(16, -2.0, 6.0)}, 1.0);
    CHECK(g.position(0, 7) + g.position(0, 8) == doctest::Approx(2.0 * g.origin[0]).epsilon(1e-14));
    CHECK(g.first_center(0) == doctest::Approx(-2.0 + 0.5 * g.dbeta[0]).epsilon(1e-14));
    CHECK(g.lower_edge(0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(g.upper_edge(0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("momentum bins wrap to signed values") {
    Grid g = make_grid({AxisSpec::periodic(8, kTwoPi)}, 1.0);
    CHECK(g.momentum(0, 0) == 0.0);
    CHECK(g.momentum(0, 3) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(g.momentum(0, 4) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(g.momentum(0, 7) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("transform round trip is exact to 1e-12") {
    for (const Grid& g :
         {make_grid({AxisSpec::alpha_scaled(64)}, 3.0),
          make_grid({AxisSpec::box(32, -5.0, 3.0)}, 1.0),
          make_grid({AxisSpec::periodic(16, kTwoPi), AxisSpec::box(8, -1.0, 1.0)}, 1.0)}) {
        Wavefunction psi = random_state(g, 7);
        Wavefunction back = transform(transform(psi, Direction::to_momentum), Direction::to_position);
        double worst = 0.0;
        for (std::size_t i = 0; i < psi.amp.size(); ++i)
            worst = std::max(worst, std::abs(psi.amp[i] - back.amp[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("Parseval holds with the representation measures") {
    Grid g = make_grid({AxisSpec::box(128, -7.0, 7.0)}, 1.0);
    Wavefunction psi = normalize(random_state(g, 11)).first;
    Wavefunction phi = transform(psi, Direction::to_momentum);
    CHECK(std::fabs(psi.norm_squared() - 1.0) < 1e-12);
    CHECK(std::fabs(phi.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("Gaussian transforms to the continuum Gaussian") {
    Grid g = make_grid({AxisSpec::alpha_scaled(256)}, 1.0);
    Wavefunction psi(g, Rep::position);
    for (int i = 0; i < g.n[0]; ++i) {
        double b = g.position(0, i);
        psi.amp[static_cast<std::size_t>(i)] = std::exp(-0.5 * b * b);
    }
    Wavefunction phi = transform(psi, Direction::to_momentum);
    double worst = 0.0;
    for (int k = 0; k < g.n[0]; ++k) {
        double kappa = g.momentum(0, k);
        double expected = std::sqrt(kTwoPi) * std::exp(-0.5 * kappa * kappa);
        worst = std::max(worst, std::abs(phi.amp[static_cast<std::size_t>(k)] - expected));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("inner products and normalization carry the cell measure") {
    Grid g = make_grid({AxisSpec::box(8, 0.0, 8.0)}, 1.0);
    Wavefunction a(g, Rep::position), b(g, Rep::position);
    a.amp[2] = cplx{1.0, 0.0};
    b.amp[2] = cplx{0.0, 3.0};
    CHECK(inner_product(a, b) == cplx{0.0, 3.0});  // dbeta = 1 here
    auto [unit, prev] = normalize(b);
    CHECK(prev == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(unit.norm() == doctest::Approx(1.0).epsilon(1e-15));
    Wavefunction c(g, Rep::momentum);
    CHECK_THROWS_AS(inner_product(a, c), SimError);
    Wavefunction zero(g, Rep::position);
    CHECK_THROWS_AS(normalize(zero), SimError);
}

TEST_CASE("virial scale estimates for power-law wells") {
    // Quadratic well at alpha = 1: all scales are powers of (alpha*p) = 2.
    ScaleEstimate s = characteristic_scales(1.0, 2.0);
    CHECK(s.length == doctest::Approx(std::pow(2.0, -1.0 / 6.0)).epsilon(1e-14));
    CHECK(s.time == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
    CHECK(s.length * s.momentum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.time * s.energy == doctest::Approx(1.0).epsilon(1e-14));

    // Harmonic-form well at alpha = 100: length 100^(-1/4), energy sqrt(100).
    ScaleEstimate h = characteristic_scales(100.0, 1.0);
    CHECK(h.length == doctest::Approx(std::pow(100.0, -0.25)).epsilon(1e-14));
    CHECK(h.energy == doctest::Approx(10.0).epsilon(1e-12));
    CHECK_THROWS_AS(characteristic_scales(-1.0, 1.0), SimError);
}

}  // TEST_SUITE
