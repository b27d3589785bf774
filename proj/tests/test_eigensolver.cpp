// Imaginary-time relaxation with deflation.
//
// Reference levels:
//   - x^2 + kappa^2 ladder: 2n+1 (unit-frequency oscillator in these units)
//   - cosine lattice 2 + 2 cos(2x): Mathieu characteristic values a_r, b_r
//     (Abramowitz & Stegun table 20.1, q = 1) shifted by +2.
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "splitspec/eigensolver.hpp"
#include "splitspec/errors.hpp"

using namespace splitspec;

namespace {

Hamiltonian harmonic(int n) {
    Grid g = make_grid({AxisSpec::alpha_scaled(n)}, 1.0);
    return Hamiltonian(parse_potential("x^2"), parse_potential("1"), g);
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("trial states carry the requested parity") {
    Grid g = make_grid({AxisSpec::alpha_scaled(64)}, 1.0);
    ExprPtr u = parse_potential("x^2");

    Wavefunction even = trial_state(g, u, {0});
    Wavefunction odd = trial_state(g, u, {1});
    CHECK(even.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(odd.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 64; ++i) {
        auto iu = static_cast<std::size_t>(i);
        auto mirror = static_cast<std::size_t>(63 - i);
        CHECK(even.amp[iu].real() == doctest::Approx(even.amp[mirror].real()).epsilon(1e-12));
        CHECK(odd.amp[iu].real() == doctest::Approx(-odd.amp[mirror].real()).epsilon(1e-12));
    }
    CHECK(std::abs(inner_product(even, odd)) < 1e-12);
    CHECK_THROWS_AS(trial_state(g, u, {0, 0}), SimError);
    CHECK_THROWS_AS(trial_state(g, u, {-1}), SimError);
}

TEST_CASE("periodic trial states concentrate in the potential valleys") {
    Grid g = make_grid({AxisSpec::periodic(64, 2.0 * std::numbers::pi)}, 1.0);
    ExprPtr u = parse_potential("2 + 2*cos(2*x)");  // minima at +-pi/2
    Wavefunction trial = trial_state(g, u, {0});
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < trial.amp.size(); ++i)
        if (std::abs(trial.amp[i]) > std::abs(trial.amp[argmax])) argmax = i;
    double x = g.position(0, static_cast<int>(argmax));
    double dist = std::min(std::fabs(x - std::numbers::pi / 2), std::fabs(x + std::numbers::pi / 2));
    CHECK(dist < g.dbeta[0]);
}

TEST_CASE("deflation removes components and rejects spanned states") {
    Grid g = make_grid({AxisSpec::alpha_scaled(64)}, 1.0);
    ExprPtr u = parse_potential("x^2");
    Wavefunction e0 = trial_state(g, u, {0});
    Wavefunction mixed = trial_state(g, u, {1});
    for (std::size_t i = 0; i < mixed.amp.size(); ++i) mixed.amp[i] += 0.7 * e0.amp[i];

    Wavefunction clean = deflate(mixed, {e0});
    CHECK(std::abs(inner_product(e0, clean)) < 1e-12);
    CHECK(clean.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(deflate(e0, {e0}), SimError);
}

TEST_CASE("relaxation finds the oscillator ground state") {
    Hamiltonian h = harmonic(256);
    EigenOptions opts;
    EigenResult r = relax(trial_state(h.grid, h.potential, {0}), h, {}, opts);
    CHECK(r.energy == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.residual < 1e-4);
    REQUIRE(r.energy_trace.size() >= 100);
    for (std::size_t k = 100; k < r.energy_trace.size(); ++k)
        CHECK(r.energy_trace[k] <= r.energy_trace[k - 1] + 1e-9);
}

TEST_CASE("relaxation reports non-convergence with its trace") {
    Hamiltonian h = harmonic(64);
    EigenOptions opts;
    opts.max_steps = 5;
    try {
        relax(trial_state(h.grid, h.potential, {0}), h, {}, opts);
        FAIL("expected a convergence failure");
    } catch (const SimError& err) {
        CHECK(std::string(err.what()).find("not converged") != std::string::npos);
    }
}

TEST_CASE("oscillator spectrum is the odd ladder with definite parities") {
    Hamiltonian h = harmonic(256);
    std::vector<EigenResult> levels = spectrum(h, 4, EigenOptions{});
    REQUIRE(levels.size() == 4);
    for (int k = 0; k < 4; ++k)
        CHECK(levels[static_cast<std::size_t>(k)].energy ==
              doctest::Approx(2.0 * k + 1.0).epsilon(1e-3));

    // Pairwise orthogonality.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < a; ++b)
            CHECK(std::abs(inner_product(levels[static_cast<std::size_t>(a)].state,
                                         levels[static_cast<std::size_t>(b)].state)) < 1e-6);

    // Mirror symmetry alternates with the level index.
    const int n = h.grid.n[0];
    for (int k = 0; k < 4; ++k) {
        double sign = k % 2 == 0 ? 1.0 : -1.0;
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(levels[static_cast<std::size_t>(k)].state.amp[static_cast<std::size_t>(i)] -
                                      sign * levels[static_cast<std::size_t>(k)].state.amp[static_cast<std::size_t>(n - 1 - i)]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("cosine-lattice levels match Mathieu characteristic values") {
    Grid g = make_grid({AxisSpec::periodic(256, 2.0 * std::numbers::pi)}, 1.0);
    Hamiltonian h(parse_potential("2 + 2*cos(2*x)"), parse_potential("1"), g);
    std::vector<EigenResult> levels = spectrum(h, 3, EigenOptions{});
    const double expected[] = {1.5457, 1.8897, 3.8591};  // a0, b1, a1 shifted by +2
    for (int k = 0; k < 3; ++k)
        CHECK(levels[static_cast<std::size_t>(k)].energy ==
              doctest::Approx(expected[k]).epsilon(0.02));
}

TEST_CASE("2D levels follow the index-sum enumeration") {
    Grid g = make_grid({AxisSpec::periodic(64, 2.0 * std::numbers::pi),
                        AxisSpec::periodic(64, 2.0 * std::numbers::pi)},
                       1.0);
    Hamiltonian h(parse_potential("3 + cos(2*y) - 2*cos(x)*cos(y)"), parse_potential("1"), g);
    std::vector<EigenResult> levels = spectrum(h, 3, EigenOptions{});
    CHECK(levels[0].energy == doctest::Approx(2.5865).epsilon(0.02));
    CHECK(levels[1].energy == doctest::Approx(3.3716).epsilon(0.02));
    CHECK(levels[2].energy == doctest::Approx(3.7942).epsilon(0.02));
    CHECK(levels[0].energy < levels[1].energy);
    CHECK(levels[1].energy < levels[2].energy);
}

TEST_CASE("spectrum rejects a nonsense count") {
    Hamiltonian h = harmonic(64);
    CHECK_THROWS_AS(spectrum(h, 0, EigenOptions{}), SimError);
}

}  // TEST_SUITE
