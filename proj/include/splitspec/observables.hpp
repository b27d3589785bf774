#ifndef SPLITSPEC_OBSERVABLES_HPP
#define SPLITSPEC_OBSERVABLES_HPP

#include <array>
#include <vector>

#include "splitspec/hamiltonian.hpp"
#include "splitspec/wavefunction.hpp"

namespace splitspec {

// Time-stamped record of everything the output layer serializes.
struct Snapshot {
    double tau = 0.0;
    std::vector<double> density;  // |psi|^2 at cell centers
    std::array<double, 3> mean_position{0, 0, 0};
    std::array<double, 3> spread{0, 0, 0};
    double energy = 0.0;
    double norm = 0.0;
    std::vector<cplx> amplitudes;  // raw field, kept only when requested
};

struct Moments {
    std::array<double, 3> mean{0, 0, 0};
    std::array<double, 3> spread{0, 0, 0};
};

// Cell-center quadrature moments of a normalized position-space state.
Moments moments(const Wavefunction& psi);

// <psi|H|psi> at time tau: kinetic part spectral, potential part pointwise.
double energy_expectation(const Wavefunction& psi, const Hamiltonian& h, double tau);

// Mean momentum component <kappa_d> (used by the Ehrenfest checks).
double mean_momentum(const Wavefunction& psi, int dim);

// Axis-aligned interval per dimension.
struct Region {
    std::vector<std::array<double, 2>> bounds;  // {lo, hi} per dim
};

// Raw (unnormalized) probability: sum of |psi|^2 * measure over cells whose
// centers fall inside the region.
double probability_in_region(const Wavefunction& psi, const Region& region);

double beat_period(double e_low, double e_high);

Snapshot take_snapshot(const Wavefunction& psi, const Hamiltonian& h, double tau,
                       bool keep_amplitudes);

}  // namespace splitspec

#endif
