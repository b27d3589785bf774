#ifndef SPLITSPEC_EIGENSOLVER_HPP
#define SPLITSPEC_EIGENSOLVER_HPP

#include <vector>

#include "splitspec/propagator.hpp"

namespace splitspec {

struct EigenOptions {
    double energy_tolerance = 1e-8;  // on the per-step energy change, scaled by dtau
    long max_steps = 200000;
    int reorth_every = 1;  // re-deflate against the found basis every k steps
    int order = 2;         // imaginary-time step order
    double dtau_base = 0.01;
};

struct EigenResult {
    double energy = 0.0;
    Wavefunction state;  // normalized
    long steps_taken = 0;
    double residual = 0.0;             // ||(H - E) psi||, applied spectrally
    std::vector<double> energy_trace;  // <H> after every relaxation step
};

// Parity-definite starting guesses: aperiodic dimensions contribute
// (beta-origin)^(n mod 2) * exp(-(beta-origin)^2); periodic dimensions
// contribute cos(floor(n/2) k0 (beta-origin)) for even n and
// sin(ceil(n/2) k0 (beta-origin)) for odd n (k0 = 2 pi / period), plus one
// overall 1/(U + 0.1) factor that concentrates weight in the potential
// valleys.  Result is normalized.
Wavefunction trial_state(const Grid& g, const ExprPtr& u,
                         const std::vector<int>& quantum_numbers);

// Gram-Schmidt projection against an orthonormal basis, renormalized.
// Throws if the remainder norm falls below 1e-10.
Wavefunction deflate(const Wavefunction& psi, const std::vector<Wavefunction>& basis);

// Imaginary-time relaxation onto the lowest state orthogonal to `basis`.
EigenResult relax(const Wavefunction& psi_trial, const Hamiltonian& h,
                  const std::vector<Wavefunction>& basis, const EigenOptions& opts);

// Lowest `count` eigenpairs, nondecreasing in energy.  Trial quantum numbers
// are enumerated 0,1,2,... in 1D and by increasing index sum (then first
// index) in higher dimensions; each state is deflated against all previous.
std::vector<EigenResult> spectrum(const Hamiltonian& h, int count, const EigenOptions& opts);

}  // namespace splitspec

#endif
