#ifndef SPLITSPEC_ORACLE_HPP
#define SPLITSPEC_ORACLE_HPP

#include <Eigen/Dense>
#include <vector>

#include "splitspec/propagator.hpp"

namespace splitspec {

// Explicit matrix form of a Hamiltonian on a small grid, in the amplitude
// convention (it acts on raw cell amplitudes; the grid measure cancels).
// Intended as a brute-force cross-check, so the size is capped at 4096 cells.
struct DenseHamiltonian {
    Eigen::MatrixXcd matrix;
    Grid grid;
    double tau_frozen = 0.0;  // the matrix samples alpha and U at this time
};

DenseHamiltonian dense_hamiltonian(const Hamiltonian& h, double tau);

// exp(-i H t) psi (real time) or exp(-H t) psi (imaginary time) via full
// eigendecomposition.  No renormalization is applied in either mode.
Wavefunction expm_evolve(const DenseHamiltonian& dense, const Wavefunction& psi, double t,
                         Mode mode);

// Lowest `count` eigenvalues, ascending.
std::vector<double> oracle_spectrum(const DenseHamiltonian& dense, int count);

}  // namespace splitspec

#endif
