#ifndef SPLITSPEC_WAVEFUNCTION_HPP
#define SPLITSPEC_WAVEFUNCTION_HPP

#include <complex>
#include <utility>
#include <vector>

#include "splitspec/grid.hpp"

namespace splitspec {

using cplx = std::complex<double>;

enum class Rep { position, momentum };

// Complex amplitude field over a Grid.  Value semantics: operations build new
// states rather than mutating shared ones.
struct Wavefunction {
    Grid grid;
    Rep rep = Rep::position;
    std::vector<cplx> amp;

    Wavefunction() = default;
    Wavefunction(const Grid& g, Rep r) : grid(g), rep(r), amp(g.total(), cplx{0.0, 0.0}) {}

    double measure() const { return rep == Rep::position ? grid.position_measure() : grid.momentum_measure(); }

    double norm_squared() const;
    double norm() const;
};

cplx inner_product(const Wavefunction& a, const Wavefunction& b);

// Returns the unit-norm copy together with the norm it had before.
std::pair<Wavefunction, double> normalize(const Wavefunction& psi);

enum class Direction { to_momentum, to_position };

// Discrete position <-> momentum transform with the continuum conventions:
// forward kernel e^(-i kappa.beta) weighted by dbeta^n, inverse kernel
// e^(+i beta.kappa) weighted by (dkappa/2pi)^n.  Exact round trip; Parseval
// holds with the representation measures.
Wavefunction transform(const Wavefunction& psi, Direction direction);

}  // namespace splitspec

#endif
