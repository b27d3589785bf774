#include "splitspec/oracle.hpp"

#include <cmath>

#include "splitspec/errors.hpp"

namespace splitspec {

DenseHamiltonian dense_hamiltonian(const Hamiltonian& h, double tau) {
    const Grid& g = h.grid;
    const std::size_t total = g.total();
    if (total > 4096)
        throw SimError("dense_hamiltonian: grid has " + std::to_string(total) +
                       " cells, cap is 4096");

    const double alpha = h.alpha_at(tau);
    std::vector<double> u = evaluate_on_grid(h.potential, g, tau);

    DenseHamiltonian dense;
    dense.grid = g;
    dense.tau_frozen = tau;
    dense.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total),
                                          static_cast<Eigen::Index>(total));

    // Kinetic columns: push each unit amplitude through the spectral
    // multiplier; the forward/inverse measure factors cancel exactly.
    Wavefunction unit(g, Rep::position);
    for (std::size_t j = 0; j < total; ++j) {
        unit.amp[j] = cplx{1.0, 0.0};
        Wavefunction phi = transform(unit, Direction::to_momentum);
        for (std::size_t k = 0; k < total; ++k) {
            auto idx = g.unravel(k);
            double ksq = 0.0;
            for (int d = 0; d < g.dims; ++d) {
                double kd = g.momentum(d, idx[static_cast<std::size_t>(d)]);
                ksq += kd * kd;
            }
            phi.amp[k] *= ksq;
        }
        Wavefunction col = transform(phi, Direction::to_position);
        for (std::size_t i = 0; i < total; ++i)
            dense.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col.amp[i];
        unit.amp[j] = cplx{0.0, 0.0};
    }

    for (std::size_t i = 0; i < total; ++i)
        dense.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += alpha * u[i];
    return dense;
}

Wavefunction expm_evolve(const DenseHamiltonian& dense, const Wavefunction& psi, double t,
                         Mode mode) {
    if (psi.rep != Rep::position) throw SimError("expm_evolve: position representation required");
    if (!(psi.grid == dense.grid)) throw SimError("expm_evolve: grid mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.matrix);
    if (solver.info() != Eigen::Success) throw SimError("expm_evolve: eigendecomposition failed");

    const Eigen::Index n = dense.matrix.rows();
    Eigen::VectorXcd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = psi.amp[static_cast<std::size_t>(i)];

    Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() * a;
    for (Eigen::Index i = 0; i < n; ++i) {
        double e = solver.eigenvalues()(i);
        cplx factor = mode == Mode::real_time ? std::exp(cplx{0.0, -e * t})
                                              : cplx{std::exp(-e * t), 0.0};
        coeffs(i) *= factor;
    }
    Eigen::VectorXcd out = solver.eigenvectors() * coeffs;
    if (!out.allFinite()) throw SimError("expm_evolve: non-finite result");

    Wavefunction result(dense.grid, Rep::position);
    for (Eigen::Index i = 0; i < n; ++i) result.amp[static_cast<std::size_t>(i)] = out(i);
    return result;
}

std::vector<double> oracle_spectrum(const DenseHamiltonian& dense, int count) {
    if (count < 1 || count > dense.matrix.rows())
        throw SimError("oracle_spectrum: count out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.matrix,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw SimError("oracle_spectrum: eigendecomposition failed");
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(solver.eigenvalues()(i));
    return out;
}

}  // namespace splitspec
