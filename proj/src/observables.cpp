#include "splitspec/observables.hpp"

#include <cmath>
#include <numbers>

#include "splitspec/errors.hpp"

namespace splitspec {

namespace {

void require_normalized(const Wavefunction& psi, const char* who) {
    double n = psi.norm();
    if (std::fabs(n - 1.0) > 1e-6)
        throw SimError(std::string(who) + ": state is not normalized (norm " + std::to_string(n) +
                       ")");
}

}  // namespace

Moments moments(const Wavefunction& psi) {
    if (psi.rep != Rep::position) throw SimError("moments: position representation required");
    require_normalized(psi, "moments");
    const Grid& g = psi.grid;
    const double w = g.position_measure();
    std::array<double, 3> m1{0, 0, 0}, m2{0, 0, 0};
    for (std::size_t lin = 0; lin < psi.amp.size(); ++lin) {
        const double rho = std::norm(psi.amp[lin]) * w;
        auto idx = g.unravel(lin);
        for (int d = 0; d < g.dims; ++d) {
            const double x = g.position(d, idx[static_cast<std::size_t>(d)]);
            m1[static_cast<std::size_t>(d)] += rho * x;
            m2[static_cast<std::size_t>(d)] += rho * x * x;
        }
    }
    Moments out;
    for (int d = 0; d < g.dims; ++d) {
        auto du = static_cast<std::size_t>(d);
        out.mean[du] = m1[du];
        double var = m2[du] - m1[du] * m1[du];
        out.spread[du] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return out;
}

double energy_expectation(const Wavefunction& psi, const Hamiltonian& h, double tau) {
    if (psi.rep != Rep::position)
        throw SimError("energy_expectation: position representation required");
    if (!(psi.grid == h.grid))
        throw SimError("energy_expectation: state grid differs from Hamiltonian grid");
    require_normalized(psi, "energy_expectation");
    const Grid& g = psi.grid;
    const double alpha = h.alpha_at(tau);

    std::lock_guard<std::mutex> lock(*h.cache_mutex);
    detail::fill_base_fields(h, tau, 1);
    const StepFieldCache& c = h.cache;

    Wavefunction phi = transform(psi, Direction::to_momentum);
    double kinetic = 0.0;
    const double wk = g.momentum_measure();
    for (std::size_t lin = 0; lin < phi.amp.size(); ++lin)
        kinetic += c.kappa_sq[lin] * std::norm(phi.amp[lin]) * wk;

    double potential = 0.0;
    const double wx = g.position_measure();
    for (std::size_t lin = 0; lin < psi.amp.size(); ++lin)
        potential += alpha * c.u[lin] * std::norm(psi.amp[lin]) * wx;

    return kinetic + potential;
}

double mean_momentum(const Wavefunction& psi, int dim) {
    const Wavefunction* phi = &psi;
    Wavefunction tmp;
    if (psi.rep == Rep::position) {
        tmp = transform(psi, Direction::to_momentum);
        phi = &tmp;
    }
    const Grid& g = phi->grid;
    if (dim < 0 || dim >= g.dims) throw SimError("mean_momentum: dimension out of range");
    const double wk = g.momentum_measure();
    double s = 0.0, n2 = 0.0;
    for (std::size_t lin = 0; lin < phi->amp.size(); ++lin) {
        auto idx = g.unravel(lin);
        double rho = std::norm(phi->amp[lin]) * wk;
        s += g.momentum(dim, idx[static_cast<std::size_t>(dim)]) * rho;
        n2 += rho;
    }
    if (!(n2 > 0.0)) throw SimError("mean_momentum: zero-norm state");
    return s / n2;
}

double probability_in_region(const Wavefunction& psi, const Region& region) {
    if (psi.rep != Rep::position)
        throw SimError("probability_in_region: position representation required");
    const Grid& g = psi.grid;
    if (region.bounds.size() != static_cast<std::size_t>(g.dims))
        throw SimError("probability_in_region: region dimensionality mismatch");
    for (int d = 0; d < g.dims; ++d) {
        const auto& b = region.bounds[static_cast<std::size_t>(d)];
        if (!(b[1] > b[0])) throw SimError("probability_in_region: empty region");
    }
    const double w = g.position_measure();
    double p = 0.0;
    for (std::size_t lin = 0; lin < psi.amp.size(); ++lin) {
        auto idx = g.unravel(lin);
        bool inside = true;
        for (int d = 0; d < g.dims && inside; ++d) {
            const auto& b = region.bounds[static_cast<std::size_t>(d)];
            double x = g.position(d, idx[static_cast<std::size_t>(d)]);
            inside = x >= b[0] && x <= b[1];
        }
        if (inside) p += std::norm(psi.amp[lin]) * w;
    }
    return p;
}

double beat_period(double e_low, double e_high) {
    if (e_low == e_high) throw SimError("beat_period: degenerate energies");
    return 2.0 * std::numbers::pi / std::fabs(e_high - e_low);
}

Snapshot take_snapshot(const Wavefunction& psi, const Hamiltonian& h, double tau,
                       bool keep_amplitudes) {
    Snapshot s;
    s.tau = tau;
    s.norm = psi.norm();
    s.density.resize(psi.amp.size());
    for (std::size_t i = 0; i < psi.amp.size(); ++i) s.density[i] = std::norm(psi.amp[i]);
    auto [unit, n] = normalize(psi);
    Moments m = moments(unit);
    s.mean_position = m.mean;
    s.spread = m.spread;
    s.energy = energy_expectation(unit, h, tau);
    if (keep_amplitudes) s.amplitudes = psi.amp;
    return s;
}

}  // namespace splitspec
