#include "splitspec/eigensolver.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "splitspec/errors.hpp"

namespace splitspec {

namespace {

// ||(H - E) psi|| with the kinetic part applied spectrally.
double spectral_residual(const Wavefunction& psi, const Hamiltonian& h, double energy) {
    const Grid& g = psi.grid;
    std::lock_guard<std::mutex> lock(*h.cache_mutex);
    detail::fill_base_fields(h, 0.0, 1);
    const StepFieldCache& c = h.cache;

    Wavefunction phi = transform(psi, Direction::to_momentum);
    for (std::size_t i = 0; i < phi.amp.size(); ++i) phi.amp[i] *= c.kappa_sq[i];
    Wavefunction kin = transform(phi, Direction::to_position);

    const double alpha = h.alpha_at(0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        cplx r = kin.amp[i] + (alpha * c.u[i] - energy) * psi.amp[i];
        acc += std::norm(r);
    }
    return std::sqrt(acc * g.position_measure());
}

std::vector<std::vector<int>> enumerate_quantum_numbers(int dims, int count) {
    std::vector<std::vector<int>> qns;
    if (dims == 1) {
        for (int n = 0; n < count; ++n) qns.push_back({n});
        return qns;
    }
    for (int s = 0; static_cast<int>(qns.size()) < count; ++s) {
        if (dims == 2) {
            for (int m = 0; m <= s && static_cast<int>(qns.size()) < count; ++m)
                qns.push_back({m, s - m});
        } else {
            for (int m = 0; m <= s && static_cast<int>(qns.size()) < count; ++m)
                for (int n = 0; n + m <= s && static_cast<int>(qns.size()) < count; ++n)
                    qns.push_back({m, n, s - m - n});
        }
    }
    return qns;
}

}  // namespace

Wavefunction trial_state(const Grid& g, const ExprPtr& u,
                         const std::vector<int>& quantum_numbers) {
    if (quantum_numbers.size() != static_cast<std::size_t>(g.dims))
        throw SimError("trial_state: need one quantum number per dimension");
    for (int n : quantum_numbers)
        if (n < 0) throw SimError("trial_state: quantum numbers must be nonnegative");

    bool any_periodic = false;
    for (int d = 0; d < g.dims; ++d) any_periodic = any_periodic || g.periodic[d];

    std::vector<double> valley;
    if (any_periodic) {
        valley = evaluate_on_grid(u, g, 0.0);
        for (double& v : valley) v = 1.0 / (v + 0.1);
    }

    Wavefunction psi(g, Rep::position);
    for (std::size_t lin = 0; lin < psi.amp.size(); ++lin) {
        auto idx = g.unravel(lin);
        double val = 1.0;
        for (int d = 0; d < g.dims; ++d) {
            auto du = static_cast<std::size_t>(d);
            double b = g.position(d, idx[du]) - g.origin[du];
            int n = quantum_numbers[du];
            if (g.periodic[d]) {
                // Periodized form of b^(n mod 2): same parity, but with
                // support in both lattice translation classes.  The bare
                // monomial family lies entirely in one class, and relaxation
                // (which preserves the class) could then never reach half the
                // spectrum of a multi-valley cell.
                double k0 = 2.0 * std::numbers::pi / g.period[du];
                val *= n % 2 != 0 ? std::sin((n + 1) / 2 * k0 * b) : std::cos(n / 2 * k0 * b);
            } else {
                if (n % 2 != 0) val *= b;
                val *= std::exp(-b * b);
            }
        }
        if (any_periodic) val *= valley[lin];
        psi.amp[lin] = cplx{val, 0.0};
    }
    return normalize(psi).first;
}

Wavefunction deflate(const Wavefunction& psi, const std::vector<Wavefunction>& basis) {
    Wavefunction out = psi;
    for (const Wavefunction& b : basis) {
        cplx overlap = inner_product(b, out);
        for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] -= overlap * b.amp[i];
    }
    double remainder = out.norm();
    if (remainder < 1e-10)
        throw SimError("deflate: state lies in the span of the basis (remainder norm " +
                       std::to_string(remainder) + ")");
    return normalize(out).first;
}

EigenResult relax(const Wavefunction& psi_trial, const Hamiltonian& h,
                  const std::vector<Wavefunction>& basis, const EigenOptions& opts) {
    if (!(opts.energy_tolerance > 0.0)) throw SimError("relax: tolerance must be positive");

    StepConfig cfg;
    cfg.order = opts.order;
    cfg.mode = Mode::imaginary_time;
    cfg.dtau_base = opts.dtau_base;
    cfg.renorm_each_step = true;
    const double dtau = choose_timestep(h.alpha_at(0.0), cfg);

    Wavefunction psi = basis.empty() ? normalize(psi_trial).first : deflate(psi_trial, basis);

    EigenResult res;
    double e_prev = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= opts.max_steps; ++k) {
        psi = apply_step(psi, h, 0.0, dtau, cfg);
        psi = normalize(psi).first;
        if (!basis.empty() && opts.reorth_every > 0 && k % opts.reorth_every == 0)
            psi = deflate(psi, basis);
        double e = energy_expectation(psi, h, 0.0);
        res.energy_trace.push_back(e);
        if (std::fabs(e - e_prev) < opts.energy_tolerance * dtau) {
            res.energy = e;
            res.state = std::move(psi);
            res.steps_taken = k;
            res.residual = spectral_residual(res.state, h, res.energy);
            return res;
        }
        e_prev = e;
    }
    std::string tail;
    std::size_t n = res.energy_trace.size();
    for (std::size_t i = n > 3 ? n - 3 : 0; i < n; ++i)
        tail += " " + std::to_string(res.energy_trace[i]);
    throw SimError("relax: not converged after " + std::to_string(opts.max_steps) +
                   " steps; energy trace tail:" + tail);
}

std::vector<EigenResult> spectrum(const Hamiltonian& h, int count, const EigenOptions& opts) {
    if (count < 1) throw SimError("spectrum: count must be at least 1");
    auto qns = enumerate_quantum_numbers(h.grid.dims, count);

    std::vector<EigenResult> results;
    std::vector<Wavefunction> basis;
    for (int i = 0; i < count; ++i) {
        Wavefunction trial = trial_state(h.grid, h.potential, qns[static_cast<std::size_t>(i)]);
        try {
            EigenResult r = relax(trial, h, basis, opts);
            basis.push_back(r.state);
            results.push_back(std::move(r));
        } catch (const SimError& err) {
            throw SimError("spectrum: state " + std::to_string(i) + ": " + err.what());
        }
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const EigenResult& a, const EigenResult& b) { return a.energy < b.energy; });
    return results;
}

}  // namespace splitspec
