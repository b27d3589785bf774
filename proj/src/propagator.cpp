#include "splitspec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "splitspec/errors.hpp"

namespace splitspec {

namespace {

using detail::kWallGuard;

// Shared kernel for all three orders.  Everything is expressed through the
// step parameter z (z = dtau in real time, z = -i*dtau in imaginary time):
//   iz = i*z        multiplies V and kappa^2,
//   s2 = z^2        multiplies the gradient shift, laplacian and advection,
//   c3 = i*z^3      multiplies the cubic terms.
// In both modes s2 is real; iz and c3 are imaginary in real time and real in
// imaginary time, which is exactly the per-power substitution dtau -> -i*dtau.
Wavefunction step_generic(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                          Mode mode, int order) {
    if (psi.rep != Rep::position) throw SimError("step: position representation required");
    if (!(psi.grid == h.grid)) throw SimError("step: state grid differs from Hamiltonian grid");
    if (dtau == 0.0) return psi;
    if (!(dtau > 0.0)) throw SimError("step: dtau must be positive");

    const Grid& g = h.grid;
    const std::size_t total = g.total();
    const bool real = mode == Mode::real_time;
    const double tau_mid = tau + 0.5 * dtau;
    const double alpha = h.alpha_at(tau_mid);

    const cplx iz = real ? cplx{0.0, dtau} : cplx{dtau, 0.0};
    const double s2 = real ? dtau * dtau : -dtau * dtau;
    const double dt3 = dtau * dtau * dtau;
    const cplx c3 = real ? cplx{0.0, dt3} : cplx{-dt3, 0.0};

    std::lock_guard<std::mutex> lock(*h.cache_mutex);
    detail::fill_base_fields(h, tau_mid, order);
    if (order >= 2) detail::fill_shift_fields(h, tau_mid, alpha, s2, order);
    const StepFieldCache& c = h.cache;

    // Order-3 mean-field constants over the current density.
    double C = 0.0;
    std::vector<double> Cjk;
    if (order >= 3) {
        double w = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            double rho = std::norm(psi.amp[i]);
            w += rho;
            C += c.lap_u[i] * rho;
        }
        C *= alpha / w;
        for (const auto& m : c.mixed_u) {
            double s = 0.0;
            for (std::size_t i = 0; i < total; ++i) s += m[i] * std::norm(psi.amp[i]);
            Cjk.push_back(alpha * s / w);
        }
    }

    Wavefunction phi = transform(psi, Direction::to_momentum);
    const auto pairs = mixed_pairs(g.dims);
    for (std::size_t i = 0; i < total; ++i) {
        cplx w = -iz * c.kappa_sq[i];
        if (order >= 3) {
            w -= (2.0 / 3.0) * C * c3 * c.kappa_sq[i];
            for (std::size_t m = 0; m < pairs.size(); ++m)
                w -= (4.0 / 3.0) * c3 * Cjk[m] *
                     c.kappa[static_cast<std::size_t>(pairs[m][0])][i] *
                     c.kappa[static_cast<std::size_t>(pairs[m][1])][i];
        }
        phi.amp[i] *= std::exp(w);
    }

    Wavefunction chi = transform(phi, Direction::to_position);

    std::array<Wavefunction, 3> grad_chi;
    if (order >= 2) {
        for (int d = 0; d < g.dims; ++d) {
            Wavefunction tmp = phi;
            const auto& kd = c.kappa[static_cast<std::size_t>(d)];
            for (std::size_t i = 0; i < total; ++i) tmp.amp[i] *= cplx{0.0, kd[i]};
            grad_chi[static_cast<std::size_t>(d)] = transform(tmp, Direction::to_position);
        }
    }

    Wavefunction out(g, Rep::position);
    for (std::size_t i = 0; i < total; ++i) {
        const double v = alpha * c.u[i];
        cplx w;
        cplx field;
        if (order == 1 || v >= kWallGuard) {
            w = -iz * v;
            field = chi.amp[i];
        } else {
            w = cplx{0.5 * s2 * alpha * c.lap_u_s[i], 0.0} - iz * (alpha * c.u_s[i]);
            if (order >= 3)
                w += c3 * ((2.0 / 3.0) * alpha * alpha * c.gdg_u_s[i] +
                           (1.0 / 6.0) * alpha * c.bilap_u_s[i]);
            field = chi.amp[i];
            for (int d = 0; d < g.dims; ++d) {
                auto du = static_cast<std::size_t>(d);
                field += s2 * alpha * c.du[du][i] * grad_chi[du].amp[i];
            }
        }
        out.amp[i] = std::exp(w) * field;
    }
    return out;
}

}  // namespace

Wavefunction step_order1(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode) {
    return step_generic(psi, h, tau, dtau, mode, 1);
}

Wavefunction step_order2(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode) {
    return step_generic(psi, h, tau, dtau, mode, 2);
}

Wavefunction step_order3(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode) {
    return step_generic(psi, h, tau, dtau, mode, 3);
}

Wavefunction apply_step(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                        const StepConfig& config) {
    switch (config.order) {
        case 1: return step_generic(psi, h, tau, dtau, config.mode, 1);
        case 2: return step_generic(psi, h, tau, dtau, config.mode, 2);
        case 3: return step_generic(psi, h, tau, dtau, config.mode, 3);
        default: throw SimError("apply_step: order must be 1, 2 or 3");
    }
}

double choose_timestep(double alpha_now, const StepConfig& config) {
    if (!(alpha_now > 0.0)) throw SimError("choose_timestep: alpha must be positive");
    return config.dtau_base / std::sqrt(std::max(alpha_now, 1.0));
}

EvolveResult evolve(const Wavefunction& psi0, const Hamiltonian& h, const EvolvePlan& plan) {
    if (plan.t_end < plan.t_start) throw SimError("evolve: t_end must not precede t_start");
    for (std::size_t i = 0; i < plan.snapshot_times.size(); ++i) {
        double t = plan.snapshot_times[i];
        if (t < plan.t_start - 1e-12 || t > plan.t_end + 1e-12)
            throw SimError("evolve: snapshot time outside [t_start, t_end]");
        if (i > 0 && t < plan.snapshot_times[i - 1])
            throw SimError("evolve: snapshot times must be sorted");
    }

    StepConfig cfg = plan.config;
    if (cfg.mode == Mode::imaginary_time) cfg.renorm_each_step = true;

    EvolveResult r;
    r.final = psi0;
    double tau = plan.t_start;
    if (plan.observer) plan.observer(tau, r.final);
    std::size_t snap_i = 0;
    const double horizon_eps = 1e-12 * std::max(1.0, std::fabs(plan.t_end));

    while (tau < plan.t_end - horizon_eps) {
        double dtau = std::min(choose_timestep(h.alpha_at(tau), cfg), plan.t_end - tau);
        const double norm_before = r.final.norm();

        Wavefunction next = apply_step(r.final, h, tau, dtau, cfg);
        if (cfg.dynamic && cfg.mode == Mode::real_time) {
            for (int halvings = 0; halvings < 20; ++halvings) {
                if (std::fabs(next.norm() - norm_before) <= 1e-8) break;
                dtau *= 0.5;
                ++r.retries;
                next = apply_step(r.final, h, tau, dtau, cfg);
            }
        }
        if (!std::isfinite(next.norm()))
            throw SimError("evolve: non-finite amplitudes at tau = " + std::to_string(tau + dtau));

        while (snap_i < plan.snapshot_times.size() &&
               plan.snapshot_times[snap_i] <= tau + 0.5 * dtau) {
            r.snapshots.push_back(take_snapshot(r.final, h, tau, plan.snapshot_amplitudes));
            ++snap_i;
        }

        r.final = std::move(next);
        tau += dtau;
        ++r.steps;

        if (cfg.renorm_each_step) r.final = normalize(r.final).first;
        if (cfg.mode == Mode::imaginary_time)
            r.energy_trace.push_back(energy_expectation(r.final, h, tau));
        if (plan.observer) plan.observer(tau, r.final);
    }

    while (snap_i < plan.snapshot_times.size()) {
        r.snapshots.push_back(take_snapshot(r.final, h, tau, plan.snapshot_amplitudes));
        ++snap_i;
    }
    return r;
}

}  // namespace splitspec
