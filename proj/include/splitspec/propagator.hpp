#ifndef SPLITSPEC_PROPAGATOR_HPP
#define SPLITSPEC_PROPAGATOR_HPP

#include <functional>
#include <vector>

#include "splitspec/hamiltonian.hpp"
#include "splitspec/observables.hpp"
#include "splitspec/wavefunction.hpp"

namespace splitspec {

enum class Mode { real_time, imaginary_time };

struct StepConfig {
    int order = 2;  // 1, 2 or 3
    Mode mode = Mode::real_time;
    double dtau_base = 0.01;
    bool dynamic = false;           // retry steps whose norm drift exceeds 1e-8
    bool renorm_each_step = false;  // forced on in imaginary mode
};

struct EvolvePlan {
    double t_start = 0.0, t_end = 0.0;
    StepConfig config;
    std::vector<double> snapshot_times;  // sorted, within [t_start, t_end]
    bool snapshot_amplitudes = false;
    // Called with (tau, state) at t_start and after every accepted step.
    std::function<void(double, const Wavefunction&)> observer;
};

// One BCH split-operator step.  Order 1 applies the bare exponential pair;
// order 2 adds the gradient-shifted potential prefactor and the matching
// first-order advection of the transformed field; order 3 adds the cubic
// position terms and the mean-field momentum corrections.  Imaginary mode
// substitutes dtau -> -i*dtau in every power of dtau.  The coupling is
// sampled at the step midpoint tau + dtau/2.
Wavefunction step_order1(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode);
Wavefunction step_order2(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode);
Wavefunction step_order3(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                         Mode mode);

Wavefunction apply_step(const Wavefunction& psi, const Hamiltonian& h, double tau, double dtau,
                        const StepConfig& config);

// dtau_base / sqrt(max(alpha, 1)).
double choose_timestep(double alpha_now, const StepConfig& config);

struct EvolveResult {
    Wavefunction final;
    std::vector<Snapshot> snapshots;
    std::vector<double> energy_trace;  // per accepted step, imaginary mode only
    std::size_t steps = 0;
    std::size_t retries = 0;  // dynamic-stepping halvings that were triggered
};

EvolveResult evolve(const Wavefunction& psi0, const Hamiltonian& h, const EvolvePlan& plan);

}  // namespace splitspec

#endif
