#ifndef SPLITSPEC_HAMILTONIAN_HPP
#define SPLITSPEC_HAMILTONIAN_HPP

#include <memory>
#include <mutex>
#include <vector>

#include "splitspec/bundle.hpp"
#include "splitspec/expr.hpp"
#include "splitspec/grid.hpp"

namespace splitspec {

// Pointwise fields the stepping kernels reuse across steps.  Base fields
// depend only on the grid (and on tau when the potential itself is
// time-dependent); shifted fields are keyed by the (alpha, shift) pair that
// produced them.  The cache is an optimization detail guarded by a mutex so
// shared Hamiltonians stay safe to step concurrently.
struct StepFieldCache {
    bool base_valid = false;
    int base_order = 0;
    double base_tau = 0.0;
    std::array<std::vector<double>, 3> coords;  // cell-center coordinates
    std::array<std::vector<double>, 3> kappa;   // per-dim momentum values
    std::vector<double> kappa_sq;               // |kappa|^2
    std::vector<double> u;                      // U at beta
    std::array<std::vector<double>, 3> du;      // dU/dx_d at beta
    std::vector<double> lap_u;                  // laplacian of U at beta
    std::vector<std::vector<double>> mixed_u;   // mixed second derivatives at beta

    bool shift_valid = false;
    double shift_alpha = 0.0, shift_s2 = 0.0, shift_tau = 0.0;
    int shift_order = 0;
    std::vector<double> u_s, lap_u_s;        // U fields at displaced points
    std::vector<double> gdg_u_s, bilap_u_s;  // order-3 extras at displaced points
};

// Dimensionless Hamiltonian: kinetic term is the plain spectral |kappa|^2,
// potential term is alpha(tau) * U(beta, tau).
struct Hamiltonian {
    ExprPtr potential;       // U
    ExprPtr alpha_schedule;  // alpha(t), must stay positive over any plan
    Grid grid;
    DerivativeSet derivs;
    bool potential_time_dependent = false;

    mutable StepFieldCache cache;
    std::shared_ptr<std::mutex> cache_mutex = std::make_shared<std::mutex>();

    Hamiltonian() = default;
    Hamiltonian(ExprPtr u, ExprPtr alpha, const Grid& g);

    double alpha_at(double tau) const;  // evaluates the schedule; rejects <= 0
};

bool expr_uses_time(const ExprPtr& e);

namespace detail {

// Cache fills; the caller must hold *h.cache_mutex for the whole time it uses
// the filled fields.  `order` selects how many derivative fields are needed.
void fill_base_fields(const Hamiltonian& h, double tau, int order);
void fill_shift_fields(const Hamiltonian& h, double tau, double alpha, double s2, int order);

// Points where alpha*U is at least this high get the order-1 local treatment.
inline constexpr double kWallGuard = 1e5;

}  // namespace detail

}  // namespace splitspec

#endif
