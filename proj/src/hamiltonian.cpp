#include "splitspec/hamiltonian.hpp"

#include <cmath>

#include "splitspec/errors.hpp"

namespace splitspec {

namespace {

bool uses_symbol(const ExprPtr& e, const char* name) {
    if (!e) return false;
    if (e->op == PotentialExpr::Op::symbol && e->name == name) return true;
    return uses_symbol(e->a, name) || uses_symbol(e->b, name);
}

}  // namespace

bool expr_uses_time(const ExprPtr& e) { return uses_symbol(e, "t"); }

Hamiltonian::Hamiltonian(ExprPtr u, ExprPtr alpha, const Grid& g)
    : potential(std::move(u)),
      alpha_schedule(std::move(alpha)),
      grid(g),
      derivs(build_derivative_set(potential, g.dims)),
      potential_time_dependent(expr_uses_time(potential)) {
    if (uses_symbol(alpha_schedule, "x") || uses_symbol(alpha_schedule, "y") ||
        uses_symbol(alpha_schedule, "z"))
        throw SimError("Hamiltonian: the coupling schedule may only depend on t");
}

double Hamiltonian::alpha_at(double tau) const {
    double a = evaluate_scalar(alpha_schedule, tau);
    if (!(a > 0.0) || !std::isfinite(a))
        throw SimError("Hamiltonian: alpha(" + std::to_string(tau) + ") = " + std::to_string(a) +
                       " is not positive");
    return a;
}

namespace detail {

void fill_base_fields(const Hamiltonian& h, double tau, int order) {
    StepFieldCache& c = h.cache;
    const Grid& g = h.grid;
    const std::size_t total = g.total();

    if (c.coords[0].empty()) {
        for (int d = 0; d < g.dims; ++d) {
            c.coords[static_cast<std::size_t>(d)].resize(total);
            c.kappa[static_cast<std::size_t>(d)].resize(total);
        }
        c.kappa_sq.assign(total, 0.0);
        for (std::size_t lin = 0; lin < total; ++lin) {
            auto idx = g.unravel(lin);
            for (int d = 0; d < g.dims; ++d) {
                auto du = static_cast<std::size_t>(d);
                c.coords[du][lin] = g.position(d, idx[du]);
                double k = g.momentum(d, idx[du]);
                c.kappa[du][lin] = k;
                c.kappa_sq[lin] += k * k;
            }
        }
    }

    if (h.potential_time_dependent && c.base_tau != tau) c.base_order = 0;
    const bool stale = !c.base_valid || c.base_order < order;
    if (!stale) return;

    const double* xs = c.coords[0].data();
    const double* ys = g.dims > 1 ? c.coords[1].data() : nullptr;
    const double* zs = g.dims > 2 ? c.coords[2].data() : nullptr;

    c.u = evaluate_at_points(h.derivs.u, g.dims, xs, ys, zs, total, tau);
    if (order >= 2) {
        for (int d = 0; d < g.dims; ++d)
            c.du[static_cast<std::size_t>(d)] = evaluate_at_points(
                h.derivs.du[static_cast<std::size_t>(d)], g.dims, xs, ys, zs, total, tau);
    }
    if (order >= 3) {
        c.lap_u = evaluate_at_points(h.derivs.lap, g.dims, xs, ys, zs, total, tau);
        c.mixed_u.clear();
        for (const ExprPtr& m : h.derivs.mixed)
            c.mixed_u.push_back(evaluate_at_points(m, g.dims, xs, ys, zs, total, tau));
    }
    c.base_valid = true;
    c.base_order = order;
    c.base_tau = tau;
    c.shift_valid = false;  // shifted fields derive from the base fields
}

void fill_shift_fields(const Hamiltonian& h, double tau, double alpha, double s2, int order) {
    StepFieldCache& c = h.cache;
    const Grid& g = h.grid;
    const std::size_t total = g.total();

    const bool fresh = c.shift_valid && c.shift_order >= order && c.shift_alpha == alpha &&
                       c.shift_s2 == s2 && (!h.potential_time_dependent || c.shift_tau == tau);
    if (fresh) return;

    std::array<std::vector<double>, 3> shifted;
    for (int d = 0; d < g.dims; ++d) {
        auto du = static_cast<std::size_t>(d);
        shifted[du] = c.coords[du];
        for (std::size_t i = 0; i < total; ++i) {
            if (alpha * c.u[i] >= kWallGuard) continue;  // order-1 treatment, no shift
            shifted[du][i] += s2 * alpha * c.du[du][i];
        }
    }
    const double* xs = shifted[0].data();
    const double* ys = g.dims > 1 ? shifted[1].data() : nullptr;
    const double* zs = g.dims > 2 ? shifted[2].data() : nullptr;

    c.u_s = evaluate_at_points(h.derivs.u, g.dims, xs, ys, zs, total, tau);
    c.lap_u_s = evaluate_at_points(h.derivs.lap, g.dims, xs, ys, zs, total, tau);
    if (order >= 3) {
        c.gdg_u_s.assign(total, 0.0);
        for (int d = 0; d < g.dims; ++d) {
            std::vector<double> dd = evaluate_at_points(h.derivs.du[static_cast<std::size_t>(d)],
                                                        g.dims, xs, ys, zs, total, tau);
            for (std::size_t i = 0; i < total; ++i) c.gdg_u_s[i] += dd[i] * dd[i];
        }
        c.bilap_u_s = evaluate_at_points(h.derivs.bilap, g.dims, xs, ys, zs, total, tau);
    }
    c.shift_valid = true;
    c.shift_order = order;
    c.shift_alpha = alpha;
    c.shift_s2 = s2;
    c.shift_tau = tau;
}

}  // namespace detail

}  // namespace splitspec
