#include "splitspec/bundle.hpp"

namespace splitspec {

std::vector<std::array<int, 2>> mixed_pairs(int dims) {
    std::vector<std::array<int, 2>> pairs;
    for (int j = 1; j < dims; ++j)
        for (int k = 0; k < j; ++k) pairs.push_back({j, k});
    return pairs;
}

DerivativeSet build_derivative_set(const ExprPtr& u, int dims) {
    DerivativeSet s;
    s.dims = dims;
    s.u = u;
    for (int d = 0; d < dims; ++d) {
        s.du[static_cast<std::size_t>(d)] = differentiate(u, d);
        ExprPtr d2 = differentiate(s.du[static_cast<std::size_t>(d)], d);
        s.lap = d == 0 ? d2 : expr_add(s.lap, d2);
    }
    for (int d = 0; d < dims; ++d) {
        ExprPtr d2 = differentiate(differentiate(s.lap, d), d);
        s.bilap = d == 0 ? d2 : expr_add(s.bilap, d2);
    }
    for (auto [j, k] : mixed_pairs(dims))
        s.mixed.push_back(differentiate(s.du[static_cast<std::size_t>(j)], k));
    return s;
}

DerivativeBundle derivative_bundle(const DerivativeSet& set, const Grid& g, double tau,
                                   double alpha) {
    DerivativeBundle b;
    const std::size_t total = g.total();
    b.v = evaluate_on_grid(set.u, g, tau);
    for (double& v : b.v) v *= alpha;
    for (int d = 0; d < g.dims; ++d) {
        b.grad[static_cast<std::size_t>(d)] =
            evaluate_on_grid(set.du[static_cast<std::size_t>(d)], g, tau);
        for (double& v : b.grad[static_cast<std::size_t>(d)]) v *= alpha;
    }
    b.laplacian = evaluate_on_grid(set.lap, g, tau);
    for (double& v : b.laplacian) v *= alpha;
    b.bilaplacian = evaluate_on_grid(set.bilap, g, tau);
    for (double& v : b.bilaplacian) v *= alpha;
    b.grad_dot_grad.assign(total, 0.0);
    for (int d = 0; d < g.dims; ++d)
        for (std::size_t i = 0; i < total; ++i) {
            double gi = b.grad[static_cast<std::size_t>(d)][i];
            b.grad_dot_grad[i] += gi * gi;
        }
    for (const ExprPtr& m : set.mixed) {
        std::vector<double> f = evaluate_on_grid(m, g, tau);
        for (double& v : f) v *= alpha;
        b.mixed_second.push_back(std::move(f));
    }
    return b;
}

DerivativeBundle derivative_bundle(const ExprPtr& u, const Grid& g, double tau, double alpha) {
    return derivative_bundle(build_derivative_set(u, g.dims), g, tau, alpha);
}

}  // namespace splitspec
