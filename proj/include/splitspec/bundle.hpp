#ifndef SPLITSPEC_BUNDLE_HPP
#define SPLITSPEC_BUNDLE_HPP

#include <array>
#include <vector>

#include "splitspec/expr.hpp"
#include "splitspec/grid.hpp"

namespace splitspec {

// Symbolic derivatives of a bare potential U, built once per potential and
// reused for every evaluation (including at displaced points).
struct DerivativeSet {
    int dims = 1;
    ExprPtr u;
    std::array<ExprPtr, 3> du;     // dU/dx_d
    ExprPtr lap;                   // sum_d d2U/dx_d2
    ExprPtr bilap;                 // laplacian applied twice
    std::vector<ExprPtr> mixed;    // d2U/dx_j dx_k for j>k, see mixed_pairs
};

// Pair ordering for the mixed second derivatives: dims=2 -> {(1,0)},
// dims=3 -> {(1,0),(2,0),(2,1)}.
std::vector<std::array<int, 2>> mixed_pairs(int dims);

DerivativeSet build_derivative_set(const ExprPtr& u, int dims);

// Every derivative field of V = alpha*U the stepping formulas consume,
// evaluated over the grid at one instant.
struct DerivativeBundle {
    std::vector<double> v;
    std::array<std::vector<double>, 3> grad;
    std::vector<double> laplacian;
    std::vector<double> bilaplacian;
    std::vector<double> grad_dot_grad;
    std::vector<std::vector<double>> mixed_second;  // ordering of mixed_pairs
};

DerivativeBundle derivative_bundle(const ExprPtr& u, const Grid& g, double tau, double alpha);
DerivativeBundle derivative_bundle(const DerivativeSet& set, const Grid& g, double tau,
                                   double alpha);

}  // namespace splitspec

#endif
