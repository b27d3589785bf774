#ifndef SPLITSPEC_EXPR_HPP
#define SPLITSPEC_EXPR_HPP

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "splitspec/grid.hpp"

namespace splitspec {

struct PotentialExpr;
using ExprPtr = std::shared_ptr<const PotentialExpr>;

// Immutable expression tree for potentials U(x,y,z,t) and coupling schedules
// alpha(t).  Built by parse_potential; named parameters are substituted as
// constants at parse time, so a finished tree only ever references x, y, z, t.
struct PotentialExpr {
    enum class Op {
        constant,
        symbol,  // "x", "y", "z", "t"
        add,
        sub,
        mul,
        div,
        pow,  // exponent is the second child; must be constant to differentiate
        neg,
        sin,
        cos,
        exp,
        erf,
        sqrt,
        wall  // piecewise barrier in x: `height` outside [lo,hi], 0 inside
    };

    Op op = Op::constant;
    double value = 0.0;  // Op::constant
    std::string name;    // Op::symbol
    ExprPtr a, b;        // children (unary ops use a only)
    double wall_lo = 0.0, wall_hi = 0.0, wall_height = 1e6;
};

using ParamMap = std::map<std::string, double>;

// Grammar:  expr := term (('+'|'-') term)*
//           term := factor (('*'|'/') factor)*
//           factor := unary ('^' unary)?
//           unary := '-'? atom
//           atom := number | ident | func '(' args ')' | '(' expr ')'
// ident is one of x, y, z, t, the constant pi, or a declared parameter.
// Functions: sin, cos, exp, erf, sqrt (1 argument) and wall(lo, hi[, height])
// whose arguments must be constants (height defaults to 1e6).
ExprPtr parse_potential(const std::string& text, const ParamMap& params = {});

// Exact symbolic partial derivative along spatial dimension dim (0=x,1=y,2=z).
// wall differentiates to 0 by definition; d/dt is rejected.
ExprPtr differentiate(const ExprPtr& e, int dim);
ExprPtr differentiate(const ExprPtr& e, const std::string& var);

// Evaluation.  `dims` bounds which spatial symbols are legal (a 1-d grid must
// not reference y).  Scalar evaluation reports division by zero; field
// evaluation reports the first grid point with a non-finite value.
double evaluate_scalar(const ExprPtr& e, double tau,
                       const std::array<double, 3>& point = {0.0, 0.0, 0.0}, int dims = 3);

// Pointwise evaluation over parallel coordinate arrays (ys/zs may be null for
// lower-dimensional data).  Non-finite entries are reported by array index.
std::vector<double> evaluate_at_points(const ExprPtr& e, int dims, const double* xs,
                                       const double* ys, const double* zs, std::size_t count,
                                       double tau);

std::vector<double> evaluate_on_grid(const ExprPtr& e, const Grid& g, double tau);

// Constant-folded sum node, for assembling composite fields (laplacians etc.)
// from parsed or differentiated pieces.
ExprPtr expr_add(ExprPtr a, ExprPtr b);

// Two-branch rational approximation of erf (used by the evaluator so results
// do not depend on the platform libm).
double rational_erf(double x);

}  // namespace splitspec

#endif
