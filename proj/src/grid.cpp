#include "splitspec/grid.hpp"

#include <cmath>
#include <numbers>

#include "splitspec/errors.hpp"

namespace splitspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

AxisSpec AxisSpec::alpha_scaled(int n, double origin) {
    AxisSpec a;
    a.n = n;
    a.kind = Kind::alpha_scaled;
    a.origin = origin;
    return a;
}

AxisSpec AxisSpec::box(int n, double lo, double hi) {
    AxisSpec a;
    a.n = n;
    a.kind = Kind::box;
    a.lo = lo;
    a.hi = hi;
    a.origin = 0.5 * (lo + hi);
    return a;
}

AxisSpec AxisSpec::periodic(int n, double period, double origin) {
    AxisSpec a;
    a.n = n;
    a.kind = Kind::periodic;
    a.period = period;
    a.origin = origin;
    return a;
}

bool Grid::operator==(const Grid& other) const {
    if (dims != other.dims) return false;
    for (int d = 0; d < dims; ++d) {
        if (n[d] != other.n[d] || dbeta[d] != other.dbeta[d] || origin[d] != other.origin[d] ||
            periodic[d] != other.periodic[d])
            return false;
    }
    return true;
}

double Grid::momentum_measure() const {
    double m = 1.0;
    for (int d = 0; d < dims; ++d) m *= dkappa[d] / kTwoPi;
    return m;
}

Grid make_grid(const std::vector<AxisSpec>& axes, double alpha) {
    if (axes.empty() || axes.size() > 3)
        throw SimError("make_grid: need 1 to 3 axes, got " + std::to_string(axes.size()));
    if (!(alpha > 0.0)) throw SimError("make_grid: alpha must be positive");

    Grid g;
    g.dims = static_cast<int>(axes.size());
    for (int d = 0; d < g.dims; ++d) {
        const AxisSpec& ax = axes[static_cast<std::size_t>(d)];
        if (!power_of_two(ax.n) || ax.n < 8)
            throw SimError("make_grid: axis " + std::to_string(d) + ": n must be a power of two >= 8, got " +
                           std::to_string(ax.n));
        g.n[d] = ax.n;
        g.origin[d] = ax.origin;
        switch (ax.kind) {
            case AxisSpec::Kind::alpha_scaled:
                g.dbeta[d] = std::pow(alpha, -0.25) * std::sqrt(kTwoPi / ax.n);
                break;
            case AxisSpec::Kind::box:
                if (!(ax.hi > ax.lo)) throw SimError("make_grid: box axis needs hi > lo");
                g.dbeta[d] = (ax.hi - ax.lo) / ax.n;
                break;
            case AxisSpec::Kind::periodic:
                if (!(ax.period > 0.0)) throw SimError("make_grid: periodic axis needs a positive period");
                g.dbeta[d] = ax.period / ax.n;
                g.periodic[d] = true;
                g.period[d] = ax.period;
                break;
        }
        g.dkappa[d] = kTwoPi / (g.dbeta[d] * ax.n);
    }
    return g;
}

ScaleEstimate characteristic_scales(double alpha, double p) {
    if (!(alpha > 0.0) || !(p > 0.0)) throw SimError("characteristic_scales: alpha and p must be positive");
    ScaleEstimate s{};
    const double ap = alpha * p;
    s.length = std::pow(ap, -1.0 / (2.0 * p + 2.0));
    s.time = std::pow(ap, -1.0 / (p + 1.0));
    s.momentum = 1.0 / s.length;
    s.energy = 1.0 / s.time;
    return s;
}

}  // namespace splitspec
