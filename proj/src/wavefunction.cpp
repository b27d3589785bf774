#include "splitspec/wavefunction.hpp"

#include <cmath>

#include "splitspec/errors.hpp"

namespace splitspec {

double Wavefunction::norm_squared() const {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return s * measure();
}

double Wavefunction::norm() const { return std::sqrt(norm_squared()); }

cplx inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (!(a.grid == b.grid)) throw SimError("inner_product: grids differ");
    if (a.rep != b.rep) throw SimError("inner_product: representations differ");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * a.measure();
}

std::pair<Wavefunction, double> normalize(const Wavefunction& psi) {
    const double n = psi.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw SimError("normalize: state has zero or non-finite norm");
    Wavefunction out = psi;
    const double inv = 1.0 / n;
    for (cplx& a : out.amp) a *= inv;
    return {std::move(out), n};
}

}  // namespace splitspec
