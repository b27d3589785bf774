#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "splitspec/errors.hpp"
#include "splitspec/wavefunction.hpp"

namespace splitspec {

namespace {

// One cached FFTW plan with its own aligned buffers.  Data is copied in and
// out on every call; with FFTW_ESTIMATE the planning is deterministic, which
// keeps whole-run output byte-identical across reruns.
struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t size = 0;

    PlanEntry(const Grid& g, int sign) {
        size = g.total();
        in = fftw_alloc_complex(size);
        out = fftw_alloc_complex(size);
        int dims[3] = {g.n[0], g.n[1], g.n[2]};
        plan = fftw_plan_dft(g.dims, dims, in, out, sign, FFTW_ESTIMATE);
        if (!plan) throw SimError("transform: FFTW plan creation failed");
    }
    ~PlanEntry() {
        if (plan) fftw_destroy_plan(plan);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
};

using PlanKey = std::tuple<int, int, int, int, int>;  // dims, n0, n1, n2, sign

std::mutex plan_mutex;
std::map<PlanKey, PlanEntry>& plan_cache() {
    static std::map<PlanKey, PlanEntry> cache;
    return cache;
}

PlanEntry& plan_for(const Grid& g, int sign) {
    PlanKey key{g.dims, g.n[0], g.dims > 1 ? g.n[1] : 1, g.dims > 2 ? g.n[2] : 1, sign};
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.try_emplace(key, g, sign).first;
    return it->second;
}

// Phase factors e^(sign * i * kappa_d(k) * x0_d) for every momentum bin of one
// dimension, where x0 is the first cell center.
std::vector<cplx> momentum_phase(const Grid& g, int d, double sign) {
    std::vector<cplx> ph(static_cast<std::size_t>(g.n[d]));
    const double x0 = g.first_center(d);
    for (int k = 0; k < g.n[d]; ++k) {
        const double arg = sign * g.momentum(d, k) * x0;
        ph[static_cast<std::size_t>(k)] = cplx{std::cos(arg), std::sin(arg)};
    }
    return ph;
}

void apply_momentum_phases(const Grid& g, std::vector<cplx>& data, double sign) {
    std::array<std::vector<cplx>, 3> ph;
    for (int d = 0; d < g.dims; ++d) ph[static_cast<std::size_t>(d)] = momentum_phase(g, d, sign);
    const std::size_t total = g.total();
    for (std::size_t lin = 0; lin < total; ++lin) {
        auto idx = g.unravel(lin);
        cplx f{1.0, 0.0};
        for (int d = 0; d < g.dims; ++d) f *= ph[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[d])];
        data[lin] *= f;
    }
}

}  // namespace

Wavefunction transform(const Wavefunction& psi, Direction direction) {
    const bool forward = direction == Direction::to_momentum;
    if (forward && psi.rep != Rep::position)
        throw SimError("transform: to_momentum expects a position-representation state");
    if (!forward && psi.rep != Rep::momentum)
        throw SimError("transform: to_position expects a momentum-representation state");

    const Grid& g = psi.grid;
    Wavefunction out(g, forward ? Rep::momentum : Rep::position);
    std::vector<cplx> work = psi.amp;

    if (!forward) apply_momentum_phases(g, work, +1.0);

    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        PlanEntry& pe = plan_for(g, forward ? FFTW_FORWARD : FFTW_BACKWARD);
        for (std::size_t i = 0; i < pe.size; ++i) {
            pe.in[i][0] = work[i].real();
            pe.in[i][1] = work[i].imag();
        }
        fftw_execute(pe.plan);
        for (std::size_t i = 0; i < pe.size; ++i) out.amp[i] = cplx{pe.out[i][0], pe.out[i][1]};
    }

    if (forward) apply_momentum_phases(g, out.amp, -1.0);

    double scale = forward ? g.position_measure() : g.momentum_measure();
    for (cplx& a : out.amp) a *= scale;
    return out;
}

}  // namespace splitspec
