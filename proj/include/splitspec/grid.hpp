#ifndef SPLITSPEC_GRID_HPP
#define SPLITSPEC_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace splitspec {

// How a single axis of the lattice is laid out.
struct AxisSpec {
    enum class Kind { alpha_scaled, box, periodic };

    int n = 0;
    Kind kind = Kind::alpha_scaled;
    double origin = 0.0;   // lattice is cell-centered and symmetric about this point
    double lo = 0.0;       // box bounds (kind == box)
    double hi = 0.0;
    double period = 0.0;   // kind == periodic

    static AxisSpec alpha_scaled(int n, double origin = 0.0);
    static AxisSpec box(int n, double lo, double hi);
    static AxisSpec periodic(int n, double period, double origin = 0.0);
};

// Discretized phase space: cell-centered position lattice plus the matching
// signed (wrapped) momentum lattice.  Spacings always satisfy
// dbeta * dkappa * n == 2*pi per dimension, so the discrete transform pair is
// exactly invertible.
struct Grid {
    int dims = 1;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> dbeta{1, 1, 1};
    std::array<double, 3> dkappa{1, 1, 1};
    std::array<double, 3> origin{0, 0, 0};
    std::array<bool, 3> periodic{false, false, false};
    std::array<double, 3> period{0, 0, 0};

    std::size_t total() const {
        std::size_t t = 1;
        for (int d = 0; d < dims; ++d) t *= static_cast<std::size_t>(n[d]);
        return t;
    }

    // Cell center of index i along dimension d.
    double position(int d, int i) const {
        return origin[d] + (i - n[d] / 2 + 0.5) * dbeta[d];
    }

    // Signed momentum of FFT bin k along dimension d: k for k < n/2, else k - n.
    double momentum(int d, int k) const {
        int s = (k < n[d] / 2) ? k : k - n[d];
        return dkappa[d] * s;
    }

    double first_center(int d) const { return position(d, 0); }

    double lower_edge(int d) const { return origin[d] - 0.5 * n[d] * dbeta[d]; }
    double upper_edge(int d) const { return origin[d] + 0.5 * n[d] * dbeta[d]; }

    // Quadrature weights of one cell in each representation.
    double position_measure() const {
        double m = 1.0;
        for (int d = 0; d < dims; ++d) m *= dbeta[d];
        return m;
    }
    double momentum_measure() const;

    // Row-major strides; dims beyond `dims` collapse to size one.
    std::size_t index_of(const std::array<int, 3>& idx) const {
        std::size_t lin = 0;
        for (int d = 0; d < dims; ++d) lin = lin * static_cast<std::size_t>(n[d]) + static_cast<std::size_t>(idx[d]);
        return lin;
    }
    std::array<int, 3> unravel(std::size_t lin) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int d = dims - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(lin % static_cast<std::size_t>(n[d]));
            lin /= static_cast<std::size_t>(n[d]);
        }
        return idx;
    }

    bool operator==(const Grid& other) const;
};

Grid make_grid(const std::vector<AxisSpec>& axes, double alpha);

// Characteristic scales of a power-law well U ~ beta^(2p) at coupling alpha
// (virial balance; unit proportionality constants).
struct ScaleEstimate {
    double length;
    double time;
    double momentum;
    double energy;
};

ScaleEstimate characteristic_scales(double alpha, double p);

}  // namespace splitspec

#endif
