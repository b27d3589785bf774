#ifndef SPLITSPEC_SCENARIO_HPP
#define SPLITSPEC_SCENARIO_HPP

#include <array>
#include <string>
#include <vector>

#include "splitspec/grid.hpp"

namespace splitspec {

// How the starting state is built.  `eigenstate` and `superposition` draw on
// the solved spectrum (so eigen.count must cover every referenced index);
// `gaussian` is exp(-(beta-beta0)^2/(4 sigma0^2) + i k0.beta), normalized.
struct InitSpec {
    enum class Kind { none, eigenstate, gaussian, superposition };

    Kind kind = Kind::none;
    int index = 0;                 // eigenstate
    std::vector<int> indices;      // superposition members
    std::vector<double> weights;   // optional; defaults to equal weights
    std::string localize;          // region name used to fix relative signs
    std::array<double, 3> beta0{0, 0, 0};
    double sigma0 = 1.0;
    std::array<double, 3> k0{0, 0, 0};

    bool operator==(const InitSpec&) const = default;
};

struct EvolveSpec {
    bool enabled = false;
    double t_start = 0.0, t_end = 0.0;
    int order = 2;
    double dtau_base = 0.01;
    bool dynamic = false;

    bool operator==(const EvolveSpec&) const = default;
};

struct EigenSpec {
    int count = 0;  // 0 = no eigensolve
    double tolerance = 1e-8;
    long max_steps = 200000;
    int reorth_every = 1;
    int order = 2;
    double dtau_base = 0.01;

    bool operator==(const EigenSpec&) const = default;
};

struct OutputSpec {
    int series_stride = 1;      // observable rows kept every k accepted steps
    int snapshot_count = 0;     // evenly spaced over [t_start, t_end]
    bool snapshot_amplitudes = false;

    bool operator==(const OutputSpec&) const = default;
};

struct RegionSpec {
    std::string name;
    std::vector<std::array<double, 2>> bounds;  // {lo, hi} per dimension

    bool operator==(const RegionSpec&) const = default;
};

// Everything a run needs, as parsed from a config file (or built in).
// Expressions stay in text form; they are parsed when the run starts.
struct Scenario {
    std::string name;
    std::string potential_text;
    std::string alpha_text = "1";

    int dims = 1;
    std::string grid_kind = "alpha_scaled";  // alpha_scaled | box | periodic
    std::array<int, 3> n{256, 1, 1};
    std::array<double, 3> origin{0, 0, 0};
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
    std::array<double, 3> period{0, 0, 0};

    InitSpec init;
    EvolveSpec evolve;
    EigenSpec eigen;
    std::vector<RegionSpec> regions;
    OutputSpec output;

    bool operator==(const Scenario&) const = default;
};

// Config format: `key = value` lines grouped under [section] headers
// (sections grid, init, evolve, eigen, region, output; name/potential/alpha
// sit above the first header).  `section.key = value` outside a header is
// accepted as an equivalent spelling.  `#` starts a comment (whole-line or
// trailing).
// Numeric values may be constant expressions ("2*pi"); lists are
// comma-separated.  Unknown sections or keys are errors, reported with their
// 1-based line number.
Scenario load_config(const std::string& text);

// Canonical text form; load_config(serialize(s)) == s field for field.
std::string serialize(const Scenario& s);

// AxisSpec list for the scenario's grid at the given coupling value.
Grid scenario_grid(const Scenario& s, double alpha);

// Built-in experiment catalog (harmonic, mathieu, cosine100, twod,
// gauss_free, gauss_wall, gauss_box, squid_static, squid_not).
Scenario builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Double-well loop potential (x - phi_0)^2 / (2 beta_l) + 1 - cos(x); the
// 1 - cos(x) junction term is measured from its own minimum, so the well
// depths stay nonnegative.
struct SquidParams {
    double beta_l = 3.14159265358979323846;
    double phi_0 = 3.14159265358979323846;
    double alpha = 10.0;
};

std::string squid_potential_text(const SquidParams& p);

// Compressed-coupling pulse for the NOT gate: 10 at both ends, plateau 0.4.
double alpha_schedule_not_gate(double tau);
std::string not_gate_schedule_text();

}  // namespace splitspec

#endif
