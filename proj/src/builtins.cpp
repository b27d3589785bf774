#include <cmath>

#include "splitspec/errors.hpp"
#include "splitspec/scenario.hpp"

namespace splitspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

Scenario harmonic_scenario() {
    Scenario s;
    s.name = "harmonic";
    s.potential_text = "x^2";
    s.alpha_text = "1";
    s.grid_kind = "alpha_scaled";
    s.dims = 1;
    s.n = {256, 1, 1};
    s.eigen.count = 4;
    return s;
}

Scenario mathieu_scenario() {
    Scenario s;
    s.name = "mathieu";
    s.potential_text = "2 + 2*cos(2*x)";
    s.alpha_text = "1";
    s.grid_kind = "periodic";
    s.dims = 1;
    s.n = {256, 1, 1};
    s.period = {2 * kPi, 0, 0};
    s.eigen.count = 11;
    return s;
}

Scenario cosine100_scenario() {
    Scenario s;
    s.name = "cosine100";
    s.potential_text = "2 + 2*cos(2*x)";
    s.alpha_text = "100";
    s.grid_kind = "periodic";
    s.dims = 1;
    s.n = {256, 1, 1};
    s.period = {2 * kPi, 0, 0};
    s.eigen.count = 10;
    return s;
}

Scenario twod_scenario() {
    Scenario s;
    s.name = "twod";
    s.potential_text = "3 + cos(2*y) - 2*cos(x)*cos(y)";
    s.alpha_text = "1";
    s.grid_kind = "periodic";
    s.dims = 2;
    s.n = {128, 128, 1};
    s.period = {2 * kPi, 2 * kPi, 0};
    s.eigen.count = 3;
    s.init.kind = InitSpec::Kind::superposition;
    s.init.indices = {0, 1};
    s.evolve.enabled = true;
    s.evolve.t_start = 0.0;
    s.evolve.t_end = 16.0;
    s.evolve.order = 1;
    s.output.snapshot_count = 9;
    return s;
}

Scenario gauss_base(const std::string& name, const std::string& potential, double t_end) {
    Scenario s;
    s.name = name;
    s.potential_text = potential;
    s.alpha_text = "1";
    s.grid_kind = "box";
    s.dims = 1;
    s.n = {1024, 1, 1};
    s.lo = {-16, 0, 0};
    s.hi = {16, 0, 0};
    s.init.kind = InitSpec::Kind::gaussian;
    s.init.beta0 = {0, 0, 0};
    s.init.sigma0 = std::sqrt(0.5);
    s.init.k0 = {4, 0, 0};
    s.evolve.enabled = true;
    s.evolve.t_start = 0.0;
    s.evolve.t_end = t_end;
    s.evolve.order = 1;
    s.output.snapshot_count = 5;
    return s;
}

Scenario squid_base() {
    Scenario s;
    s.potential_text = squid_potential_text(SquidParams{});
    s.grid_kind = "box";
    s.dims = 1;
    s.n = {512, 1, 1};
    s.lo = {kPi - 8, 0, 0};
    s.hi = {kPi + 8, 0, 0};
    s.regions.push_back({"neg", {{kPi - 8, kPi}}});
    s.regions.push_back({"pos", {{kPi, kPi + 8}}});
    return s;
}

Scenario squid_static_scenario() {
    Scenario s = squid_base();
    s.name = "squid_static";
    s.alpha_text = "10";
    s.eigen.count = 4;
    return s;
}

Scenario squid_not_scenario() {
    Scenario s = squid_base();
    s.name = "squid_not";
    s.alpha_text = not_gate_schedule_text();
    s.eigen.count = 2;
    s.init.kind = InitSpec::Kind::superposition;
    s.init.indices = {0, 1};
    s.init.localize = "pos";
    s.evolve.enabled = true;
    s.evolve.t_start = 0.0;
    s.evolve.t_end = 24.0;
    s.evolve.order = 1;
    s.evolve.dtau_base = 0.01;
    s.output.snapshot_count = 9;
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"harmonic", "mathieu",    "cosine100",    "twod",     "gauss_free",
            "gauss_wall", "gauss_box", "squid_static", "squid_not"};
}

Scenario builtin(const std::string& name) {
    if (name == "harmonic") return harmonic_scenario();
    if (name == "mathieu") return mathieu_scenario();
    if (name == "cosine100") return cosine100_scenario();
    if (name == "twod") return twod_scenario();
    if (name == "gauss_free") return gauss_base("gauss_free", "0", 1.0);
    if (name == "gauss_wall") return gauss_base("gauss_wall", "wall(-16, 8)", 10.0);
    if (name == "gauss_box") return gauss_base("gauss_box", "wall(-8, 8)", 40.0);
    if (name == "squid_static") return squid_static_scenario();
    if (name == "squid_not") return squid_not_scenario();
    std::string names;
    for (const std::string& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown builtin `" + name + "`; available: " + names);
}

}  // namespace splitspec
