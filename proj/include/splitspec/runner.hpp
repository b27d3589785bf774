#ifndef SPLITSPEC_RUNNER_HPP
#define SPLITSPEC_RUNNER_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "splitspec/scenario.hpp"

namespace splitspec {

// Summary returned by run(); everything here is also on disk except
// wall_seconds, which would break byte-identical reruns if serialized.
struct RunReport {
    std::string name;
    std::vector<double> energies;
    std::vector<double> residuals;
    std::vector<long> relax_steps;
    // Derived from the solved spectrum when enough levels exist:
    // beat_period, half_beat_period (first splitting) and
    // pair_transition_time (second pair mean minus first pair mean).
    std::map<std::string, double> timings;

    bool evolved = false;
    double final_tau = 0.0;
    double final_norm = 0.0;
    double final_energy = 0.0;
    std::array<double, 3> final_mean{0, 0, 0};
    std::array<double, 3> final_spread{0, 0, 0};
    std::map<std::string, double> final_region_probability;
    std::size_t evolve_steps = 0;
    std::size_t evolve_retries = 0;

    double wall_seconds = 0.0;
};

// Executes the scenario and writes energies.csv, series.csv, snapshots.jsonl
// and scenario.cfg into out_dir (created if missing; files written atomically
// via rename; reruns produce byte-identical bytes).
RunReport run(const Scenario& scenario, const std::string& out_dir);

}  // namespace splitspec

#endif
