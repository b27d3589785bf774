#include "splitspec/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "splitspec/eigensolver.hpp"
#include "splitspec/errors.hpp"
#include "splitspec/observables.hpp"
#include "splitspec/propagator.hpp"

namespace splitspec {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ScenarioError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ScenarioError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Region to_region(const RegionSpec& spec) {
    Region r;
    r.bounds = spec.bounds;
    return r;
}

Wavefunction gaussian_state(const Grid& g, const InitSpec& init) {
    Wavefunction psi(g, Rep::position);
    const double inv4s2 = 1.0 / (4.0 * init.sigma0 * init.sigma0);
    for (std::size_t lin = 0; lin < psi.amp.size(); ++lin) {
        auto idx = g.unravel(lin);
        double quad = 0.0, phase = 0.0;
        for (int d = 0; d < g.dims; ++d) {
            auto du = static_cast<std::size_t>(d);
            double b = g.position(d, idx[du]);
            double centered = b - init.beta0[du];
            quad += centered * centered;
            phase += init.k0[du] * b;
        }
        psi.amp[lin] = std::exp(cplx{-quad * inv4s2, phase});
    }
    return normalize(psi).first;
}

Wavefunction superposition_state(const std::vector<EigenResult>& levels, const InitSpec& init,
                                 const std::vector<RegionSpec>& regions) {
    const Region* localize = nullptr;
    Region localize_region;
    if (!init.localize.empty()) {
        for (const RegionSpec& r : regions)
            if (r.name == init.localize) {
                localize_region = to_region(r);
                localize = &localize_region;
            }
        if (!localize) throw ScenarioError("init.localize names unknown region `" + init.localize + "`");
    }

    Wavefunction acc = levels[static_cast<std::size_t>(init.indices[0])].state;
    double w0 = init.weights.empty() ? 1.0 : init.weights[0];
    for (cplx& a : acc.amp) a *= w0;

    // Eigenstate signs are arbitrary; pick each one greedily so the partial
    // sum concentrates in the localize region (when one is named).
    for (std::size_t i = 1; i < init.indices.size(); ++i) {
        const Wavefunction& s = levels[static_cast<std::size_t>(init.indices[i])].state;
        double w = init.weights.empty() ? 1.0 : init.weights[i];
        Wavefunction plus = acc, minus = acc;
        for (std::size_t k = 0; k < s.amp.size(); ++k) {
            plus.amp[k] += w * s.amp[k];
            minus.amp[k] -= w * s.amp[k];
        }
        bool take_minus = false;
        if (localize) {
            double p_plus = probability_in_region(normalize(plus).first, *localize);
            double p_minus = probability_in_region(normalize(minus).first, *localize);
            take_minus = p_minus > p_plus;
        }
        acc = take_minus ? std::move(minus) : std::move(plus);
    }
    return normalize(acc).first;
}

struct SeriesRow {
    double tau = 0.0, norm = 0.0, energy = 0.0;
    std::array<double, 3> mean{0, 0, 0};
    std::array<double, 3> spread{0, 0, 0};
    std::vector<double> probs;
};

SeriesRow observe(const Wavefunction& psi, const Hamiltonian& h, double tau,
                  const std::vector<Region>& regions) {
    SeriesRow row;
    row.tau = tau;
    row.norm = psi.norm();
    Wavefunction unit = normalize(psi).first;
    Moments m = moments(unit);
    row.mean = m.mean;
    row.spread = m.spread;
    row.energy = energy_expectation(unit, h, tau);
    for (const Region& r : regions) row.probs.push_back(probability_in_region(psi, r));
    return row;
}

std::string grid_json(const Grid& g) {
    auto ints = [&g](auto&& get) {
        std::string s = "[";
        for (int d = 0; d < g.dims; ++d) s += (d ? "," : "") + get(d);
        return s + "]";
    };
    std::string out = "{\"dims\":" + std::to_string(g.dims);
    out += ",\"n\":" + ints([&g](int d) { return std::to_string(g.n[static_cast<std::size_t>(d)]); });
    out += ",\"dbeta\":" + ints([&g](int d) { return fmt(g.dbeta[static_cast<std::size_t>(d)]); });
    out += ",\"origin\":" + ints([&g](int d) { return fmt(g.origin[static_cast<std::size_t>(d)]); });
    out += ",\"periodic\":" +
           ints([&g](int d) { return std::string(g.periodic[static_cast<std::size_t>(d)] ? "true" : "false"); });
    return out + "}";
}

std::string snapshot_json(const Snapshot& snap, const Grid& g, bool amplitudes) {
    std::string out = "{\"tau\":" + fmt(snap.tau) + ",\"grid\":" + grid_json(g);
    out += ",\"norm\":" + fmt(snap.norm) + ",\"energy\":" + fmt(snap.energy);
    out += ",\"density\":[";
    for (std::size_t i = 0; i < snap.density.size(); ++i) out += (i ? "," : "") + fmt(snap.density[i]);
    out += "]";
    if (amplitudes && !snap.amplitudes.empty()) {
        out += ",\"re\":[";
        for (std::size_t i = 0; i < snap.amplitudes.size(); ++i)
            out += (i ? "," : "") + fmt(snap.amplitudes[i].real());
        out += "],\"im\":[";
        for (std::size_t i = 0; i < snap.amplitudes.size(); ++i)
            out += (i ? "," : "") + fmt(snap.amplitudes[i].imag());
        out += "]";
    }
    return out + "}";
}

}  // namespace

RunReport run(const Scenario& s, const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.name = s.name;

    ExprPtr u, alpha;
    try {
        u = parse_potential(s.potential_text);
        alpha = parse_potential(s.alpha_text);
    } catch (const ExprParseError& err) {
        throw ConfigError(std::string("expression: ") + err.what());
    }

    const double grid_time = s.evolve.enabled ? s.evolve.t_start : 0.0;
    Grid g = [&] {
        try {
            return scenario_grid(s, evaluate_scalar(alpha, grid_time));
        } catch (const SimError& err) {
            throw ScenarioError("grid: " + std::string(err.what()));
        }
    }();
    Hamiltonian h(u, alpha, g);

    std::vector<Region> regions;
    for (const RegionSpec& r : s.regions) regions.push_back(to_region(r));

    std::vector<EigenResult> levels;
    if (s.eigen.count > 0) {
        EigenOptions opts;
        opts.energy_tolerance = s.eigen.tolerance;
        opts.max_steps = s.eigen.max_steps;
        opts.reorth_every = s.eigen.reorth_every;
        opts.order = s.eigen.order;
        opts.dtau_base = s.eigen.dtau_base;
        try {
            levels = spectrum(h, s.eigen.count, opts);
        } catch (const SimError& err) {
            throw ScenarioError("eigensolve: " + std::string(err.what()));
        }
        for (const EigenResult& r : levels) {
            report.energies.push_back(r.energy);
            report.residuals.push_back(r.residual);
            report.relax_steps.push_back(r.steps_taken);
        }
        if (levels.size() >= 2 && levels[1].energy != levels[0].energy) {
            double split = levels[1].energy - levels[0].energy;
            report.timings["beat_period"] = 2.0 * 3.14159265358979323846 / split;
            report.timings["half_beat_period"] = 3.14159265358979323846 / split;
        }
        if (levels.size() >= 4) {
            double pair_split = 0.5 * (levels[2].energy + levels[3].energy) -
                                0.5 * (levels[0].energy + levels[1].energy);
            if (pair_split != 0.0)
                report.timings["pair_transition_time"] =
                    2.0 * 3.14159265358979323846 / pair_split;
        }
    }

    Wavefunction psi;
    switch (s.init.kind) {
        case InitSpec::Kind::none: break;
        case InitSpec::Kind::eigenstate:
            psi = levels[static_cast<std::size_t>(s.init.index)].state;
            break;
        case InitSpec::Kind::gaussian: psi = gaussian_state(g, s.init); break;
        case InitSpec::Kind::superposition:
            psi = superposition_state(levels, s.init, s.regions);
            break;
    }

    std::vector<SeriesRow> series;
    std::vector<Snapshot> snapshots;
    if (s.evolve.enabled) {
        EvolvePlan plan;
        plan.t_start = s.evolve.t_start;
        plan.t_end = s.evolve.t_end;
        plan.config.order = s.evolve.order;
        plan.config.mode = Mode::real_time;
        plan.config.dtau_base = s.evolve.dtau_base;
        plan.config.dynamic = s.evolve.dynamic;
        plan.snapshot_amplitudes = s.output.snapshot_amplitudes;
        if (s.output.snapshot_count == 1) {
            plan.snapshot_times.push_back(s.evolve.t_end);
        } else if (s.output.snapshot_count > 1) {
            double span = s.evolve.t_end - s.evolve.t_start;
            for (int k = 0; k < s.output.snapshot_count; ++k)
                plan.snapshot_times.push_back(s.evolve.t_start +
                                              span * k / (s.output.snapshot_count - 1));
        }
        long row_index = 0;
        plan.observer = [&](double tau, const Wavefunction& state) {
            if (row_index++ % s.output.series_stride == 0)
                series.push_back(observe(state, h, tau, regions));
        };
        EvolveResult ev = [&] {
            try {
                return evolve(psi, h, plan);
            } catch (const SimError& err) {
                throw ScenarioError("evolve: " + std::string(err.what()));
            }
        }();
        psi = std::move(ev.final);
        snapshots = std::move(ev.snapshots);
        report.evolved = true;
        report.evolve_steps = ev.steps;
        report.evolve_retries = ev.retries;
        report.final_tau = s.evolve.t_end;
    }

    if (s.init.kind != InitSpec::Kind::none) {
        SeriesRow last = observe(psi, h, report.final_tau, regions);
        report.final_norm = last.norm;
        report.final_energy = last.energy;
        report.final_mean = last.mean;
        report.final_spread = last.spread;
        for (std::size_t i = 0; i < regions.size(); ++i)
            report.final_region_probability[s.regions[i].name] = last.probs[i];
    }

    // Serialization: four files, written atomically, no volatile content.
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ScenarioError("cannot create output directory " + dir.string());

    {
        std::string csv = "index,energy,residual,steps\n";
        for (std::size_t i = 0; i < report.energies.size(); ++i)
            csv += std::to_string(i) + "," + fmt(report.energies[i]) + "," +
                   fmt(report.residuals[i]) + "," + std::to_string(report.relax_steps[i]) + "\n";
        write_atomic(dir / "energies.csv", csv);
    }
    {
        std::string csv = "tau,norm,energy";
        for (int d = 0; d < s.dims; ++d) csv += std::string(",mean_") + "xyz"[d];
        for (int d = 0; d < s.dims; ++d) csv += std::string(",spread_") + "xyz"[d];
        for (const RegionSpec& r : s.regions) csv += ",p_" + r.name;
        csv += "\n";
        for (const SeriesRow& row : series) {
            csv += fmt(row.tau) + "," + fmt(row.norm) + "," + fmt(row.energy);
            for (int d = 0; d < s.dims; ++d) csv += "," + fmt(row.mean[static_cast<std::size_t>(d)]);
            for (int d = 0; d < s.dims; ++d) csv += "," + fmt(row.spread[static_cast<std::size_t>(d)]);
            for (double p : row.probs) csv += "," + fmt(p);
            csv += "\n";
        }
        write_atomic(dir / "series.csv", csv);
    }
    {
        std::string jsonl;
        for (const Snapshot& snap : snapshots)
            jsonl += snapshot_json(snap, g, s.output.snapshot_amplitudes) + "\n";
        write_atomic(dir / "snapshots.jsonl", jsonl);
    }
    write_atomic(dir / "scenario.cfg", serialize(s));

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace splitspec
