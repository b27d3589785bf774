// Command-line front end: run scenarios, solve spectra, list builtins, and
// cross-check the propagators against the dense reference operator.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitspec/eigensolver.hpp"
#include "splitspec/errors.hpp"
#include "splitspec/oracle.hpp"
#include "splitspec/runner.hpp"

namespace {

using namespace splitspec;

constexpr int kExitOk = 0;
constexpr int kExitScenario = 1;
constexpr int kExitConfig = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Scenario resolve_scenario(const std::string& source) {
    const std::string prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return builtin(source.substr(prefix.size()));
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file `" + source + "`");
    std::ostringstream text;
    text << in.rdbuf();
    return load_config(text.str());
}

int cmd_run(const std::string& source, std::string out_dir, int order_override,
            int snapshots_override) {
    Scenario s = resolve_scenario(source);
    if (order_override > 0) {
        if (s.evolve.enabled)
            s.evolve.order = order_override;
        else
            std::cerr << "note: scenario has no evolution phase; --order ignored\n";
    }
    if (snapshots_override >= 0) {
        if (s.evolve.enabled)
            s.output.snapshot_count = snapshots_override;
        else
            std::cerr << "note: scenario has no evolution phase; --snapshots ignored\n";
    }
    if (out_dir.empty()) out_dir = "runs/" + (s.name.empty() ? std::string("run") : s.name);

    RunReport report = run(s, out_dir);

    std::cout << "scenario: " << (s.name.empty() ? "(unnamed)" : s.name) << "\n";
    std::cout << "coupling schedule: " << s.alpha_text << "\n";
    for (std::size_t i = 0; i < report.energies.size(); ++i)
        std::cout << "E[" << i << "] = " << fmt(report.energies[i])
                  << "  residual = " << fmt(report.residuals[i])
                  << "  steps = " << report.relax_steps[i] << "\n";
    for (const auto& [key, value] : report.timings)
        std::cout << key << " = " << fmt(value) << "\n";
    if (report.evolved) {
        std::cout << "evolution: " << report.evolve_steps << " steps";
        if (report.evolve_retries > 0) std::cout << " (" << report.evolve_retries << " refinements)";
        std::cout << " to tau = " << fmt(report.final_tau) << "\n";
    }
    if (report.final_norm != 0.0) {
        std::cout << "final norm = " << fmt(report.final_norm)
                  << "  energy = " << fmt(report.final_energy) << "\n";
        std::cout << "final mean = (";
        for (int d = 0; d < s.dims; ++d)
            std::cout << (d ? ", " : "") << fmt(report.final_mean[static_cast<std::size_t>(d)]);
        std::cout << ")  spread = (";
        for (int d = 0; d < s.dims; ++d)
            std::cout << (d ? ", " : "") << fmt(report.final_spread[static_cast<std::size_t>(d)]);
        std::cout << ")\n";
        for (const auto& [name, p] : report.final_region_probability)
            std::cout << "P(" << name << ") = " << fmt(p) << "\n";
    }
    std::cout << "outputs: " << out_dir << "\n";
    std::cout << "wall seconds: " << fmt(report.wall_seconds) << "\n";
    return kExitOk;
}

int cmd_eigen(const std::string& source, int count) {
    Scenario s = resolve_scenario(source);
    s.eigen.count = count;

    ExprPtr u = parse_potential(s.potential_text);
    ExprPtr alpha = parse_potential(s.alpha_text);
    Grid g = scenario_grid(s, evaluate_scalar(alpha, 0.0));
    Hamiltonian h(u, alpha, g);

    EigenOptions opts;
    opts.energy_tolerance = s.eigen.tolerance;
    opts.max_steps = s.eigen.max_steps;
    opts.reorth_every = s.eigen.reorth_every;
    opts.order = s.eigen.order;
    opts.dtau_base = s.eigen.dtau_base;

    for (const EigenResult& r : spectrum(h, count, opts))
        std::cout << fmt(r.energy) << "  residual = " << fmt(r.residual)
                  << "  steps = " << r.steps_taken << "\n";
    return kExitOk;
}

int cmd_list() {
    for (const std::string& name : builtin_names()) std::cout << name << "\n";
    return kExitOk;
}

bool report_check(const std::string& label, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << label << "  (" << detail << ")\n";
    return ok;
}

// Cross-checks against the dense operator: builtin spectra, free plane waves
// and one high-order propagation.
int cmd_validate() {
    bool all_ok = true;

    for (const std::string& name :
         {std::string("harmonic"), std::string("mathieu"), std::string("cosine100"),
          std::string("squid_static")}) {
        Scenario s = builtin(name);
        ExprPtr u = parse_potential(s.potential_text);
        ExprPtr alpha = parse_potential(s.alpha_text);
        Grid g = scenario_grid(s, evaluate_scalar(alpha, 0.0));
        Hamiltonian h(u, alpha, g);

        EigenOptions opts;
        opts.order = s.eigen.order;
        std::vector<EigenResult> relaxed = spectrum(h, 4, opts);
        std::vector<double> dense = oracle_spectrum(dense_hamiltonian(h, 0.0), 4);

        double worst = 0.0;
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst, std::fabs(relaxed[static_cast<std::size_t>(i)].energy -
                                              dense[static_cast<std::size_t>(i)]));
        all_ok &= report_check("spectrum vs dense: " + name, worst < 5e-3,
                               "max |dE| = " + fmt(worst));
    }

    {
        Grid g = make_grid({AxisSpec::box(8, -4.0, 4.0)}, 1.0);
        Hamiltonian h(parse_potential("0"), parse_potential("1"), g);
        std::vector<double> dense = oracle_spectrum(dense_hamiltonian(h, 0.0), 8);
        std::vector<double> expected;
        for (int k = 0; k < 8; ++k) {
            double kappa = g.momentum(0, k);
            expected.push_back(kappa * kappa);
        }
        std::sort(expected.begin(), expected.end());
        double worst = 0.0;
        for (int i = 0; i < 8; ++i)
            worst = std::max(worst, std::fabs(dense[static_cast<std::size_t>(i)] -
                                              expected[static_cast<std::size_t>(i)]));
        all_ok &= report_check("free plane waves, n = 8", worst < 1e-9,
                               "max |dE| = " + fmt(worst));
    }

    {
        Grid g = make_grid({AxisSpec::alpha_scaled(64)}, 1.0);
        Hamiltonian h(parse_potential("x^2"), parse_potential("1"), g);

        Wavefunction psi0(g, Rep::position);
        for (int i = 0; i < g.n[0]; ++i) {
            double b = g.position(0, i) - 1.0;
            psi0.amp[static_cast<std::size_t>(i)] = std::exp(cplx{-b * b, 0.0});
        }
        psi0 = normalize(psi0).first;

        Wavefunction ref = expm_evolve(dense_hamiltonian(h, 0.0), psi0, 1.0, Mode::real_time);

        StepConfig cfg;
        cfg.order = 3;
        cfg.dtau_base = 1e-3;
        Wavefunction psi = psi0;
        const int steps = 1000;
        for (int k = 0; k < steps; ++k)
            psi = apply_step(psi, h, k * 1e-3, 1e-3, cfg);

        double err2 = 0.0;
        for (std::size_t i = 0; i < psi.amp.size(); ++i)
            err2 += std::norm(psi.amp[i] - ref.amp[i]);
        double err = std::sqrt(err2 * g.position_measure());
        all_ok &= report_check("order-3 step vs dense propagator", err < 1e-6,
                               "L2 error = " + fmt(err));
    }

    std::cout << (all_ok ? "validate: all checks passed" : "validate: FAILURES above") << "\n";
    return all_ok ? kExitOk : kExitScenario;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral split-operator Schrodinger simulator"};
    app.require_subcommand(1);

    std::string run_source, run_out;
    int run_order = 0, run_snapshots = -1;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute a scenario and write its outputs");
    run_cmd->add_option("scenario", run_source, "Config file path or builtin:NAME")->required();
    run_cmd->add_option("--out", run_out, "Output directory (default runs/<name>)");
    run_cmd->add_option("--order", run_order, "Override the evolution step order")
        ->check(CLI::Range(1, 3));
    run_cmd->add_option("--snapshots", run_snapshots, "Override the snapshot count")
        ->check(CLI::NonNegativeNumber);

    std::string eigen_source;
    int eigen_count = 0;
    CLI::App* eigen_cmd = app.add_subcommand("eigen", "Solve the lowest part of the spectrum");
    eigen_cmd->add_option("scenario", eigen_source, "Config file path or builtin:NAME")->required();
    eigen_cmd->add_option("--count", eigen_count, "Number of levels")
        ->required()
        ->check(CLI::PositiveNumber);

    CLI::App* list_cmd = app.add_subcommand("list", "List builtin scenarios");
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Run the dense-operator cross-check suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_source, run_out, run_order, run_snapshots);
        if (eigen_cmd->parsed()) return cmd_eigen(eigen_source, eigen_count);
        if (list_cmd->parsed()) return cmd_list();
        if (validate_cmd->parsed()) return cmd_validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ExprParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
    }
    return kExitConfig;
}
