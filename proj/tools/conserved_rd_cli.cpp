// Command-line front end: equilibrium reports, simulation with CSV traces,
// bracket iteration tables, the verify battery, and randomized sweeps.
//
// Exit codes: 0 success, 1 usage/config error, 2 simulation not converged,
// 3 invariant failure (verify or sweep).

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conserved_rd/config.hpp"
#include "conserved_rd/diagnostics.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/monotone.hpp"
#include "conserved_rd/pde.hpp"
#include "conserved_rd/sweep.hpp"
#include "conserved_rd/verify.hpp"

namespace {

using namespace conserved_rd;
namespace fs = std::filesystem;

std::string vec6_str(const Vec6& w, int prec = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << "(";
    for (int i = 0; i < kNumFields; ++i) os << (i ? ", " : "") << w[i];
    os << ")";
    return os.str();
}

fs::path prepare_output_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

int cmd_equilibrium(const std::string& config_path, const std::string& output_dir) {
    const RunConfig cfg = load_config(config_path);
    const State s0 = evaluate_initial(cfg.initial, cfg.grid);
    const ConservedQuantities cq = compute_conserved(s0, cfg.grid);
    const ConditionReport rep = condition_values(cfg.params, cq);
    const EquilibriumPoint eq = solve_equilibrium(cfg.params, cq);
    const double res = residual_norm(eq.w_star, cfg.params, cq);

    std::cout << std::setprecision(10);
    std::cout << "conserved quantities: M0 = " << cq.M0 << ", N0 = " << cq.N0
              << ", W1 = " << cq.W1 << ", W2 = " << cq.W2 << "\n";
    std::cout << "derived constants:    D1 = " << rep.D1 << ", D2 = " << rep.D2
              << ", D3 = " << rep.D3 << "\n";
    std::cout << "conditions:\n";
    for (int i = 0; i < 4; ++i) {
        const Condition& c = rep.I[i];
        std::cout << "  I" << i + 1 << ": " << c.lhs << (c.holds() ? " < " : " >= ") << c.rhs
                  << "  ->  I" << i + 1 << (c.holds() ? "" : "^c") << " holds\n";
    }
    std::cout << "regime: " << to_string(eq.regime) << "\n";
    std::cout << "equilibrium: " << vec6_str(eq.w_star, 4) << "\n";
    std::cout << "residual norm: " << std::scientific << res << "\n";

    nlohmann::json j;
    j["conserved"] = {{"M0", cq.M0}, {"N0", cq.N0}, {"W1", cq.W1}, {"W2", cq.W2}};
    j["constants"] = {{"D1", rep.D1}, {"D2", rep.D2}, {"D3", rep.D3}};
    for (int i = 0; i < 4; ++i) {
        j["conditions"]["I" + std::to_string(i + 1)] = {
            {"lhs", rep.I[i].lhs}, {"rhs", rep.I[i].rhs}, {"holds", rep.I[i].holds()}};
    }
    j["regime"] = to_string(eq.regime);
    j["equilibrium"] = eq.w_star;
    j["residual_norm"] = res;
    const fs::path out = prepare_output_dir(output_dir) / "equilibrium.json";
    std::ofstream(out) << j.dump(2) << "\n";
    std::cout << "summary written to " << out.string() << "\n";
    return 0;
}

void write_trace_csv(const fs::path& path, const Trace& trace) {
    std::ofstream os(path);
    os << std::setprecision(17);
    os << "t,sup_dist_to_equilibrium,mass_u,mass_v,combo1_drift,combo2_drift,"
          "min_field_value,branch_pattern,max_u,max_v,combo1_dev_sup,combo2_dev_sup\n";
    if (trace.empty()) return;
    const TraceRow& r0 = trace.front();
    for (const TraceRow& r : trace) {
        os << r.t << ',' << r.sup_dist_to_eq << ',' << r.mass_u << ',' << r.mass_v << ','
           << r.combo1 - r0.combo1 << ',' << r.combo2 - r0.combo2 << ',' << r.min_field_value
           << ',' << to_char(r.branch1) << to_char(r.branch2) << ',' << r.max_u << ',' << r.max_v
           << ',' << r.combo1_dev_sup << ',' << r.combo2_dev_sup << '\n';
    }
}

void write_snapshot_csv(const fs::path& path, const State& s, const Grid1D& grid) {
    std::ofstream os(path);
    os << std::setprecision(17);
    os << "x,u1,u2,v1,v2,v3,v4\n";
    for (int i = 0; i < grid.n_cells(); ++i) {
        os << grid.node(i);
        for (int fi = 0; fi < kNumFields; ++fi) os << ',' << s.f[fi][i];
        os << '\n';
    }
}

int cmd_simulate(const std::string& config_path, const std::string& output_dir) {
    const RunConfig cfg = load_config(config_path);
    const SimResult sim = run_to_steady(cfg);
    const fs::path dir = prepare_output_dir(output_dir);

    write_trace_csv(dir / "trace.csv", sim.trace);
    for (const State& snap : sim.snapshots) {
        std::ostringstream name;
        name << "snapshot_" << std::fixed << std::setprecision(4) << snap.time << ".csv";
        write_snapshot_csv(dir / name.str(), snap, cfg.grid);
    }
    write_snapshot_csv(dir / "snapshot_final.csv", sim.final, cfg.grid);

    const ConservationDrift drift_all = conservation_drift(sim.trace);
    const BranchLock lock = detect_branch_lock(sim.trace);
    {
        std::ofstream os(dir / "summary.txt");
        os << std::setprecision(17);
        os << "regime " << to_string(sim.equilibrium.regime) << "\n";
        os << "steady " << (sim.steady ? 1 : 0) << "\n";
        os << "steady_time " << sim.steady_time << "\n";
        os << "sup_dist_to_equilibrium " << sup_dist(sim.final, sim.equilibrium.w_star) << "\n";
        os << "drift_mass_u " << drift_all.mass_u << "\n";
        os << "drift_mass_v " << drift_all.mass_v << "\n";
        os << "drift_combo1 " << drift_all.combo1 << "\n";
        os << "drift_combo2 " << drift_all.combo2 << "\n";
        os << "branch_locked " << (lock.locked ? 1 : 0) << "\n";
        os << "lock_time " << lock.lock_time << "\n";
        os << "branch_pattern " << to_char(lock.pattern1) << to_char(lock.pattern2) << "\n";
    }

    std::cout << std::setprecision(10);
    std::cout << "regime: " << to_string(sim.equilibrium.regime) << "\n";
    std::cout << (sim.steady ? "steady at t = " : "NOT steady by t_max = ") << sim.steady_time
              << "\n";
    std::cout << "sup distance to equilibrium: " << std::scientific
              << sup_dist(sim.final, sim.equilibrium.w_star) << "\n";
    const ConservationDrift drift = conservation_drift(sim.trace);
    if (cfg.boundary == Boundary::Neumann) {
        std::cout << "max conservation drift: " << drift.max() << "\n";
    }
    std::cout << "trace written to " << (dir / "trace.csv").string() << "\n";
    return sim.steady ? 0 : 2;
}

int cmd_iterate(const std::string& config_path, double tol, int max_iter,
                const std::string& csv_path) {
    const RunConfig cfg = load_config(config_path);
    State s0 = evaluate_initial(cfg.initial, cfg.grid);
    const ConservedQuantities cq = compute_conserved(s0, cfg.grid);
    EquilibriumPoint eq = solve_equilibrium(cfg.params, cq);
    const IterationResult it = iterate_to_fixed_point(cfg.params, cq, eq, s0, tol, max_iter);

    std::cout << "m | lower | upper | gap\n";
    std::cout << std::setprecision(10);
    for (const BracketPair& bp : it.history) {
        std::cout << bp.iteration << " | " << vec6_str(bp.lower) << " | " << vec6_str(bp.upper)
                  << " | " << std::scientific << bp.gap() << std::fixed << "\n";
    }
    std::cout << (it.converged ? "converged" : "NOT converged") << " after " << it.iterations
              << " update(s); gap " << std::scientific << it.final.gap() << "\n";
    double err = 0.0;
    for (int i = 0; i < kNumFields; ++i) {
        err = std::max(err, std::abs(it.final.lower[i] - eq.w_star[i]));
        err = std::max(err, std::abs(it.final.upper[i] - eq.w_star[i]));
    }
    std::cout << "max deviation from closed-form equilibrium: " << err << "\n";

    if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        os << std::setprecision(17);
        os << "m";
        for (int i = 0; i < kNumFields; ++i) os << ",lower_" << kFieldNames[i];
        for (int i = 0; i < kNumFields; ++i) os << ",upper_" << kFieldNames[i];
        os << ",gap\n";
        for (const BracketPair& bp : it.history) {
            os << bp.iteration;
            for (double v : bp.lower) os << ',' << v;
            for (double v : bp.upper) os << ',' << v;
            os << ',' << bp.gap() << '\n';
        }
    }
    return it.converged ? 0 : 2;
}

int cmd_verify(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const std::vector<CheckResult> checks = run_verify(cfg);
    int failures = 0;
    for (const CheckResult& c : checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
        if (!c.pass) ++failures;
    }
    std::cout << checks.size() - failures << "/" << checks.size() << " checks passed\n";
    return failures == 0 ? 0 : 3;
}

int cmd_sweep(const std::string& config_path, int samples, std::uint64_t seed, bool have_samples,
              bool have_seed, const std::string& output_dir) {
    SweepSpec spec = load_sweep_spec(config_path);
    if (have_samples) spec.samples = samples;
    if (have_seed) spec.seed = seed;
    spec.validate();
    const SweepSummary sum = run_sweep(spec);
    std::cout << sum.to_text();
    const fs::path out = prepare_output_dir(output_dir) / "sweep_summary.txt";
    std::ofstream(out) << sum.to_text();
    std::cout << "summary written to " << out.string() << "\n";
    const bool ok = sum.no_regime_count == 0 && sum.iterate_failures == 0;
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conserved-rd: solver and verification toolkit for a conservative\n"
                 "six-component reaction-diffusion system"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    double tol = 1e-8;
    int max_iter = 10000;
    std::string csv_path;
    int samples = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool with_output) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        if (with_output) sub->add_option("--output-dir", output_dir, "output directory");
    };

    CLI::App* eq = app.add_subcommand("equilibrium", "classify the regime and print the "
                                                     "closed-form equilibrium");
    add_common(eq, true);
    CLI::App* sim = app.add_subcommand("simulate", "integrate to steady state; write trace.csv "
                                                   "and snapshots");
    add_common(sim, true);
    CLI::App* itc = app.add_subcommand("iterate", "run the monotone bracket recursion");
    add_common(itc, false);
    itc->add_option("--tol", tol, "bracket gap tolerance");
    itc->add_option("--max-iter", max_iter, "maximum updates");
    itc->add_option("--csv", csv_path, "optional CSV dump of the bracket trajectory");
    CLI::App* ver = app.add_subcommand("verify", "run the full cross-check battery");
    add_common(ver, false);
    CLI::App* sw = app.add_subcommand("sweep", "randomized coverage sweep over parameters");
    add_common(sw, true);
    CLI::Option* opt_samples = sw->add_option("--samples", samples, "number of samples");
    CLI::Option* opt_seed = sw->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (eq->parsed()) {
            return cmd_equilibrium(config_path,
                                   output_dir.empty() ? load_config(config_path).output_dir
                                                      : output_dir);
        }
        if (sim->parsed()) {
            return cmd_simulate(config_path, output_dir.empty()
                                                 ? load_config(config_path).output_dir
                                                 : output_dir);
        }
        if (itc->parsed()) return cmd_iterate(config_path, tol, max_iter, csv_path);
        if (ver->parsed()) return cmd_verify(config_path);
        if (sw->parsed()) {
            return cmd_sweep(config_path, samples, seed, opt_samples->count() > 0,
                             opt_seed->count() > 0,
                             output_dir.empty() ? "./out" : output_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NotConverged& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
