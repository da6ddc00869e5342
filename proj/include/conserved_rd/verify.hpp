#ifndef CONSERVED_RD_VERIFY_HPP
#define CONSERVED_RD_VERIFY_HPP

/// The cross-check battery behind `conserved-rd verify`: equilibrium algebra,
/// simulation, bracket iteration, and the diagnostics invariants that are in
/// scope for the given configuration.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "conserved_rd/diagnostics.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/monotone.hpp"
#include "conserved_rd/pde.hpp"

namespace conserved_rd {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline void add_check(std::vector<CheckResult>& out, const std::string& name, bool pass,
                      double value, double bound) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << "value " << value << ", bound " << bound;
    out.push_back({name, pass, os.str()});
}

}  // namespace detail

inline std::vector<CheckResult> run_verify(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const Grid1D& grid = cfg.grid;
    const Params& p = cfg.params;

    State s0 = evaluate_initial(cfg.initial, grid);
    const ConservedQuantities cq = compute_conserved(s0, grid);
    const double scale = std::max({1.0, std::abs(cq.M0), std::abs(cq.N0)});

    // Conserved-quantity identity.
    const double ident = std::abs(cq.N0 - (cq.M0 + cq.W1 + cq.W2));
    detail::add_check(out, "conserved identity N0 = M0 + W1 + W2", ident <= 1e-12 * scale, ident,
                      1e-12 * scale);

    // Closed-form equilibrium.
    EquilibriumPoint eq;
    try {
        eq = solve_equilibrium(p, cq);
        const double res = residual_norm(eq.w_star, p, cq);
        detail::add_check(out, "equilibrium residual", res <= 1e-10 * scale, res, 1e-10 * scale);
        double cons = std::max(std::abs(eq.w_star[0] + eq.w_star[1] - cq.M0),
                               std::abs(eq.w_star[2] + eq.w_star[3] + eq.w_star[4] +
                                        eq.w_star[5] - cq.N0));
        detail::add_check(out, "equilibrium linear constraints", cons <= 1e-12 * scale, cons,
                          1e-12 * scale);
        out.push_back({"equilibrium indicator consistency",
                       satisfies_indicators(eq.regime, eq.w_star, 1e-9 * scale),
                       std::string("regime ") + to_string(eq.regime)});
    } catch (const std::exception& e) {
        out.push_back({"equilibrium solve", false, e.what()});
        return out;
    }

    // Q-matrix structure: zero column sums for all four regimes.
    {
        double worst = 0.0;
        for (RegimeTag t : {RegimeTag::Q1, RegimeTag::Q2, RegimeTag::Q3, RegimeTag::Q4}) {
            const RegimeMatrix Q = build_Q(t, p);
            for (int c = 0; c < 6; ++c) {
                double colsum = 0.0;
                for (int r = 0; r < 6; ++r) colsum += Q.m[r][c];
                worst = std::max(worst, std::abs(colsum));
            }
        }
        detail::add_check(out, "Q matrices column sums", worst == 0.0, worst, 0.0);
    }

    // Simulation.
    const SimResult sim = run_to_steady(cfg);
    if (cfg.boundary == Boundary::Neumann) {
        out.push_back({"simulation reached steady state", sim.steady,
                       "steady_time " + std::to_string(sim.steady_time)});
        const double dist = sup_dist(sim.final, eq.w_star);
        const double dist_bound = std::max(1e-3, 100.0 * cfg.steady_tol);
        detail::add_check(out, "final distance to equilibrium", dist <= dist_bound, dist,
                          dist_bound);
        const ConservationDrift drift = conservation_drift(sim.trace);
        detail::add_check(out, "conservation drift", drift.max() < 1e-12, drift.max(), 1e-12);
        const TraceRow& last = sim.trace.back();
        const double combo_err =
            std::max(std::abs(last.combo1 - cq.W1), std::abs(last.combo2 - cq.W2));
        detail::add_check(out, "combo means converge to W1, W2",
                          combo_err <= std::max(1e-6, 10.0 * cfg.steady_tol), combo_err,
                          std::max(1e-6, 10.0 * cfg.steady_tol));

        double min_val = 0.0, max_ratio = 0.0;
        double cap_u = 0.0, cap_v = 0.0;
        for (std::size_t i = 0; i < s0.u1().size(); ++i) {
            cap_u = std::max(cap_u, s0.u1()[i] + s0.u2()[i]);
            cap_v = std::max(cap_v, s0.v1()[i] + s0.v2()[i] + s0.v3()[i] + s0.v4()[i]);
        }
        for (const TraceRow& r : sim.trace) {
            min_val = std::min(min_val, r.min_field_value);
            max_ratio = std::max({max_ratio, r.max_u / (2.0 * cap_u), r.max_v / (2.0 * cap_v)});
        }
        detail::add_check(out, "positivity preserved", min_val >= 0.0, min_val, 0.0);
        detail::add_check(out, "boundedness below 2x conserved caps", max_ratio <= 1.0, max_ratio,
                          1.0);

        const BranchLock lock = detect_branch_lock(sim.trace);
        out.push_back({"branch pattern locks before steady time",
                       lock.locked && lock.lock_time <= sim.steady_time,
                       lock.locked ? "lock_time " + std::to_string(lock.lock_time)
                                   : "pattern keeps mixing"});
        if (lock.locked) {
            bool monotone = true;
            double prev = std::numeric_limits<double>::infinity();
            for (const TraceRow& r : sim.trace) {
                if (r.t < lock.lock_time) continue;
                if (r.sup_dist_to_eq > prev * (1.0 + 1e-9) && prev > 1e-12) monotone = false;
                prev = r.sup_dist_to_eq;
            }
            out.push_back({"sup distance monotone after lock", monotone, ""});
        }
    } else {
        const double sup_final = sup_dist(sim.final, Vec6{});
        detail::add_check(out, "Dirichlet decay of all fields", sup_final < 1e-3, sup_final, 1e-3);
        std::vector<std::pair<double, double>> mass;
        for (const TraceRow& r : sim.trace) mass.push_back({r.t, r.mass_u + r.mass_v});
        try {
            const DecayFit fit = decay_rate_fit(mass);
            detail::add_check(out, "Dirichlet mass decay rate ~ 1",
                              std::abs(fit.rate - 1.0) <= 0.1, fit.rate, 1.0);
        } catch (const std::exception& e) {
            out.push_back({"Dirichlet mass decay rate ~ 1", false, e.what()});
        }
    }

    // Bracket iteration (the sandwich needs the Neumann equilibrium).
    if (cfg.boundary == Boundary::Neumann) {
        try {
            const IterationResult it = iterate_to_fixed_point(p, cq, eq, s0, 1e-8, 10000);
            out.push_back({"bracket iteration converged", it.converged,
                           std::to_string(it.iterations) + " iterations"});
            double err = 0.0;
            for (int i = 0; i < kNumFields; ++i) {
                err = std::max(err, std::abs(it.final.lower[i] - eq.w_star[i]));
                err = std::max(err, std::abs(it.final.upper[i] - eq.w_star[i]));
            }
            detail::add_check(out, "bracket limits match equilibrium", err <= 1e-6 * scale, err,
                              1e-6 * scale);
            // Sandwich against the simulated late-time fields.
            double viol = 0.0;
            const double tol = std::max(1e-6, 100.0 * cfg.steady_tol);
            for (const BracketPair& bp : it.history) {
                for (int fi = 0; fi < kNumFields; ++fi) {
                    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                    for (double v : sim.final.f[fi]) {
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    viol = std::max(viol, bp.lower[fi] - lo);
                    viol = std::max(viol, hi - bp.upper[fi]);
                }
            }
            detail::add_check(out, "sandwich holds at late times", viol <= tol, viol, tol);
        } catch (const std::exception& e) {
            out.push_back({"bracket iteration", false, e.what()});
        }
    }

    return out;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_VERIFY_HPP
