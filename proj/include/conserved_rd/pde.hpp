#ifndef CONSERVED_RD_PDE_HPP
#define CONSERVED_RD_PDE_HPP

/**
 * @file pde.hpp
 * @brief Finite-difference discretization and explicit Euler time integration
 *        of the six-component system, with steady-state detection.
 *
 * Spatial operator: second differences on the cell-centered grid. Neumann
 * walls use mirror ghost cells (f[-1] = f[0]), which makes every stencil row
 * sum to zero and node sums of the four conserved combinations exact per step
 * up to round-off. Homogeneous Dirichlet walls use antisymmetric ghosts
 * (ghost = -f[boundary cell]), enforcing zero at the cell face.
 *
 * Explicit Euler only: the min nonlinearity is non-differentiable, so Newton
 * iterations for implicit steps would need generalized derivatives, and the
 * stability bound is cheap at this scale. min is evaluated exactly; ties take
 * either branch (the right-hand side is continuous there).
 */

#include <algorithm>
#include <cmath>
#include <vector>

#include "conserved_rd/core.hpp"
#include "conserved_rd/diagnostics.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/errors.hpp"

namespace conserved_rd {

struct StepperConfig {
    double dt = 0.0;
    double stability_factor = 0.9;  // in (0, 1]

    /// dt <= stability_factor * min(h^2/2, 1/L), L the reaction Lipschitz bound.
    static double stable_dt(const Grid1D& grid, const Params& p, double factor = 0.9) {
        const double h = grid.spacing();
        return factor * std::min(h * h / 2.0, 1.0 / p.reaction_lipschitz());
    }

    bool satisfies_bound(const Grid1D& grid, const Params& p) const {
        return dt > 0.0 && dt <= stable_dt(grid, p, stability_factor) * (1.0 + 1e-12);
    }
};

inline Field laplacian(const Field& f, const Grid1D& grid, Boundary boundary) {
    const int n = grid.n_cells();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Field g(n);
    for (int i = 1; i + 1 < n; ++i) g[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
    if (boundary == Boundary::Neumann) {
        g[0] = (f[1] - f[0]) * inv_h2;
        g[n - 1] = (f[n - 2] - f[n - 1]) * inv_h2;
    } else {
        g[0] = (f[1] - 3.0 * f[0]) * inv_h2;
        g[n - 1] = (f[n - 2] - 3.0 * f[n - 1]) * inv_h2;
    }
    return g;
}

/**
 * Pointwise reaction right-hand sides. The six outputs sum to zero at every
 * node: the two min-rate terms m1, m2 are computed once and every linear term
 * appears twice with opposite signs.
 */
inline std::array<Field, kNumFields> reaction_rhs(const State& s, const Params& p) {
    const int n = static_cast<int>(s.u1().size());
    std::array<Field, kNumFields> r;
    for (auto& f : r) f.resize(n);
    for (int i = 0; i < n; ++i) {
        const double m1 = p.a1 * std::min(s.u1()[i], s.v1()[i]);
        const double m2 = p.a2 * std::min(s.u2()[i], s.v4()[i]);
        const double t1 = p.c1 * s.v1()[i];
        const double t2 = p.c2 * s.v2()[i];
        const double t3 = p.c3 * s.v3()[i];
        const double t4 = p.c4 * s.v4()[i];
        r[0][i] = -m1 + m2;
        r[1][i] = m1 - m2;
        r[2][i] = -m1 - t1 + t2;
        r[3][i] = -t2 + t1 + m2;
        r[4][i] = -t3 + t4 + m1;
        r[5][i] = -m2 - t4 + t3;
    }
    return r;
}

/// One explicit Euler step: w <- w + dt (Lap w + R(w)).
inline State step(const State& s, const Params& p, const StepperConfig& cfg, const Grid1D& grid,
                  Boundary boundary) {
    if (!cfg.satisfies_bound(grid, p)) {
        throw StabilityViolation("dt exceeds the explicit Euler stability bound");
    }
    const auto r = reaction_rhs(s, p);
    State out;
    out.time = s.time + cfg.dt;
    for (int fi = 0; fi < kNumFields; ++fi) {
        const Field lap = laplacian(s.f[fi], grid, boundary);
        const Field& w = s.f[fi];
        Field& o = out.f[fi];
        o.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            o[i] = w[i] + cfg.dt * (lap[i] + r[fi][i]);
            if (!std::isfinite(o[i])) throw NaNDetected("non-finite value produced by step");
        }
    }
    return out;
}

struct SimResult {
    State final;
    Trace trace;
    double steady_time = 0.0;
    bool steady = false;           // false: t_max reached without meeting the criterion
    ConservedQuantities cq;        // of the initial data
    EquilibriumPoint equilibrium;  // closed-form target used for sup_dist_to_eq
    std::vector<State> snapshots;  // captured at the configured snapshot times
};

namespace detail {

inline BranchAgg aggregate_branch(const Field& u, const Field& v) {
    int below = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < v[i]) ++below;
    }
    if (below == 0) return BranchAgg::None;
    if (below == static_cast<int>(u.size())) return BranchAgg::All;
    return BranchAgg::Mixed;
}

inline TraceRow make_trace_row(const State& s, const Grid1D& grid, const Vec6& w_star,
                               const ConservedQuantities& cq) {
    TraceRow row;
    row.t = s.time;
    row.sup_dist_to_eq = sup_dist(s, w_star);
    const int n = grid.n_cells();
    double su = 0.0, sv = 0.0, sc1 = 0.0, sc2 = 0.0;
    double dev1 = 0.0, dev2 = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    double mxu = -mn, mxv = -mn;
    for (int i = 0; i < n; ++i) {
        const double u1 = s.u1()[i], u2 = s.u2()[i];
        const double v1 = s.v1()[i], v2 = s.v2()[i], v3 = s.v3()[i], v4 = s.v4()[i];
        su += u1 + u2;
        sv += v1 + v2 + v3 + v4;
        const double c1 = v1 + v2 - u1;
        const double c2 = v3 + v4 - u2;
        sc1 += c1;
        sc2 += c2;
        dev1 = std::max(dev1, std::abs(c1 - cq.W1));
        dev2 = std::max(dev2, std::abs(c2 - cq.W2));
        mn = std::min({mn, u1, u2, v1, v2, v3, v4});
        mxu = std::max({mxu, u1, u2});
        mxv = std::max({mxv, v1, v2, v3, v4});
    }
    row.mass_u = su / n;
    row.mass_v = sv / n;
    row.combo1 = sc1 / n;
    row.combo2 = sc2 / n;
    row.combo1_dev_sup = dev1;
    row.combo2_dev_sup = dev2;
    row.min_field_value = mn;
    row.max_u = mxu;
    row.max_v = mxv;
    row.branch1 = aggregate_branch(s.u1(), s.v1());
    row.branch2 = aggregate_branch(s.u2(), s.v4());
    return row;
}

inline double residual_sup(const State& s, const Params& p, const Grid1D& grid,
                           Boundary boundary) {
    const auto r = reaction_rhs(s, p);
    double m = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        const Field lap = laplacian(s.f[fi], grid, boundary);
        for (std::size_t i = 0; i < lap.size(); ++i) {
            m = std::max(m, std::abs(lap[i] + r[fi][i]));
        }
    }
    return m;
}

inline double sup_diff(const State& a, const State& b) {
    double m = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (std::size_t i = 0; i < a.f[fi].size(); ++i) {
            m = std::max(m, std::abs(a.f[fi][i] - b.f[fi][i]));
        }
    }
    return m;
}

}  // namespace detail

/**
 * Integrate until t_max or until the steady criterion holds: both the
 * residual sup-norm |Lap w + R(w)| and the derivative proxy
 * |w(t) - w(t - dcheck)| / dcheck drop below steady_tol, with
 * dcheck = 100 dt (the joint test avoids false positives during min-branch
 * plateaus). When t_max is reached first, the partial trace is returned with
 * steady = false.
 */
inline SimResult run_to_steady(const RunConfig& cfg) {
    const Grid1D& grid = cfg.grid;
    StepperConfig sc;
    sc.dt = cfg.dt > 0.0 ? cfg.dt : StepperConfig::stable_dt(grid, cfg.params);
    if (!sc.satisfies_bound(grid, cfg.params)) {
        throw StabilityViolation("configured dt exceeds the explicit Euler stability bound");
    }

    State s = evaluate_initial(cfg.initial, grid);
    SimResult res;
    res.cq = compute_conserved(s, grid);
    res.equilibrium = solve_equilibrium(cfg.params, res.cq);

    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t snap_next = 0;
    while (snap_next < snap_times.size() && snap_times[snap_next] <= 0.0) {
        res.snapshots.push_back(s);
        ++snap_next;
    }

    const int check_stride = 100;  // derivative proxy compares across 100 dt
    const int trace_stride = std::max(1, cfg.trace_stride);
    State prev_check = s;
    double last_proxy = std::numeric_limits<double>::infinity();

    long step_count = 0;
    res.trace.push_back(detail::make_trace_row(s, grid, res.equilibrium.w_star, res.cq));
    if (detail::residual_sup(s, cfg.params, grid, cfg.boundary) < cfg.steady_tol) {
        // Already numerically steady: zero-length transient.
        res.steady = true;
        res.steady_time = 0.0;
        res.final = std::move(s);
        return res;
    }
    while (s.time < cfg.t_max) {
        State next = step(s, cfg.params, sc, grid, cfg.boundary);
        s = std::move(next);
        ++step_count;
        while (snap_next < snap_times.size() && snap_times[snap_next] <= s.time) {
            res.snapshots.push_back(s);
            ++snap_next;
        }
        if (step_count % check_stride == 0) {
            last_proxy = detail::sup_diff(s, prev_check) / (check_stride * sc.dt);
            prev_check = s;
        }
        const bool record = (step_count % trace_stride == 0);
        double residual = -1.0;
        if (record) {
            res.trace.push_back(detail::make_trace_row(s, grid, res.equilibrium.w_star, res.cq));
            residual = detail::residual_sup(s, cfg.params, grid, cfg.boundary);
        }
        if (record && residual < cfg.steady_tol && last_proxy < cfg.steady_tol) {
            res.steady = true;
            res.steady_time = s.time;
            break;
        }
    }
    if (!res.steady) res.steady_time = s.time;
    res.final = std::move(s);
    return res;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_PDE_HPP
