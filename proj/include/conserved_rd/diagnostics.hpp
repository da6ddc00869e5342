#ifndef CONSERVED_RD_DIAGNOSTICS_HPP
#define CONSERVED_RD_DIAGNOSTICS_HPP

/**
 * @file diagnostics.hpp
 * @brief Norms, conservation-drift monitors, exponential decay-rate fitting,
 *        and min-branch lock detection over simulation traces.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "conserved_rd/core.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/errors.hpp"

namespace conserved_rd {

/// Aggregated truth of a node-wise comparison: all nodes, no nodes, or mixed.
enum class BranchAgg { All, None, Mixed };

inline char to_char(BranchAgg b) {
    return b == BranchAgg::All ? 'a' : (b == BranchAgg::None ? 'n' : 'm');
}

/// One monitored instant of a simulation.
struct TraceRow {
    double t = 0.0;
    double sup_dist_to_eq = 0.0;
    double mass_u = 0.0;   // mean of u1 + u2
    double mass_v = 0.0;   // mean of v1 + v2 + v3 + v4
    double combo1 = 0.0;   // mean of v1 + v2 - u1
    double combo2 = 0.0;   // mean of v3 + v4 - u2
    double combo1_dev_sup = 0.0;  // sup over nodes of |(v1+v2-u1) - W1|
    double combo2_dev_sup = 0.0;  // sup over nodes of |(v3+v4-u2) - W2|
    double min_field_value = 0.0;
    double max_u = 0.0;  // max node value over u1, u2
    double max_v = 0.0;  // max node value over v1..v4
    BranchAgg branch1 = BranchAgg::Mixed;  // u1 < v1 over nodes
    BranchAgg branch2 = BranchAgg::Mixed;  // u2 < v4 over nodes
};

using Trace = std::vector<TraceRow>;

inline double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

/// Max over nodes and fields of |state - point| (distance to a constant 6-vector).
inline double sup_dist(const State& s, const Vec6& point) {
    double m = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (double v : s.f[fi]) m = std::max(m, std::abs(v - point[fi]));
    }
    return m;
}

struct DecayFit {
    double rate = 0.0;
    double r_squared = 0.0;
};

/**
 * Least-squares slope of log(value) vs t. The fit window is the last
 * `window_fraction` of the samples whose value exceeds 100x machine epsilon
 * (floor samples would contaminate the slope).
 */
inline DecayFit decay_rate_fit(const std::vector<std::pair<double, double>>& series,
                               double window_fraction = 0.5) {
    std::vector<std::pair<double, double>> clean;
    const double floor = 100.0 * std::numeric_limits<double>::epsilon();
    for (const auto& [t, v] : series) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw NonPositiveValues("decay fit requires non-negative finite values");
        }
        if (v > floor) clean.push_back({t, v});
    }
    const std::size_t keep = static_cast<std::size_t>(clean.size() * window_fraction);
    if (keep < 3) throw WindowTooShort("decay fit needs at least 3 usable samples in the window");
    std::vector<std::pair<double, double>> win(clean.end() - keep, clean.end());
    double st = 0.0, sy = 0.0;
    for (const auto& [t, v] : win) {
        st += t;
        sy += std::log(v);
    }
    const double n = static_cast<double>(win.size());
    const double mt = st / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t, v] : win) {
        const double dt = t - mt, dy = std::log(v) - my;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw WindowTooShort("decay fit window has no time extent");
    const double slope = sxy / sxx;
    const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return {-slope, r2};
}

struct BranchLock {
    bool locked = false;
    double lock_time = 0.0;
    BranchAgg pattern1 = BranchAgg::Mixed;
    BranchAgg pattern2 = BranchAgg::Mixed;
};

/**
 * Earliest time after which the branch pattern is uniform over all nodes
 * (all-or-none on both pairs) and never changes again for the rest of the run.
 */
inline BranchLock detect_branch_lock(const Trace& trace) {
    BranchLock out;
    if (trace.empty()) return out;
    const TraceRow& last = trace.back();
    if (last.branch1 == BranchAgg::Mixed || last.branch2 == BranchAgg::Mixed) return out;
    std::size_t first = trace.size() - 1;
    while (first > 0 && trace[first - 1].branch1 == last.branch1 &&
           trace[first - 1].branch2 == last.branch2) {
        --first;
    }
    out.locked = true;
    out.lock_time = trace[first].t;
    out.pattern1 = last.branch1;
    out.pattern2 = last.branch2;
    return out;
}

struct ConservationDrift {
    double mass_u = 0.0;
    double mass_v = 0.0;
    double combo1 = 0.0;
    double combo2 = 0.0;
    double max() const { return std::max({mass_u, mass_v, combo1, combo2}); }
};

/// Max over rows of |value - value(0)| / |value(0)| for each conserved mean.
inline ConservationDrift conservation_drift(const Trace& trace) {
    ConservationDrift d;
    if (trace.empty()) return d;
    const TraceRow& r0 = trace.front();
    auto rel = [](double v, double v0) {
        const double den = std::abs(v0) > 0.0 ? std::abs(v0) : 1.0;
        return std::abs(v - v0) / den;
    };
    for (const TraceRow& r : trace) {
        d.mass_u = std::max(d.mass_u, rel(r.mass_u, r0.mass_u));
        d.mass_v = std::max(d.mass_v, rel(r.mass_v, r0.mass_v));
        d.combo1 = std::max(d.combo1, rel(r.combo1, r0.combo1));
        d.combo2 = std::max(d.combo2, rel(r.combo2, r0.combo2));
    }
    return d;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_DIAGNOSTICS_HPP
