#ifndef CONSERVED_RD_MONOTONE_HPP
#define CONSERVED_RD_MONOTONE_HPP

/**
 * @file monotone.hpp
 * @brief Upper/lower-solution machinery realized as a fixed-point recursion
 *        on limit constants.
 *
 * Each bracket of the pair is advanced by the scalar limit of its four
 * v-equations with the other quantities frozen at their current constants:
 *
 *   v1 <- scalar_limit(a = a1, b = u1, c = c1, d = c2 v2)
 *   v2 <- (c1 v1 + a2 min{u2, v4}) / c2
 *   v3 <- (c4 v4 + a1 min{u1, v1}) / c3
 *   v4 <- scalar_limit(a = a2, b = u2, c = c4, d = c3 v3)
 *
 * followed by the conservation closure. The u-constants are eliminated
 * through the conserved combinations (u1 = v1 + v2 - W1, u2 = v3 + v4 - W2,
 * floored at 0), and each bracket's v-vector is rescaled to sum N0. The
 * rescale pins the one neutral direction of the locked linear subsystem:
 * after branch lock the v-subsystem is conservative, so its update map has
 * a unit Perron eigenvalue along the equilibrium profile and only the
 * conserved total selects the level. Finally the new pair is intersected
 * with the incoming pair, so the lower sequence is non-decreasing and the
 * upper non-increasing by construction; an empty intersection signals a
 * genuine bracketing fault and raises OrderViolation.
 *
 * A coincident fixed point (lower == upper) of this map satisfies the full
 * equilibrium system: the scalar limits enforce the four v-equations with
 * self-consistent min branches, the u-closure enforces the W constraints,
 * and the rescale enforces the N0 (hence M0) constraint.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "conserved_rd/core.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/errors.hpp"

namespace conserved_rd {

/// Inputs of the scalar limit: w_t - Lap w = -a min{w, b} - c w + d.
struct ScalarLimitInput {
    double a = 0.0;  // >= 0
    double b = 0.0;  // >= 0
    double c = 1.0;  // > 0
    double d = 0.0;  // >= 0
};

/// Long-time limit of the scalar equation: d/(a+c) when d/(a+c) <= b
/// (the min settles on w), otherwise (d - a b)/c. Continuous at the branch point.
inline double scalar_limit(const ScalarLimitInput& in) {
    if (!(in.c > 0.0)) throw ConfigError("scalar_limit: c must be strictly positive");
    const double settled = in.d / (in.a + in.c);
    return settled <= in.b ? settled : (in.d - in.a * in.b) / in.c;
}

/// Paired lower/upper constant 6-vectors at one iteration of the recursion.
struct BracketPair {
    Vec6 lower{};
    Vec6 upper{};
    int iteration = 1;

    double gap() const {
        double g = 0.0;
        for (int i = 0; i < kNumFields; ++i) g = std::max(g, std::abs(upper[i] - lower[i]));
        return g;
    }
};

/**
 * Initial bracket by equilibrium scaling: K1 = 0.5 min_i(min_x field_i / w*_i),
 * K2 = 2 max_i(max_x field_i / w*_i). The conserved means tie the initial data
 * to w*, so some field dips below its equilibrium value somewhere and some
 * field exceeds it, giving 0 < K1 < 1 < K2; the pair (K1 w*, K2 w*) sandwiches
 * the initial state node-for-node.
 */
inline BracketPair init_bracket(const EquilibriumPoint& eq, const State& state0) {
    const Vec6& w = eq.w_star;
    double wmax = 0.0;
    for (double wi : w) wmax = std::max(wmax, std::abs(wi));
    for (double wi : w) {
        if (wi <= 1e-12 * std::max(1.0, wmax)) {
            throw ZeroEquilibriumComponent(
                "init_bracket: equilibrium has a zero component; shift the initial data first");
        }
    }
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (double v : state0.f[fi]) {
            rmin = std::min(rmin, v / w[fi]);
            rmax = std::max(rmax, v / w[fi]);
        }
    }
    const double K1 = 0.5 * rmin;
    const double K2 = 2.0 * rmax;
    BracketPair pair;
    pair.iteration = 1;
    for (int i = 0; i < kNumFields; ++i) {
        pair.lower[i] = K1 * w[i];
        pair.upper[i] = K2 * w[i];
    }
    return pair;
}

namespace detail {

/// Scalar-limit sweep of one bracket's v-constants plus the conservation closure.
inline Vec6 bracket_side_update(const Vec6& w, const Params& p, const ConservedQuantities& cq) {
    const double u1 = w[0], u2 = w[1], v1 = w[2], v2 = w[3], v3 = w[4], v4 = w[5];
    std::array<double, 4> v;
    v[0] = scalar_limit({p.a1, u1, p.c1, p.c2 * v2});
    v[1] = (p.c1 * v1 + p.a2 * std::min(u2, v4)) / p.c2;
    v[2] = (p.c4 * v4 + p.a1 * std::min(u1, v1)) / p.c3;
    v[3] = scalar_limit({p.a2, u2, p.c4, p.c3 * v3});
    const double total = v[0] + v[1] + v[2] + v[3];
    if (total > 0.0 && cq.N0 > 0.0) {
        const double scale = cq.N0 / total;
        for (double& vi : v) vi *= scale;
    }
    Vec6 out;
    out[2] = v[0];
    out[3] = v[1];
    out[4] = v[2];
    out[5] = v[3];
    out[0] = std::max(0.0, v[0] + v[1] - cq.W1);
    out[1] = std::max(0.0, v[2] + v[3] - cq.W2);
    return out;
}

}  // namespace detail

/**
 * One step of the recursion. Pairs originate from init_bracket (scaled
 * equilibria), which the update maps onto the equilibrium itself; the
 * intersection then keeps later pairs nested. OrderViolation means the
 * accumulated lower and upper bounds crossed, which cannot happen for a
 * genuine bracket of the unique equilibrium.
 */
inline BracketPair bracket_update(const BracketPair& pair, const Params& p,
                                  const ConservedQuantities& cq) {
    const Vec6 lo = detail::bracket_side_update(pair.lower, p, cq);
    const Vec6 up = detail::bracket_side_update(pair.upper, p, cq);
    BracketPair next;
    next.iteration = pair.iteration + 1;
    const double tol = 1e-9 * std::max(1.0, std::abs(cq.N0));
    for (int i = 0; i < kNumFields; ++i) {
        next.lower[i] = std::max(lo[i], pair.lower[i]);
        next.upper[i] = std::min(up[i], pair.upper[i]);
        if (next.lower[i] > next.upper[i] + tol) {
            throw OrderViolation(std::string("bracket order lost in component ") +
                                 kFieldNames[i]);
        }
        // A sub-tolerance crossing is a tie; keep the pair ordered.
        if (next.lower[i] > next.upper[i]) next.upper[i] = next.lower[i];
    }
    return next;
}

struct IterationResult {
    BracketPair final;
    int iterations = 0;
    bool converged = false;
    std::vector<BracketPair> history;  // includes the initial pair
};

/**
 * Repeat bracket_update until the bracket gap drops below tol or max_iter is
 * reached. On convergence both limits coincide with the constant equilibrium.
 */
inline IterationResult iterate_to_fixed_point(const Params& p, const ConservedQuantities& cq,
                                              const EquilibriumPoint& eq, const State& state0,
                                              double tol = 1e-8, int max_iter = 10000) {
    IterationResult res;
    BracketPair pair = init_bracket(eq, state0);
    res.history.push_back(pair);
    if (pair.gap() < tol) {
        res.final = pair;
        res.converged = true;
        return res;
    }
    for (int m = 0; m < max_iter; ++m) {
        pair = bracket_update(pair, p, cq);
        res.history.push_back(pair);
        ++res.iterations;
        if (pair.gap() < tol) {
            res.converged = true;
            break;
        }
    }
    res.final = pair;
    return res;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_MONOTONE_HPP
