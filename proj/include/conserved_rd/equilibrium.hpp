#ifndef CONSERVED_RD_EQUILIBRIUM_HPP
#define CONSERVED_RD_EQUILIBRIUM_HPP

/**
 * @file equilibrium.hpp
 * @brief Conserved quantities, regime conditions, and the closed-form
 *        constant equilibrium of the six-component system.
 *
 * The system conserves four integral means of the initial data
 * (M0, N0, W1, W2). The constant equilibrium is piecewise linear in these:
 * the branch pattern of the two min-terms selects one of four linear regimes
 * Q1..Q4, each with a unique closed-form solution under the corresponding
 * strict/non-strict condition pair (I1 & I2, I3 & I2c, I4 & I1c, I3c & I4c).
 * For every positive parameter set and positive initial data exactly these
 * four pairs cover all inputs.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "conserved_rd/core.hpp"
#include "conserved_rd/errors.hpp"

namespace conserved_rd {

/// Integral means fixed by the initial data (Neumann runs conserve them).
struct ConservedQuantities {
    double M0 = 0.0;  // mean of u1 + u2
    double N0 = 0.0;  // mean of v1 + v2 + v3 + v4
    double W1 = 0.0;  // mean of v1 + v2 - u1
    double W2 = 0.0;  // mean of v3 + v4 - u2
};

enum class RegimeTag { Q1, Q2, Q3, Q4 };

inline const char* to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::Q1: return "Q1";
        case RegimeTag::Q2: return "Q2";
        case RegimeTag::Q3: return "Q3";
        default: return "Q4";
    }
}

/// One strict inequality lhs < rhs; its complement is lhs >= rhs.
struct Condition {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs < rhs; }
    bool complement_holds() const { return lhs >= rhs; }
    /// True when floating point puts the input within tol of the boundary.
    bool near_boundary(double rel_tol = 1e-12) const {
        return std::abs(lhs - rhs) <= rel_tol * std::max(std::abs(lhs), std::abs(rhs));
    }
};

/// Evaluated conditions I1..I4 plus the derived constants D1, D2, D3.
/// Carries the inputs so regime classification is self-contained.
struct ConditionReport {
    Params params;
    ConservedQuantities cq;
    std::array<Condition, 4> I;  // I[0] = I1, ..., I[3] = I4
    double D1 = 0.0, D2 = 0.0, D3 = 0.0;
};

struct EquilibriumPoint {
    Vec6 w_star{};
    RegimeTag regime = RegimeTag::Q4;
};

/// 6x6 coefficient matrix of one regime; every column sums to zero.
struct RegimeMatrix {
    std::array<std::array<double, 6>, 6> m{};
};

inline ConservedQuantities compute_conserved(const State& initial, const Grid1D& grid) {
    const int n = grid.n_cells();
    double su = 0.0, sv = 0.0, sc1 = 0.0, sc2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u1 = initial.u1()[i], u2 = initial.u2()[i];
        const double v1 = initial.v1()[i], v2 = initial.v2()[i];
        const double v3 = initial.v3()[i], v4 = initial.v4()[i];
        su += u1 + u2;
        sv += v1 + v2 + v3 + v4;
        sc1 += v1 + v2 - u1;
        sc2 += v3 + v4 - u2;
    }
    return {su / n, sv / n, sc1 / n, sc2 / n};
}

inline ConditionReport condition_values(const Params& p, const ConservedQuantities& cq) {
    ConditionReport r{p, cq, {}, 0.0, 0.0, 0.0};
    r.D1 = p.a1 * p.c2 * (p.a2 + p.c4) + p.a2 * p.c3 * (p.a1 + p.c1) +
           p.c2 * p.c3 * (p.a1 + p.a2);
    r.D2 = p.a1 * (p.a2 + p.c3 + p.c4) + p.a2 * p.c3;
    r.D3 = p.a2 * (p.a1 + p.c1 + p.c2) + p.a1 * p.c2;
    r.I[0] = {p.a2 * (p.a1 + p.c1) * cq.M0, p.c2 * (p.a1 + p.a2) * cq.W1};
    r.I[1] = {p.a1 * (p.a2 + p.c4) * cq.M0, p.c3 * (p.a1 + p.a2) * cq.W2};
    r.I[2] = {p.a2 * p.c3 * (p.a1 + p.c1) * cq.N0, r.D1 * cq.W1};
    r.I[3] = {p.a1 * p.c2 * (p.a2 + p.c4) * cq.N0, r.D1 * cq.W2};
    return r;
}

/// Min-branch pattern a regime encodes: does each min pick the u argument?
/// Q1: u1 < v1 and u2 < v4; Q2: u1 < v1, u2 >= v4; Q3 and Q4 mirrored.
inline bool regime_picks_u1(RegimeTag t) { return t == RegimeTag::Q1 || t == RegimeTag::Q2; }
inline bool regime_picks_u2(RegimeTag t) { return t == RegimeTag::Q1 || t == RegimeTag::Q3; }

/// Check the indicator constraints of a regime at a point, within slack.
inline bool satisfies_indicators(RegimeTag t, const Vec6& w, double tol) {
    const double d1 = w[0] - w[2];  // u1 - v1
    const double d2 = w[1] - w[5];  // u2 - v4
    const bool ok1 = regime_picks_u1(t) ? (d1 <= tol) : (d1 >= -tol);
    const bool ok2 = regime_picks_u2(t) ? (d2 <= tol) : (d2 >= -tol);
    return ok1 && ok2;
}

inline EquilibriumPoint equilibrium_for_regime(RegimeTag tag, const Params& p,
                                               const ConservedQuantities& cq) {
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2, c3 = p.c3, c4 = p.c4;
    const double M0 = cq.M0, N0 = cq.N0, W1 = cq.W1, W2 = cq.W2;
    const double D1 = a1 * c2 * (a2 + c4) + a2 * c3 * (a1 + c1) + c2 * c3 * (a1 + a2);
    const double D2 = a1 * (a2 + c3 + c4) + a2 * c3;
    const double D3 = a2 * (a1 + c1 + c2) + a1 * c2;
    Vec6 w{};
    switch (tag) {
        case RegimeTag::Q1: {
            const double s = (a1 + a2);
            w[0] = M0 * a2 / s;
            w[1] = M0 * a1 / s;
            w[2] = (a2 * (c2 - a1) * M0 + c2 * s * W1) / (s * (c1 + c2));
            w[3] = (a2 * (a1 + c1) * M0 + c1 * s * W1) / (s * (c1 + c2));
            w[4] = (a2 * (a1 - c4) * M0 + c4 * s * (N0 - W1)) / (s * (c3 + c4));
            w[5] = (-a2 * (a1 + c3) * M0 + c3 * s * (N0 - W1)) / (s * (c3 + c4));
            break;
        }
        case RegimeTag::Q2: {
            const double s = M0 + W2;
            w[0] = a2 * c3 / D2 * s;
            w[1] = (1.0 - a2 * c3 / D2) * M0 - a2 * c3 / D2 * W2;
            w[2] = c2 / (c1 + c2) * N0 -
                   (a1 * c2 * (a2 + c3 + c4) + a1 * a2 * c3) / (D2 * (c1 + c2)) * s;
            w[3] = c1 / (c1 + c2) * N0 -
                   (a1 * c1 * (a2 + c3 + c4) - a1 * a2 * c3) / (D2 * (c1 + c2)) * s;
            w[4] = a1 * (a2 + c4) / D2 * s;
            w[5] = a1 * c3 / D2 * s;
            break;
        }
        case RegimeTag::Q3: {
            const double s = M0 + W1;
            w[0] = (1.0 - a1 * c2 / D3) * M0 - a1 * c2 / D3 * W1;
            w[1] = a1 * c2 / D3 * s;
            w[2] = a2 * c2 / D3 * s;
            w[3] = a2 * (a1 + c1) / D3 * s;
            w[4] = c4 / (c3 + c4) * N0 -
                   (a2 * c4 * (a1 + c1 + c2) - a1 * a2 * c2) / (D3 * (c3 + c4)) * s;
            w[5] = c3 / (c3 + c4) * N0 -
                   (a2 * c3 * (a1 + c1 + c2) + a1 * a2 * c2) / (D3 * (c3 + c4)) * s;
            break;
        }
        case RegimeTag::Q4: {
            w[0] = a2 * c3 * (a1 + c1 + c2) / D1 * N0 - W1;
            w[1] = M0 + W1 - a2 * c3 * (a1 + c1 + c2) / D1 * N0;
            w[2] = a2 * c2 * c3 / D1 * N0;
            w[3] = a2 * c3 * (a1 + c1) / D1 * N0;
            w[4] = a1 * c2 * (a2 + c4) / D1 * N0;
            w[5] = a1 * c2 * c3 / D1 * N0;
            break;
        }
    }
    const double scale = std::max({1.0, std::abs(cq.M0), std::abs(cq.N0)});
    for (double wi : w) {
        if (wi < -1e-12 * scale) {
            throw NegativeComponent(std::string("regime ") + to_string(tag) +
                                    " produced a negative equilibrium component");
        }
    }
    if (!satisfies_indicators(tag, w, 1e-9 * scale)) {
        throw IndicatorViolation(std::string("equilibrium violates the indicator constraints of ") +
                                 to_string(tag));
    }
    return {w, tag};
}

inline RegimeMatrix build_Q(RegimeTag tag, const Params& p) {
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2, c3 = p.c3, c4 = p.c4;
    RegimeMatrix Q;
    auto& m = Q.m;
    switch (tag) {
        case RegimeTag::Q1:
            m[0] = {-a1, a2, 0, 0, 0, 0};
            m[1] = {a1, -a2, 0, 0, 0, 0};
            m[2] = {-a1, 0, -c1, c2, 0, 0};
            m[3] = {0, a2, c1, -c2, 0, 0};
            m[4] = {a1, 0, 0, 0, -c3, c4};
            m[5] = {0, -a2, 0, 0, c3, -c4};
            break;
        case RegimeTag::Q2:
            m[0] = {-a1, 0, 0, 0, 0, a2};
            m[1] = {a1, 0, 0, 0, 0, -a2};
            m[2] = {-a1, 0, -c1, c2, 0, 0};
            m[3] = {0, 0, c1, -c2, 0, a2};
            m[4] = {a1, 0, 0, 0, -c3, c4};
            m[5] = {0, 0, 0, 0, c3, -(c4 + a2)};
            break;
        case RegimeTag::Q3:
            m[0] = {0, a2, -a1, 0, 0, 0};
            m[1] = {0, -a2, a1, 0, 0, 0};
            m[2] = {0, 0, -a1 - c1, c2, 0, 0};
            m[3] = {0, a2, c1, -c2, 0, 0};
            m[4] = {0, 0, a1, 0, -c3, c4};
            m[5] = {0, -a2, 0, 0, c3, -c4};
            break;
        case RegimeTag::Q4:
            m[0] = {0, 0, -a1, 0, 0, a2};
            m[1] = {0, 0, a1, 0, 0, -a2};
            m[2] = {0, 0, -a1 - c1, c2, 0, 0};
            m[3] = {0, 0, c1, -c2, 0, a2};
            m[4] = {0, 0, a1, 0, -c3, c4};
            m[5] = {0, 0, 0, 0, c3, -a2 - c4};
            break;
    }
    return Q;
}

/**
 * Max-norm over the ten scalar residuals of the equilibrium system: the six
 * indicator-selected reaction equations (evaluated directly through the min
 * terms, which equals the active Q matrix applied to the point) plus the four
 * linear conservation constraints.
 */
inline double residual_norm(const Vec6& w, const Params& p, const ConservedQuantities& cq) {
    const double m1 = p.a1 * std::min(w[0], w[2]);
    const double m2 = p.a2 * std::min(w[1], w[5]);
    const std::array<double, 10> res = {
        -m1 + m2,
        m1 - m2,
        -m1 - p.c1 * w[2] + p.c2 * w[3],
        -p.c2 * w[3] + p.c1 * w[2] + m2,
        -p.c3 * w[4] + p.c4 * w[5] + m1,
        -m2 - p.c4 * w[5] + p.c3 * w[4],
        w[0] + w[1] - cq.M0,
        w[2] + w[3] + w[4] + w[5] - cq.N0,
        w[2] + w[3] - w[0] - cq.W1,
        w[4] + w[5] - w[1] - cq.W2,
    };
    double nrm = 0.0;
    for (double r : res) nrm = std::max(nrm, std::abs(r));
    return nrm;
}

namespace detail {

/// Condition pair for each regime, in tie-break order Q1, Q2, Q3, Q4.
inline bool pair_holds(const ConditionReport& r, RegimeTag t) {
    switch (t) {
        case RegimeTag::Q1: return r.I[0].holds() && r.I[1].holds();
        case RegimeTag::Q2: return r.I[2].holds() && r.I[1].complement_holds();
        case RegimeTag::Q3: return r.I[3].holds() && r.I[0].complement_holds();
        default: return r.I[2].complement_holds() && r.I[3].complement_holds();
    }
}

/// Like pair_holds but counting near-boundary conditions as satisfiable
/// under either resolution of the tie.
inline bool pair_holds_fuzzy(const ConditionReport& r, RegimeTag t) {
    auto h = [&](int i) { return r.I[i].holds() || r.I[i].near_boundary(); };
    auto hc = [&](int i) { return r.I[i].complement_holds() || r.I[i].near_boundary(); };
    switch (t) {
        case RegimeTag::Q1: return h(0) && h(1);
        case RegimeTag::Q2: return h(2) && hc(1);
        case RegimeTag::Q3: return h(3) && hc(0);
        default: return hc(2) && hc(3);
    }
}

}  // namespace detail

/**
 * Select the regime whose condition pair holds. The partition shares
 * boundaries: when floating point places an input on one, every regime whose
 * pair holds under either tie resolution is tried in order Q1..Q4 and the
 * first whose closed-form point also satisfies its indicator constraints is
 * returned (the equilibria coincide on the boundary). Throws NoRegime when
 * nothing matches, which the coverage proposition rules out for valid data.
 */
inline RegimeTag classify_regime(const ConditionReport& report) {
    constexpr std::array<RegimeTag, 4> order = {RegimeTag::Q1, RegimeTag::Q2, RegimeTag::Q3,
                                                RegimeTag::Q4};
    for (RegimeTag t : order) {
        if (detail::pair_holds(report, t)) return t;
    }
    // Boundary ties: retry with near-boundary conditions allowed either way.
    for (RegimeTag t : order) {
        if (!detail::pair_holds_fuzzy(report, t)) continue;
        try {
            EquilibriumPoint cand = equilibrium_for_regime(t, report.params, report.cq);
            const double scale = std::max({1.0, std::abs(report.cq.M0), std::abs(report.cq.N0)});
            if (residual_norm(cand.w_star, report.params, report.cq) <= 1e-9 * scale) return t;
        } catch (const IndicatorViolation&) {
        } catch (const NegativeComponent&) {
        }
    }
    throw NoRegime("no condition pair holds; degenerate boundary input or invalid data");
}

/// condition_values -> classify_regime -> equilibrium_for_regime.
inline EquilibriumPoint solve_equilibrium(const Params& p, const ConservedQuantities& cq) {
    const ConditionReport report = condition_values(p, cq);
    const RegimeTag tag = classify_regime(report);
    return equilibrium_for_regime(tag, p, cq);
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_EQUILIBRIUM_HPP
