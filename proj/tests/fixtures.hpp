#ifndef CONSERVED_RD_TESTS_FIXTURES_HPP
#define CONSERVED_RD_TESTS_FIXTURES_HPP

// Shared fixtures: the reference experiment with rates (1,2,3,4,5,6) on
// [0, pi] and its known conserved quantities (20, 29, 4, 5) and Q4
// equilibrium, plus an all-ones Q1 configuration.

#include <numbers>

#include "conserved_rd/core.hpp"
#include "conserved_rd/equilibrium.hpp"

namespace fixtures {

using namespace conserved_rd;

inline Params ref_params() { return Params(1, 2, 3, 4, 5, 6); }

inline Grid1D ref_grid(int n = 128) { return Grid1D(std::numbers::pi, n); }

inline InitialSpec ref_initial() {
    InitialSpec spec;
    spec.fields[0] = {10.0, {{2, -3.0}}, {}};
    spec.fields[1] = {10.0, {{2, 3.0}}, {}};
    spec.fields[2] = {6.0, {{2, 2.0}}, {}};
    spec.fields[3] = {8.0, {{2, -2.0}}, {}};
    spec.fields[4] = {10.0, {{2, 2.0}}, {}};
    spec.fields[5] = {5.0, {{2, -2.0}}, {}};
    return spec;
}

inline ConservedQuantities ref_cq() { return {20.0, 29.0, 4.0, 5.0}; }

// Q4 closed-form point for the reference inputs, exact rationals over 132.
inline Vec6 ref_equilibrium() {
    return {2320.0 / 132.0 - 4.0, 24.0 - 2320.0 / 132.0, 1160.0 / 132.0,
            1160.0 / 132.0, 928.0 / 132.0, 580.0 / 132.0};
}

inline RunConfig ref_config(int n = 128) {
    RunConfig cfg{ref_params(), ref_grid(n), ref_initial()};
    cfg.boundary = Boundary::Neumann;
    cfg.dt = 0.0;  // auto
    cfg.t_max = 20.0;
    cfg.steady_tol = 1e-6;
    cfg.trace_stride = 50;
    return cfg;
}

// All-ones rates with M0 = 1, W1 = W2 = 2: regime Q1 with equilibrium
// (0.5, 0.5, 1, 1.5, 1.5, 1).
inline Params q1_params() { return Params(1, 1, 1, 1, 1, 1); }

inline ConservedQuantities q1_cq() { return {1.0, 5.0, 2.0, 2.0}; }

inline InitialSpec q1_initial() {
    InitialSpec spec;
    spec.fields[0] = {0.5, {{2, -0.2}}, {}};
    spec.fields[1] = {0.5, {{2, 0.2}}, {}};
    spec.fields[2] = {1.0, {{2, 0.3}}, {}};
    spec.fields[3] = {1.5, {{2, -0.3}}, {}};
    spec.fields[4] = {1.5, {{2, 0.3}}, {}};
    spec.fields[5] = {1.0, {{2, -0.3}}, {}};
    return spec;
}

inline Vec6 q1_equilibrium() { return {0.5, 0.5, 1.0, 1.5, 1.5, 1.0}; }

}  // namespace fixtures

#endif  // CONSERVED_RD_TESTS_FIXTURES_HPP
