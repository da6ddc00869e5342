#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "conserved_rd/pde.hpp"
#include "conserved_rd/sweep.hpp"
#include "fixtures.hpp"

using namespace conserved_rd;
using Catch::Approx;

namespace {

// Dense matrix helpers for the frozen-linear oracle (test-only).
using Mat = std::vector<std::vector<double>>;

Mat identity(int n) {
    Mat I(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) I[i][i] = 1.0;
    return I;
}

Mat matmul(const Mat& A, const Mat& B) {
    const int n = static_cast<int>(A.size());
    Mat C(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double a = A[i][k];
            if (a == 0.0) continue;
            for (int j = 0; j < n; ++j) C[i][j] += a * B[k][j];
        }
    }
    return C;
}

std::vector<double> matvec(const Mat& A, const std::vector<double>& x) {
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    }
    return y;
}

// exp(A) by scaling and squaring with a Taylor series; adequate for the
// small, well-scaled operators used here.
Mat expm(Mat A) {
    const int n = static_cast<int>(A.size());
    double norm = 0.0;
    for (const auto& row : A) {
        double s = 0.0;
        for (double v : row) s += std::abs(v);
        norm = std::max(norm, s);
    }
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (auto& row : A) {
        for (double& v : row) v *= scale;
    }
    Mat E = identity(n);
    Mat term = identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, A);
        for (auto& row : term) {
            for (double& v : row) v /= k;
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) E[i][j] += term[i][j];
        }
    }
    for (int s = 0; s < squarings; ++s) E = matmul(E, E);
    return E;
}

// The frozen operator Lap + Q acting on the stacked 6n-vector (field-major).
Mat frozen_operator(const Grid1D& grid, const RegimeMatrix& Q) {
    const int n = grid.n_cells();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Mat A(6 * n, std::vector<double>(6 * n, 0.0));
    for (int fi = 0; fi < 6; ++fi) {
        for (int i = 0; i < n; ++i) {
            const int row = fi * n + i;
            if (i > 0) A[row][fi * n + i - 1] += inv_h2;
            if (i + 1 < n) A[row][fi * n + i + 1] += inv_h2;
            const bool interior = i > 0 && i + 1 < n;
            A[row][row] += interior ? -2.0 * inv_h2 : -1.0 * inv_h2;
            for (int fj = 0; fj < 6; ++fj) A[row][fj * n + i] += Q.m[fi][fj];
        }
    }
    return A;
}

std::vector<double> stack(const State& s) {
    std::vector<double> x;
    for (int fi = 0; fi < 6; ++fi) x.insert(x.end(), s.f[fi].begin(), s.f[fi].end());
    return x;
}

}  // namespace

TEST_CASE("laplacian of a constant field vanishes under Neumann") {
    Grid1D g(std::numbers::pi, 32);
    Field f(32, 7.25);
    Field lap = laplacian(f, g, Boundary::Neumann);
    for (double v : lap) CHECK(v == 0.0);
}

TEST_CASE("laplacian reproduces the cosine eigenvalue to O(h^2)") {
    Grid1D g(std::numbers::pi, 256);
    Field f(256);
    for (int i = 0; i < 256; ++i) f[i] = std::cos(2.0 * g.node(i));
    Field lap = laplacian(f, g, Boundary::Neumann);
    const double h = g.spacing();
    const double bound = 4.0 * (2.0 * h) * (2.0 * h) / 12.0;
    double err = 0.0;
    for (int i = 0; i < 256; ++i) err = std::max(err, std::abs(lap[i] + 4.0 * f[i]));
    CHECK(err < bound);
    CHECK(err > 0.1 * bound);  // the bound is tight, not vacuous
}

TEST_CASE("laplacian truncation error scales as h^2") {
    auto mode_error = [](int n) {
        Grid1D g(std::numbers::pi, n);
        Field f(n);
        for (int i = 0; i < n; ++i) f[i] = std::cos(2.0 * g.node(i));
        Field lap = laplacian(f, g, Boundary::Neumann);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(lap[i] + 4.0 * f[i]));
        return err;
    };
    CHECK(mode_error(64) / mode_error(128) == Approx(4.0).margin(0.2));
}

TEST_CASE("Neumann laplacian node sums telescope to zero") {
    Grid1D g(std::numbers::pi, 64);
    SplitMix64 rng(42);
    Field f(64);
    for (double& v : f) v = rng.uniform(0.0, 20.0);
    Field lap = laplacian(f, g, Boundary::Neumann);
    double sum = 0.0;
    for (double v : lap) sum += v;
    CHECK(std::abs(sum) < 1e-8);  // exact in real arithmetic; round-off here
}

TEST_CASE("reaction_rhs vanishes at the equilibrium constants") {
    const Vec6 w = fixtures::ref_equilibrium();
    State s;
    for (int fi = 0; fi < kNumFields; ++fi) s.f[fi] = Field(16, w[fi]);
    auto r = reaction_rhs(s, fixtures::ref_params());
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (double v : r[fi]) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("reaction_rhs is continuous across the min switch") {
    // With u1 = v1 and u2 = v4 both branch formulas coincide.
    const Params p = fixtures::ref_params();
    State s;
    s.f = {Field(4, 2.0), Field(4, 3.0), Field(4, 2.0),
           Field(4, 1.0), Field(4, 5.0), Field(4, 3.0)};
    auto r = reaction_rhs(s, p);
    const double m1 = p.a1 * 2.0, m2 = p.a2 * 3.0;
    CHECK(r[0][0] == Approx(-m1 + m2));
    CHECK(r[2][0] == Approx(-m1 - p.c1 * 2.0 + p.c2 * 1.0));
    CHECK(r[5][0] == Approx(-m2 - p.c4 * 3.0 + p.c3 * 5.0));
}

TEST_CASE("reaction_rhs components sum to zero at every node") {
    SplitMix64 rng(7);
    State s;
    for (int fi = 0; fi < kNumFields; ++fi) {
        s.f[fi].resize(32);
        for (double& v : s.f[fi]) v = rng.uniform(0.0, 30.0);
    }
    auto r = reaction_rhs(s, fixtures::ref_params());
    for (int i = 0; i < 32; ++i) {
        double sum = 0.0;
        for (int fi = 0; fi < kNumFields; ++fi) sum += r[fi][i];
        CHECK(std::abs(sum) < 1e-14 * 300.0);
    }
}

TEST_CASE("step keeps the equilibrium fixed") {
    Grid1D g(std::numbers::pi, 32);
    const Vec6 w = fixtures::ref_equilibrium();
    State s;
    for (int fi = 0; fi < kNumFields; ++fi) s.f[fi] = Field(32, w[fi]);
    StepperConfig sc{StepperConfig::stable_dt(g, fixtures::ref_params()), 0.9};
    State out = step(s, fixtures::ref_params(), sc, g, Boundary::Neumann);
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (int i = 0; i < 32; ++i) {
            CHECK(out.f[fi][i] == Approx(w[fi]).margin(1e-12));
        }
    }
    CHECK(out.time == Approx(sc.dt));
}

TEST_CASE("step conserves the node sums under Neumann") {
    Grid1D g(std::numbers::pi, 64);
    State s = evaluate_initial(fixtures::ref_initial(), g);
    StepperConfig sc{StepperConfig::stable_dt(g, fixtures::ref_params()), 0.9};
    auto sums = [](const State& st) {
        std::array<double, 4> out{};
        for (std::size_t i = 0; i < st.u1().size(); ++i) {
            out[0] += st.u1()[i] + st.u2()[i];
            out[1] += st.v1()[i] + st.v2()[i] + st.v3()[i] + st.v4()[i];
            out[2] += st.v1()[i] + st.v2()[i] - st.u1()[i];
            out[3] += st.v3()[i] + st.v4()[i] - st.u2()[i];
        }
        return out;
    };
    const auto before = sums(s);
    State s2 = s;
    for (int k = 0; k < 50; ++k) s2 = step(s2, fixtures::ref_params(), sc, g, Boundary::Neumann);
    const auto after = sums(s2);
    for (int q = 0; q < 4; ++q) {
        CHECK(std::abs(after[q] - before[q]) < 1e-10 * std::abs(before[q]));
    }
}

TEST_CASE("step rejects an unstable dt and non-finite output") {
    Grid1D g(std::numbers::pi, 64);
    State s = evaluate_initial(fixtures::ref_initial(), g);
    StepperConfig bad{10.0 * StepperConfig::stable_dt(g, fixtures::ref_params()), 0.9};
    CHECK_THROWS_AS(step(s, fixtures::ref_params(), bad, g, Boundary::Neumann),
                    StabilityViolation);

    StepperConfig ok{StepperConfig::stable_dt(g, fixtures::ref_params()), 0.9};
    State huge = s;
    for (double& v : huge.u1()) v = 1e308;
    CHECK_THROWS_AS(step(huge, fixtures::ref_params(), ok, g, Boundary::Neumann), NaNDetected);
}

TEST_CASE("one step matches the matrix exponential of the locked system") {
    // Small perturbation of the equilibrium keeps both mins on the Q4 branch,
    // so the dynamics are the frozen linear operator A = Lap + Q4.
    const Params p = fixtures::ref_params();
    Grid1D g(std::numbers::pi, 8);
    const Vec6 w = fixtures::ref_equilibrium();
    State s;
    for (int fi = 0; fi < kNumFields; ++fi) s.f[fi] = Field(8, w[fi]);
    for (int i = 0; i < 8; ++i) s.v1()[i] += 1e-3 * std::cos(2.0 * g.node(i));

    StepperConfig sc{StepperConfig::stable_dt(g, p), 0.9};
    State stepped = step(s, p, sc, g, Boundary::Neumann);

    const Mat A = frozen_operator(g, build_Q(RegimeTag::Q4, p));
    const std::vector<double> x0 = stack(s);

    // Euler consistency: the step equals (I + dt A) x0 for the locked system.
    const std::vector<double> ax = matvec(A, x0);
    const std::vector<double> x1 = stack(stepped);
    for (int k = 0; k < 48; ++k) {
        CHECK(x1[k] == Approx(x0[k] + sc.dt * ax[k]).margin(1e-10));
    }

    // Against exp(dt A): the one-step error is O(dt^2 * |A^2 x|).
    Mat dtA = A;
    for (auto& row : dtA) {
        for (double& v : row) v *= sc.dt;
    }
    const std::vector<double> xe = matvec(expm(dtA), x0);
    const std::vector<double> a2x = matvec(A, ax);
    double err = 0.0, bound = 0.0;
    for (int k = 0; k < 48; ++k) {
        err = std::max(err, std::abs(x1[k] - xe[k]));
        bound = std::max(bound, std::abs(a2x[k]));
    }
    CHECK(err <= sc.dt * sc.dt * bound);
}

TEST_CASE("run_to_steady on the reference configuration") {
    RunConfig cfg = fixtures::ref_config(128);
    SimResult sim = run_to_steady(cfg);
    CHECK(sim.steady);
    CHECK(sim.steady_time < cfg.t_max);
    CHECK(sup_dist(sim.final, sim.equilibrium.w_star) < 1e-3);
    // Exact discrete conservation along the whole trace.
    const ConservationDrift drift = conservation_drift(sim.trace);
    CHECK(drift.max() < 1e-12);
    // Positivity and boundedness along the trace.
    for (const TraceRow& r : sim.trace) {
        CHECK(r.min_field_value >= 0.0);
        CHECK(r.max_u <= 2.0 * 20.0);
        CHECK(r.max_v <= 2.0 * 29.0);
    }
}

TEST_CASE("run_to_steady detects an equilibrium start immediately") {
    RunConfig cfg = fixtures::ref_config(32);
    const Vec6 w = fixtures::ref_equilibrium();
    for (int fi = 0; fi < kNumFields; ++fi) cfg.initial.fields[fi] = {w[fi], {}, {}};
    SimResult sim = run_to_steady(cfg);
    CHECK(sim.steady);
    CHECK(sim.steady_time == 0.0);
    CHECK(sim.final.time == 0.0);
}

TEST_CASE("run_to_steady honors an explicit dt") {
    RunConfig cfg = fixtures::ref_config(32);
    cfg.t_max = 0.2;
    cfg.steady_tol = 1e-14;
    cfg.dt = 0.5 * StepperConfig::stable_dt(cfg.grid, cfg.params);
    SimResult sim = run_to_steady(cfg);
    CHECK(sim.final.time >= 0.2);

    cfg.dt = 2.0 * StepperConfig::stable_dt(cfg.grid, cfg.params);
    CHECK_THROWS_AS(run_to_steady(cfg), StabilityViolation);
}

TEST_CASE("Dirichlet run decays toward zero") {
    RunConfig cfg = fixtures::ref_config(64);
    cfg.boundary = Boundary::Dirichlet;
    cfg.t_max = 8.0;
    cfg.steady_tol = 1e-14;  // keep integrating to t_max
    SimResult sim = run_to_steady(cfg);
    CHECK_FALSE(sim.steady);
    CHECK(sup_dist(sim.final, Vec6{}) < 0.05);
    // Total mass decays at about the first Dirichlet rate of (0, pi).
    std::vector<std::pair<double, double>> mass;
    for (const TraceRow& r : sim.trace) mass.push_back({r.t, r.mass_u + r.mass_v});
    const DecayFit fit = decay_rate_fit(mass);
    CHECK(fit.rate == Approx(1.0).margin(0.1));
    for (const TraceRow& r : sim.trace) CHECK(r.min_field_value >= 0.0);
}

TEST_CASE("halving h reduces the modal decay error about fourfold") {
    // The combo v1+v2-u1 rides the k = 2 heat mode; after time T its
    // amplitude error against 3 exp(-4 t) is O(h^2) once dt tracks h^2.
    auto amplitude_error = [](int n) {
        RunConfig cfg = fixtures::ref_config(n);
        StepperConfig sc{StepperConfig::stable_dt(cfg.grid, cfg.params), 0.9};
        State s = evaluate_initial(cfg.initial, cfg.grid);
        const long steps = std::lround(0.5 / sc.dt);
        for (long k = 0; k < steps; ++k) {
            s = step(s, cfg.params, sc, cfg.grid, Boundary::Neumann);
        }
        double amp = 0.0;
        for (std::size_t i = 0; i < s.u1().size(); ++i) {
            amp = std::max(amp, std::abs(s.v1()[i] + s.v2()[i] - s.u1()[i] - 4.0));
        }
        return std::abs(amp - 3.0 * std::exp(-4.0 * (steps * sc.dt)));
    };
    const double ratio = amplitude_error(32) / amplitude_error(64);
    CHECK(ratio == Approx(4.0).margin(0.7));
}

TEST_CASE("shifted initial data translates the whole solution") {
    const Params p = fixtures::ref_params();
    const double delta = 0.7;
    RunConfig base = fixtures::ref_config(32);
    base.t_max = 0.5;
    base.steady_tol = 1e-14;
    RunConfig shifted = base;
    shifted.initial = shift_initial(base.initial, p, delta);

    SimResult a = run_to_steady(base);
    SimResult b = run_to_steady(shifted);
    const Vec6 dir = shift_direction(p);
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (std::size_t i = 0; i < a.final.f[fi].size(); ++i) {
            CHECK(b.final.f[fi][i] - a.final.f[fi][i] ==
                  Approx(delta * dir[fi]).margin(1e-10));
        }
    }
}
