#ifndef CONSERVED_RD_CORE_HPP
#define CONSERVED_RD_CORE_HPP

/**
 * @file core.hpp
 * @brief Domain grid, field storage, parameters, initial-condition model,
 *        and the delta-shift utility.
 *
 * The model is a six-component reaction-diffusion system on a 1-D interval:
 * two "u" populations exchanging through min-rate reactions with four "v"
 * populations. All core types are immutable values after construction and
 * safe to share read-only across threads.
 */

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "conserved_rd/errors.hpp"

namespace conserved_rd {

/// Number of coupled fields: u1, u2, v1, v2, v3, v4 (in that order).
inline constexpr int kNumFields = 6;

inline constexpr std::array<const char*, kNumFields> kFieldNames = {
    "u1", "u2", "v1", "v2", "v3", "v4"};

using Vec6 = std::array<double, kNumFields>;

/// The six positive rate constants of the reaction terms (1/time).
struct Params {
    double a1, a2, c1, c2, c3, c4;

    Params(double a1_, double a2_, double c1_, double c2_, double c3_, double c4_)
        : a1(a1_), a2(a2_), c1(c1_), c2(c2_), c3(c3_), c4(c4_) {
        for (double r : {a1, a2, c1, c2, c3, c4}) {
            if (!(r > 0.0) || !std::isfinite(r)) {
                throw ConfigError("Params: all six rate constants must be positive and finite");
            }
        }
    }

    /// Global Lipschitz bound on the reaction right-hand sides.
    double reaction_lipschitz() const { return a1 + a2 + c1 + c2 + c3 + c4; }
};

/**
 * Uniform cell-centered grid on [0, length].
 *
 * Nodes sit at cell centers x_i = (i + 1/2) h with h = length / n_cells, so
 * the midpoint quadrature weight per node is h and the mirrored-ghost Neumann
 * Laplacian has exactly zero row sums (discrete conservation is exact).
 */
class Grid1D {
public:
    Grid1D(double length, int n_cells) : length_(length), n_(n_cells) {
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw ConfigError("Grid1D: length must be positive and finite");
        }
        if (n_cells < 4) {
            throw ConfigError("Grid1D: n_cells must be at least 4");
        }
        h_ = length_ / n_;
    }

    double length() const { return length_; }
    int n_cells() const { return n_; }
    double spacing() const { return h_; }
    double node(int i) const { return (i + 0.5) * h_; }

    /// Integral mean over [0, length] by the midpoint rule.
    double mean(const std::vector<double>& values) const {
        double s = 0.0;
        for (double v : values) s += v;
        return s / n_;
    }

private:
    double length_;
    int n_;
    double h_;
};

/// Node samples of one population density (entities/length).
using Field = std::vector<double>;

/// The solution 6-tuple at one instant; all fields share one grid.
struct State {
    std::array<Field, kNumFields> f;
    double time = 0.0;

    Field& u1() { return f[0]; }
    Field& u2() { return f[1]; }
    Field& v1() { return f[2]; }
    Field& v2() { return f[3]; }
    Field& v3() { return f[4]; }
    Field& v4() { return f[5]; }
    const Field& u1() const { return f[0]; }
    const Field& u2() const { return f[1]; }
    const Field& v1() const { return f[2]; }
    const Field& v2() const { return f[3]; }
    const Field& v3() const { return f[4]; }
    const Field& v4() const { return f[5]; }
};

/// One Neumann cosine mode cos(k pi x / length) with amplitude amp.
struct CosineMode {
    int k = 0;
    double amp = 0.0;
};

/// Per-field initial data: either constant + cosine modes, or tabulated node values.
struct FieldSpec {
    double constant = 0.0;
    std::vector<CosineMode> modes;
    std::optional<std::vector<double>> values;  // escape hatch; overrides constant/modes
};

/// Initial distributions phi_1, phi_2, psi_1..psi_4, one FieldSpec per field.
struct InitialSpec {
    std::array<FieldSpec, kNumFields> fields;
};

enum class Boundary { Neumann, Dirichlet };

inline const char* to_string(Boundary b) {
    return b == Boundary::Neumann ? "neumann" : "dirichlet";
}

/// Full run description; loaded from JSON by config.hpp.
struct RunConfig {
    RunConfig(Params p, Grid1D g, InitialSpec init)
        : params(p), grid(g), initial(std::move(init)) {}

    Params params;
    Grid1D grid;
    InitialSpec initial;
    Boundary boundary = Boundary::Neumann;
    double dt = 0.0;          // <= 0 means "auto"
    double t_max = 20.0;
    double steady_tol = 1e-6;
    std::string output_dir = "./out";
    int trace_stride = 50;                  // steps between trace rows
    std::vector<double> snapshot_times;     // simulation times to dump snapshots
};

/**
 * Sample an InitialSpec on a grid, producing the time-0 State.
 *
 * Throws ModeOutOfRange for a cosine wavenumber k >= n_cells/2 (unresolvable
 * on the grid) and NonPositiveInitial if any sampled node value is <= 0;
 * positivity is validated at nodes only.
 */
inline State evaluate_initial(const InitialSpec& spec, const Grid1D& grid) {
    const int n = grid.n_cells();
    State s;
    s.time = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        const FieldSpec& fs = spec.fields[fi];
        Field& out = s.f[fi];
        if (fs.values) {
            if (static_cast<int>(fs.values->size()) != n) {
                throw ConfigError(std::string("initial values for ") + kFieldNames[fi] +
                                  " do not match grid size");
            }
            out = *fs.values;
        } else {
            for (const CosineMode& m : fs.modes) {
                if (m.k < 0) throw ModeOutOfRange("cosine wavenumber must be non-negative");
                if (m.k >= n / 2) {
                    throw ModeOutOfRange(std::string("mode k=") + std::to_string(m.k) +
                                         " unresolvable on grid with n_cells=" + std::to_string(n));
                }
            }
            out.resize(n);
            const double w = std::numbers::pi / grid.length();
            for (int i = 0; i < n; ++i) {
                double x = grid.node(i);
                double v = fs.constant;
                for (const CosineMode& m : fs.modes) v += m.amp * std::cos(m.k * w * x);
                out[i] = v;
            }
        }
        for (double v : out) {
            if (!std::isfinite(v)) {
                throw NonPositiveInitial(std::string("non-finite initial value in ") +
                                         kFieldNames[fi]);
            }
            if (v <= 0.0) {
                throw NonPositiveInitial(std::string("initial field ") + kFieldNames[fi] +
                                         " must be strictly positive at every node");
            }
        }
    }
    return s;
}

/**
 * The translation direction of the delta-shift symmetry: adding
 * delta * shift_direction(params) to the six initial fields shifts the whole
 * solution by the same constant vector for all time (each min argument moves
 * by equal amounts on both sides, so the reaction terms are unchanged).
 */
inline Vec6 shift_direction(const Params& p) {
    return {1.0 / p.a1,
            1.0 / p.a2,
            1.0 / p.a1,
            (1.0 + p.c1 / p.a1) / p.c2,
            (1.0 + p.c4 / p.a2) / p.c3,
            1.0 / p.a2};
}

/**
 * Shift an InitialSpec along the translation symmetry by delta.
 *
 * For tabulated fields every node value moves; for constant+modes fields only
 * the constant part moves. A negative delta that makes a constant part or a
 * tabulated value non-positive raises NonPositiveInitial (node-level
 * positivity of mode sums is re-checked by evaluate_initial).
 */
inline InitialSpec shift_initial(const InitialSpec& spec, const Params& params, double delta) {
    if (!std::isfinite(delta)) throw ConfigError("shift_initial: delta must be finite");
    const Vec6 dir = shift_direction(params);
    InitialSpec out = spec;
    for (int fi = 0; fi < kNumFields; ++fi) {
        const double d = delta * dir[fi];
        FieldSpec& fs = out.fields[fi];
        if (fs.values) {
            for (double& v : *fs.values) {
                v += d;
                if (v <= 0.0) {
                    throw NonPositiveInitial(std::string("shift makes ") + kFieldNames[fi] +
                                             " non-positive");
                }
            }
        } else {
            fs.constant += d;
            if (fs.constant <= 0.0) {
                throw NonPositiveInitial(std::string("shift makes the constant part of ") +
                                         kFieldNames[fi] + " non-positive");
            }
        }
    }
    return out;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_CORE_HPP
