#ifndef CONSERVED_RD_SWEEP_HPP
#define CONSERVED_RD_SWEEP_HPP

/// Randomized parameter sweeps over the equilibrium solver. Sampling uses a
/// splitmix64 stream seeded per sample index, so results are identical across
/// platforms and thread counts; reduction is by sample index, not completion
/// order.

#include <atomic>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "conserved_rd/config.hpp"
#include "conserved_rd/equilibrium.hpp"
#include "conserved_rd/monotone.hpp"

namespace conserved_rd {

/// Deterministic 64-bit generator (splitmix64); identical streams everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

private:
    std::uint64_t state_;
};

struct SweepSample {
    Params params;
    ConservedQuantities cq;
    RegimeTag regime = RegimeTag::Q4;
    double residual = 0.0;
    bool no_regime = false;
    bool iterate_ok = true;
};

struct SweepSummary {
    int samples = 0;
    std::uint64_t seed = 0;
    std::array<int, 4> regime_counts{};  // Q1..Q4
    int no_regime_count = 0;
    double max_residual = 0.0;
    int iterate_failures = 0;

    std::string to_text() const {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "samples " << samples << "\n";
        os << "seed " << seed << "\n";
        os << "regime_Q1 " << regime_counts[0] << "\n";
        os << "regime_Q2 " << regime_counts[1] << "\n";
        os << "regime_Q3 " << regime_counts[2] << "\n";
        os << "regime_Q4 " << regime_counts[3] << "\n";
        os << "no_regime " << no_regime_count << "\n";
        os << "max_residual " << max_residual << "\n";
        os << "iterate_failures " << iterate_failures << "\n";
        return os.str();
    }
};

namespace detail {

inline SweepSample draw_and_solve(const SweepSpec& spec, std::uint64_t index) {
    // Per-sample stream: mixing the index through splitmix keeps samples
    // independent of evaluation order.
    SplitMix64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    std::array<double, 6> rates;
    for (int i = 0; i < 6; ++i) {
        rates[i] = rng.log_uniform(spec.rate_bounds[i].first, spec.rate_bounds[i].second);
    }
    // Initial constants phi1, phi2, psi1..psi4, uniform in (0, init_max].
    std::array<double, 6> init;
    for (double& v : init) v = spec.init_max * (1.0 - rng.uniform01());
    Params p(rates[0], rates[1], rates[2], rates[3], rates[4], rates[5]);
    ConservedQuantities cq{init[0] + init[1], init[2] + init[3] + init[4] + init[5],
                           init[2] + init[3] - init[0], init[4] + init[5] - init[1]};
    SweepSample s{p, cq};
    try {
        const EquilibriumPoint eq = solve_equilibrium(p, cq);
        s.regime = eq.regime;
        s.residual = residual_norm(eq.w_star, p, cq);
        if (spec.iterate_check) {
            State state0;
            state0.time = 0.0;
            for (int fi = 0; fi < kNumFields; ++fi) state0.f[fi] = Field(4, init[fi]);
            try {
                const IterationResult it = iterate_to_fixed_point(p, cq, eq, state0, 1e-8, 1000);
                double err = 0.0;
                for (int i = 0; i < kNumFields; ++i) {
                    err = std::max(err, std::abs(it.final.lower[i] - eq.w_star[i]));
                    err = std::max(err, std::abs(it.final.upper[i] - eq.w_star[i]));
                }
                s.iterate_ok = it.converged && err < 1e-6 * std::max(1.0, cq.N0);
            } catch (const ZeroEquilibriumComponent&) {
                // Equilibria with a vanishing component are excluded from the
                // cross-check rather than counted as failures.
            }
        }
    } catch (const NoRegime&) {
        s.no_regime = true;
    }
    return s;
}

}  // namespace detail

/// Runs the sweep; `samples_out`, when given, receives the per-index results.
inline SweepSummary run_sweep(const SweepSpec& spec,
                              std::vector<SweepSample>* samples_out = nullptr) {
    spec.validate();
    std::vector<SweepSample> samples;
    samples.reserve(spec.samples);
    for (int i = 0; i < spec.samples; ++i) {
        samples.push_back(SweepSample{Params(1, 1, 1, 1, 1, 1), ConservedQuantities{}});
    }

    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers = std::max(1u, std::min(hw, 8u));
    std::atomic<int> cursor{0};
    auto work = [&]() {
        for (int i = cursor.fetch_add(1); i < spec.samples; i = cursor.fetch_add(1)) {
            samples[i] = detail::draw_and_solve(spec, static_cast<std::uint64_t>(i));
        }
    };
    if (workers == 1 || spec.samples < 64) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    SweepSummary sum;
    sum.samples = spec.samples;
    sum.seed = spec.seed;
    for (const SweepSample& s : samples) {
        if (s.no_regime) {
            ++sum.no_regime_count;
            continue;
        }
        ++sum.regime_counts[static_cast<int>(s.regime)];
        sum.max_residual = std::max(sum.max_residual, s.residual);
        if (!s.iterate_ok) ++sum.iterate_failures;
    }
    if (samples_out) *samples_out = std::move(samples);
    return sum;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_SWEEP_HPP
