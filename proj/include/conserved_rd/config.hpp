#ifndef CONSERVED_RD_CONFIG_HPP
#define CONSERVED_RD_CONFIG_HPP

/// JSON configuration loading. Schema:
///   params:  {a1, a2, c1, c2, c3, c4}
///   grid:    {length, n_cells}
///   initial: per-field {constant, modes:[{k, amp}]} or {values:[...]}
///            keys u1, u2, v1, v2, v3, v4
///   boundary: "neumann" | "dirichlet"
///   dt: number or "auto"; t_max; steady_tol; output_dir
///   trace_stride, snapshot_times: optional output controls
///   sweep: optional {samples, seed, rate_bounds:[lo,hi] or per-rate,
///          init_max, iterate_check}

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conserved_rd/core.hpp"
#include "conserved_rd/errors.hpp"

namespace conserved_rd {

struct SweepSpec {
    // Log-uniform bounds per rate constant, order a1, a2, c1, c2, c3, c4.
    std::array<std::pair<double, double>, 6> rate_bounds;
    double init_max = 20.0;  // initial constants drawn uniform in (0, init_max]
    int samples = 1000;
    std::uint64_t seed = 0;
    bool iterate_check = false;

    void validate() const {
        for (const auto& [lo, hi] : rate_bounds) {
            if (!(lo > 0.0) || !(hi >= lo)) {
                throw ConfigError("sweep rate bounds must be positive with lo <= hi");
            }
        }
        if (samples < 1) throw ConfigError("sweep sample count must be >= 1");
        if (!(init_max > 0.0)) throw ConfigError("sweep init_max must be positive");
    }
};

namespace detail {

inline FieldSpec parse_field_spec(const nlohmann::json& j, const char* name) {
    FieldSpec fs;
    if (!j.is_object()) throw ConfigError(std::string("initial.") + name + " must be an object");
    if (j.contains("values")) {
        fs.values = j.at("values").get<std::vector<double>>();
        return fs;
    }
    fs.constant = j.value("constant", 0.0);
    if (j.contains("modes")) {
        for (const auto& m : j.at("modes")) {
            fs.modes.push_back({m.at("k").get<int>(), m.at("amp").get<double>()});
        }
    }
    return fs;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.contains("params") || !j.contains("grid") || !j.contains("initial")) {
        throw ConfigError("config requires params, grid, and initial sections");
    }
    const auto& jp = j.at("params");
    Params params(jp.at("a1").get<double>(), jp.at("a2").get<double>(),
                  jp.at("c1").get<double>(), jp.at("c2").get<double>(),
                  jp.at("c3").get<double>(), jp.at("c4").get<double>());
    const auto& jg = j.at("grid");
    Grid1D grid(jg.at("length").get<double>(), jg.at("n_cells").get<int>());

    InitialSpec initial;
    const auto& ji = j.at("initial");
    for (int fi = 0; fi < kNumFields; ++fi) {
        if (!ji.contains(kFieldNames[fi])) {
            throw ConfigError(std::string("initial section missing field ") + kFieldNames[fi]);
        }
        initial.fields[fi] = detail::parse_field_spec(ji.at(kFieldNames[fi]), kFieldNames[fi]);
    }

    RunConfig cfg{params, grid, initial};
    if (j.contains("boundary")) {
        const std::string b = j.at("boundary").get<std::string>();
        if (b == "neumann") {
            cfg.boundary = Boundary::Neumann;
        } else if (b == "dirichlet") {
            cfg.boundary = Boundary::Dirichlet;
        } else {
            throw ConfigError("boundary must be \"neumann\" or \"dirichlet\"");
        }
    }
    if (j.contains("dt")) {
        if (j.at("dt").is_string()) {
            if (j.at("dt").get<std::string>() != "auto") {
                throw ConfigError("dt must be a number or \"auto\"");
            }
            cfg.dt = 0.0;
        } else {
            cfg.dt = j.at("dt").get<double>();
            if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
        }
    }
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.steady_tol = j.value("steady_tol", cfg.steady_tol);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.trace_stride = j.value("trace_stride", cfg.trace_stride);
    if (j.contains("snapshot_times")) {
        cfg.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    }
    if (!(cfg.t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(cfg.steady_tol > 0.0)) throw ConfigError("steady_tol must be positive");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config ") + path + ": " + e.what());
    }
}

/// Sweep section; absent fields fall back to the given defaults.
inline SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    SweepSpec spec;
    for (auto& b : spec.rate_bounds) b = {0.1, 10.0};
    if (j.contains("sweep")) {
        const auto& js = j.at("sweep");
        try {
            if (js.contains("rate_bounds")) {
                const auto& rb = js.at("rate_bounds");
                if (rb.is_array() && rb.size() == 2 && rb[0].is_number()) {
                    for (auto& b : spec.rate_bounds) {
                        b = {rb[0].get<double>(), rb[1].get<double>()};
                    }
                } else {
                    for (int i = 0; i < 6; ++i) {
                        spec.rate_bounds[i] = {rb.at(i).at(0).get<double>(),
                                               rb.at(i).at(1).get<double>()};
                    }
                }
            }
            spec.init_max = js.value("init_max", spec.init_max);
            spec.samples = js.value("samples", spec.samples);
            spec.seed = js.value("seed", spec.seed);
            spec.iterate_check = js.value("iterate_check", spec.iterate_check);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad sweep section in ") + path + ": " + e.what());
        }
    }
    spec.validate();
    return spec;
}

}  // namespace conserved_rd

#endif  // CONSERVED_RD_CONFIG_HPP
