#pragma once

// JSON experiment configuration. Every object is checked against its known
// keys; an unrecognized key is a configuration error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wscs_rdf/backward_channel_mc.hpp"
#include "wscs_rdf/cli/parse_eps.hpp"
#include "wscs_rdf/error.hpp"
#include "wscs_rdf/rdf_sequence.hpp"
#include "wscs_rdf/variance_model.hpp"

namespace wscs_rdf::cli {

using json = nlohmann::json;

struct ProfileConfig {
    std::string shape = "pulse";
    double base = 0.2;
    double amplitude = 4.8;
    double t_dc = 0.75;
    double t_rf = 0.01;
    double mean = 2.0;
    double period = 5e-6;
    double phi = 0.0;

    CtVarianceProfile build() const {
        if (shape == "pulse") {
            return CtVarianceProfile::pulse(base, amplitude, PulseParams{t_dc, t_rf}, period, phi);
        }
        if (shape == "sine") {
            return CtVarianceProfile::sine(mean, amplitude, period, phi);
        }
        throw ConfigError("unknown profile shape '" + shape + "' (expected pulse or sine)");
    }
};

struct GridSpec {
    std::vector<double> values;

    // Values start + i*step up to stop inclusive, rounded to 1e-9 so that
    // decimal grids such as 2.26 come out as the nearest double.
    static GridSpec range(double start, double stop, double step) {
        if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
            throw ConfigError("grid needs finite start <= stop and a positive step");
        }
        GridSpec g;
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 1'000'000) {
            throw ConfigError("grid has too many points");
        }
        for (std::size_t i = 0; i < count; ++i) {
            g.values.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
        }
        return g;
    }
};

struct McSettings {
    std::size_t k = 10'000;
    std::size_t trials = 50;
    std::vector<double> variances; // empty: derive one period from profile + sampling
    std::vector<std::size_t> plimsup_k_list;
    std::size_t plimsup_trials = 100;
    double delta = kDefaultPlimsupDelta;
    std::vector<std::size_t> ui_k_list;
    std::size_t ui_trials = 200;
};

struct OutputConfig {
    std::string csv;
    std::string json;
    std::string svg;
};

struct ExperimentConfig {
    ProfileConfig profile;
    std::int64_t p = 2;
    std::string eps = "1/2";
    double offset_abs = 0.0;
    double D = 0.18;
    std::optional<GridSpec> D_grid;
    std::string kind; // empty when not given
    std::int64_t n_max = 500;
    TailWindow tail_window = {};
    std::optional<std::int64_t> denominator_cap;
    GridSpec ratio_grid = GridSpec::range(2.01, 3.99, 0.01);
    std::vector<std::string> eps_list = {"1/2", "5*pi/32", "0.6"};
    McSettings mc;
    std::uint64_t seed = 1;
    OutputConfig output;

    SamplingSpec sampling() const { return SamplingSpec{p, parse_eps(eps), offset_abs}; }

    std::vector<double> distortion_grid() const {
        return D_grid ? D_grid->values : GridSpec::range(0.05, 0.19, 0.01).values;
    }
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError("'" + where + "' must be a JSON object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) {
            throw ConfigError("unknown field '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            throw ConfigError("'" + std::string(key) + "' in " + where + " must be finite");
        }
    }
}

inline GridSpec read_grid(const json& node, const std::string& where) {
    if (node.is_array()) {
        GridSpec g;
        for (const auto& v : node) {
            if (!v.is_number()) {
                throw ConfigError(where + " entries must be numbers");
            }
            g.values.push_back(v.get<double>());
        }
        if (g.values.empty()) {
            throw ConfigError(where + " must not be empty");
        }
        return g;
    }
    check_keys(node, where, {"start", "stop", "step", "grid"});
    if (node.contains("grid")) {
        return read_grid(node.at("grid"), where + ".grid");
    }
    double start = 0.0, stop = 0.0, step = 0.0;
    read(node, "start", start, where);
    read(node, "stop", stop, where);
    read(node, "step", step, where);
    return GridSpec::range(start, stop, step);
}

} // namespace detail

inline ExperimentConfig parse_config(const json& root) {
    using detail::check_keys;
    using detail::read;
    ExperimentConfig cfg;
    check_keys(root, "config", {"profile", "sampling", "distortion", "sweep", "seed", "output"});

    if (root.contains("profile")) {
        const json& pr = root.at("profile");
        check_keys(pr, "profile", {"shape", "base", "amplitude", "t_dc", "t_rf", "mean", "period", "phi"});
        read(pr, "shape", cfg.profile.shape, "profile");
        if (cfg.profile.shape == "sine") {
            cfg.profile.amplitude = 0.5;
            cfg.profile.period = 1.0;
        }
        read(pr, "base", cfg.profile.base, "profile");
        read(pr, "amplitude", cfg.profile.amplitude, "profile");
        read(pr, "t_dc", cfg.profile.t_dc, "profile");
        read(pr, "t_rf", cfg.profile.t_rf, "profile");
        read(pr, "mean", cfg.profile.mean, "profile");
        read(pr, "period", cfg.profile.period, "profile");
        read(pr, "phi", cfg.profile.phi, "profile");
    }
    if (root.contains("sampling")) {
        const json& s = root.at("sampling");
        check_keys(s, "sampling", {"p", "eps", "offset_abs"});
        read(s, "p", cfg.p, "sampling");
        read(s, "eps", cfg.eps, "sampling");
        read(s, "offset_abs", cfg.offset_abs, "sampling");
    }
    if (root.contains("distortion")) {
        const json& d = root.at("distortion");
        if (d.is_number()) {
            cfg.D = d.get<double>();
        } else {
            check_keys(d, "distortion", {"D", "grid", "start", "stop", "step"});
            read(d, "D", cfg.D, "distortion");
            if (d.contains("grid")) {
                cfg.D_grid = detail::read_grid(d.at("grid"), "distortion.grid");
            } else if (d.contains("start") || d.contains("stop") || d.contains("step")) {
                json range = d;
                range.erase("D");
                cfg.D_grid = detail::read_grid(range, "distortion");
            }
        }
    }
    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        check_keys(sw, "sweep", {"kind", "n_max", "tail_window", "denominator_cap", "ratio_grid", "eps_list", "mc"});
        read(sw, "kind", cfg.kind, "sweep");
        read(sw, "n_max", cfg.n_max, "sweep");
        if (sw.contains("tail_window")) {
            const json& tw = sw.at("tail_window");
            if (!tw.is_array() || tw.size() != 2 || !tw[0].is_number_integer() || !tw[1].is_number_integer()) {
                throw ConfigError("sweep.tail_window must be [lo, hi]");
            }
            cfg.tail_window = {tw[0].get<std::int64_t>(), tw[1].get<std::int64_t>()};
        }
        if (sw.contains("denominator_cap")) {
            std::int64_t cap = 0;
            read(sw, "denominator_cap", cap, "sweep");
            cfg.denominator_cap = cap;
        }
        if (sw.contains("ratio_grid")) {
            cfg.ratio_grid = detail::read_grid(sw.at("ratio_grid"), "sweep.ratio_grid");
        }
        read(sw, "eps_list", cfg.eps_list, "sweep");
        if (sw.contains("mc")) {
            const json& mc = sw.at("mc");
            check_keys(mc, "sweep.mc",
                       {"k", "trials", "variances", "plimsup_k_list", "plimsup_trials", "delta", "ui_k_list",
                        "ui_trials"});
            read(mc, "k", cfg.mc.k, "sweep.mc");
            read(mc, "trials", cfg.mc.trials, "sweep.mc");
            read(mc, "variances", cfg.mc.variances, "sweep.mc");
            read(mc, "plimsup_k_list", cfg.mc.plimsup_k_list, "sweep.mc");
            read(mc, "plimsup_trials", cfg.mc.plimsup_trials, "sweep.mc");
            read(mc, "delta", cfg.mc.delta, "sweep.mc");
            read(mc, "ui_k_list", cfg.mc.ui_k_list, "sweep.mc");
            read(mc, "ui_trials", cfg.mc.ui_trials, "sweep.mc");
        }
    }
    read(root, "seed", cfg.seed, "config");
    if (root.contains("output")) {
        const json& o = root.at("output");
        check_keys(o, "output", {"csv", "json", "svg"});
        read(o, "csv", cfg.output.csv, "output");
        read(o, "json", cfg.output.json, "output");
        read(o, "svg", cfg.output.svg, "output");
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(root);
}

/// Range checks that need the whole config; run after flag overrides.
inline void validate(const ExperimentConfig& cfg) {
    (void)cfg.profile.build();
    cfg.sampling().validate();
    if (!(cfg.D > 0.0) || !std::isfinite(cfg.D)) {
        throw ConfigError("distortion D must be positive");
    }
    if (cfg.n_max < 1) {
        throw ConfigError("n_max must be at least 1");
    }
    if (!(cfg.tail_window.lo >= 1 && cfg.tail_window.hi >= cfg.tail_window.lo && cfg.n_max >= cfg.tail_window.hi)) {
        throw ConfigError("tail window must satisfy 1 <= lo <= hi <= n_max");
    }
    if (cfg.denominator_cap && *cfg.denominator_cap < 1) {
        throw ConfigError("denominator_cap must be positive");
    }
    for (const auto& e : cfg.eps_list) {
        (void)parse_eps(e);
    }
    if (cfg.mc.k < 1 || cfg.mc.trials < 1) {
        throw ConfigError("mc.k and mc.trials must be positive");
    }
}

} // namespace wscs_rdf::cli
