// Command-line front end for the sampled WSCS rate-distortion library.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wscs_rdf/cli/config.hpp"
#include "wscs_rdf/cli/run.hpp"

namespace {

using wscs_rdf::cli::Command;

struct Overrides {
    std::string config;
    std::optional<double> D;
    std::optional<std::string> eps;
    std::optional<double> tdc;
    std::optional<double> phi;
    std::optional<std::int64_t> p;
    std::optional<std::int64_t> n_max;
    std::optional<std::int64_t> tail_lo;
    std::optional<std::int64_t> tail_hi;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_csv;
    std::optional<std::string> out_json;
    std::optional<std::string> out_svg;

    void apply(wscs_rdf::cli::ExperimentConfig& cfg) const {
        if (D) cfg.D = *D;
        if (eps) cfg.eps = *eps;
        if (tdc) cfg.profile.t_dc = *tdc;
        if (phi) cfg.profile.phi = *phi;
        if (p) cfg.p = *p;
        if (n_max) {
            cfg.n_max = *n_max;
            if (!tail_hi && cfg.tail_window.hi > *n_max) {
                cfg.tail_window.hi = *n_max;
            }
        }
        if (tail_lo) cfg.tail_window.lo = *tail_lo;
        if (tail_hi) cfg.tail_window.hi = *tail_hi;
        if (seed) cfg.seed = *seed;
        if (out_csv) cfg.output.csv = *out_csv;
        if (out_json) cfg.output.json = *out_json;
        if (out_svg) cfg.output.svg = *out_svg;
    }
};

void add_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON experiment config");
    sub->add_option("--D", o.D, "distortion constraint");
    sub->add_option("--eps", o.eps, "fractional part of T_ps/T_s, e.g. 1/2, pi/7, 5*pi/32, 0.6");
    sub->add_option("--tdc", o.tdc, "pulse duty cycle as a fraction of the period");
    sub->add_option("--phi", o.phi, "profile offset normalized to the period");
    sub->add_option("--p", o.p, "integer part of T_ps/T_s");
    sub->add_option("--n-max", o.n_max, "largest n of the R_n(D) sequence");
    sub->add_option("--tail-lo", o.tail_lo, "first n of the limsup tail window");
    sub->add_option("--tail-hi", o.tail_hi, "last n of the limsup tail window");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--out-csv", o.out_csv, "CSV output path");
    sub->add_option("--out-json", o.out_json, "JSON output path");
    sub->add_option("--out-svg", o.out_svg, "SVG plot output path");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-distortion functions of sampled wide-sense cyclostationary Gaussian sources"};
    app.require_subcommand(1);

    Overrides overrides;
    struct Entry {
        Command cmd;
        const char* help;
        CLI::App* app = nullptr;
    };
    Entry entries[] = {
        {Command::RdfPoint, "RDF at one sampling configuration"},
        {Command::SweepN, "R_n(D) over n and its tail limsup estimate"},
        {Command::SweepRatio, "RDF across sampling-period ratios T_ps/T_s"},
        {Command::SweepDistortion, "RDF versus distortion for a list of mismatches"},
        {Command::Mc, "Monte Carlo check of the optimal backward channel"},
    };
    for (auto& e : entries) {
        e.app = app.add_subcommand(wscs_rdf::cli::command_name(e.cmd), e.help);
        add_options(e.app, overrides);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return wscs_rdf::cli::kConfigError;
    }

    for (const auto& e : entries) {
        if (!e.app->parsed()) {
            continue;
        }
        wscs_rdf::cli::ExperimentConfig cfg;
        try {
            if (!overrides.config.empty()) {
                cfg = wscs_rdf::cli::load_config(overrides.config);
            }
            overrides.apply(cfg);
        } catch (const wscs_rdf::ConfigError& err) {
            std::cerr << "config error: " << err.what() << "\n";
            return wscs_rdf::cli::kConfigError;
        }
        return wscs_rdf::cli::run(e.cmd, cfg);
    }
    return wscs_rdf::cli::kConfigError;
}
