#pragma once

#include <iostream>
#include <sstream>
#include <string>

#include "wscs_rdf/backward_channel_mc.hpp"
#include "wscs_rdf/cli/config.hpp"
#include "wscs_rdf/cli/output.hpp"
#include "wscs_rdf/error.hpp"
#include "wscs_rdf/rdf_sequence.hpp"

namespace wscs_rdf::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

enum class Command { RdfPoint, SweepN, SweepRatio, SweepDistortion, Mc };

inline const char* command_name(Command c) {
    switch (c) {
    case Command::RdfPoint:
        return "rdf-point";
    case Command::SweepN:
        return "sweep-n";
    case Command::SweepRatio:
        return "sweep-ratio";
    case Command::SweepDistortion:
        return "sweep-distortion";
    case Command::Mc:
        return "mc";
    }
    return "?";
}

// Value accepted in sweep.kind for each subcommand.
inline const char* sweep_kind(Command c) {
    switch (c) {
    case Command::RdfPoint:
        return "point";
    case Command::SweepN:
        return "n";
    case Command::SweepRatio:
        return "ratio";
    case Command::SweepDistortion:
        return "distortion";
    case Command::Mc:
        return "mc";
    }
    return "?";
}

// Classification cap for ratio sweeps when the config does not set one:
// fractional parts with denominators above 10 are evaluated asynchronously.
inline constexpr std::int64_t kRatioSweepDefaultCap = 10;

namespace detail {

inline EvaluationOptions evaluation_options(const ExperimentConfig& cfg, std::int64_t default_cap) {
    EvaluationOptions opts;
    opts.denominator_cap = cfg.denominator_cap.value_or(default_cap);
    opts.tail_window = cfg.tail_window;
    opts.n_max = cfg.n_max;
    return opts;
}

inline void write_outputs(const ExperimentConfig& cfg, const std::string& csv, const std::string& json_text,
                          const std::string& svg) {
    if (!cfg.output.csv.empty() && !csv.empty()) {
        write_file_atomic(cfg.output.csv, csv);
    }
    if (!cfg.output.json.empty() && !json_text.empty()) {
        write_file_atomic(cfg.output.json, json_text);
    }
    if (!cfg.output.svg.empty() && !svg.empty()) {
        write_file_atomic(cfg.output.svg, svg);
    }
}

inline void warn_low_distortion(bool valid, std::ostream& err) {
    if (!valid) {
        err << "warning: D is not below the minimum source variance; the asynchronous tail limsup is "
               "outside its low-distortion validity\n";
    }
}

inline DtVariancePeriod mc_variances(const ExperimentConfig& cfg) {
    if (!cfg.mc.variances.empty()) {
        return DtVariancePeriod(cfg.mc.variances);
    }
    const SamplingSpec spec = cfg.sampling();
    const SamplingClass cls = classify_sampling(spec.eps, cfg.denominator_cap.value_or(kDefaultDenominatorCap));
    if (!cls.synchronous()) {
        throw ConfigError("mc needs explicit sweep.mc.variances or a synchronous epsilon");
    }
    return dt_variance_period(cfg.profile.build(), spec, Rational{cls.u, cls.v});
}

inline int execute(Command cmd, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.kind.empty() && cfg.kind != sweep_kind(cmd)) {
        throw ConfigError(std::string("config sweep.kind '") + cfg.kind + "' does not match subcommand " +
                          command_name(cmd));
    }
    validate(cfg);
    const CtVarianceProfile profile = cfg.profile.build();
    switch (cmd) {
    case Command::RdfPoint: {
        const RatePoint pt = evaluate_rdf(profile, cfg.sampling(), cfg.D, evaluation_options(cfg, kDefaultDenominatorCap));
        if (pt.mode == SamplingMode::Asynchronous) {
            warn_low_distortion(pt.low_distortion_regime, err);
        }
        write_outputs(cfg, "", to_json(pt, cfg.D).dump(2) + "\n", "");
        out << "rate_bits=" << format_double(pt.rate_bits) << " mode=" << to_string(pt.mode)
            << " eps=" << pt.metadata.eps_expr << "\n";
        return kOk;
    }
    case Command::SweepN: {
        const RdfSeries s = rdf_series(profile, cfg.sampling(), cfg.D, cfg.n_max, cfg.tail_window);
        warn_low_distortion(s.low_distortion_regime, err);
        write_outputs(cfg, series_csv(s), to_json(s).dump(2) + "\n", svg_line_plot(plot_series(s), "n", "R_n(D) [bits/sample]"));
        out << "limsup_estimate=" << format_double(s.limsup_estimate) << " tail_spread=" << format_double(s.tail_spread)
            << " window=[" << s.tail_window.lo << "," << s.tail_window.hi << "] rows=" << s.entries.size() << "\n";
        return kOk;
    }
    case Command::SweepRatio: {
        const SweepResult r = sweep_ratio(profile, cfg.ratio_grid.values, cfg.D,
                                          evaluation_options(cfg, kRatioSweepDefaultCap), cfg.offset_abs);
        write_outputs(cfg, ratio_csv(r), to_json(r).dump(2) + "\n",
                      svg_line_plot(plot_series(r), "T_ps / T_s", "R(D) [bits/sample]"));
        std::size_t n_async = 0;
        for (const auto& p : r.points) {
            n_async += p.mode == SamplingMode::Asynchronous;
        }
        out << "points=" << r.points.size() << " sync=" << r.points.size() - n_async << " async=" << n_async << "\n";
        return kOk;
    }
    case Command::SweepDistortion: {
        std::vector<SymbolicFraction> eps;
        for (const auto& e : cfg.eps_list) {
            eps.push_back(parse_eps(e));
        }
        const SweepResult r = sweep_distortion(profile, cfg.sampling(), cfg.distortion_grid(), eps,
                                               evaluation_options(cfg, kDefaultDenominatorCap));
        write_outputs(cfg, distortion_csv(r), to_json(r).dump(2) + "\n",
                      svg_line_plot(plot_series(r), "D", "R(D) [bits/sample]"));
        out << "points=" << r.points.size() << " curves=" << r.curves.size() << "\n";
        return kOk;
    }
    case Command::Mc: {
        const auto spec = BackwardChannelSpec::from_distortion(mc_variances(cfg), cfg.D);
        McConfig mc;
        mc.k = cfg.mc.k;
        mc.trials = cfg.mc.trials;
        mc.seed = cfg.seed;
        mc.plimsup_k_list = cfg.mc.plimsup_k_list;
        mc.plimsup_trials = cfg.mc.plimsup_trials;
        mc.plimsup_delta = cfg.mc.delta;
        mc.ui_k_list = cfg.mc.ui_k_list;
        mc.ui_trials = cfg.mc.ui_trials;
        const McReport rep = run_monte_carlo(spec, mc);
        const auto j = to_json(rep);
        write_outputs(cfg, "", j.dump(2) + "\n", "");
        out << j.dump() << "\n";
        return kOk;
    }
    }
    return kConfigError;
}

} // namespace detail

/// Runs one subcommand and maps failures onto exit codes.
inline int run(Command cmd, const ExperimentConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        return detail::execute(cmd, cfg, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const DomainError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const DiagnosticError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
}

} // namespace wscs_rdf::cli
