#pragma once

// Rate-distortion functions of sampled WSCS Gaussian sources.
//
// Synchronous sampling (T_ps / T_s = p + u/v) yields a discrete-time WSCS
// process of period p*v + u whose RDF is a single water-filling problem.
// Asynchronous sampling is handled through the sequence R_n(D) obtained by
// replacing eps with floor(n*eps)/n; its limit superior is estimated as the
// maximum of R_n(D) over a tail window of n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wscs_rdf/error.hpp"
#include "wscs_rdf/parallel.hpp"
#include "wscs_rdf/variance_model.hpp"
#include "wscs_rdf/waterfill.hpp"

namespace wscs_rdf {

struct TailWindow {
    std::int64_t lo = 230;
    std::int64_t hi = 500;
};

struct SyncRate {
    double rate_bits = 0.0;
    double theta = 0.0;
    std::int64_t period = 0;
};

inline SyncRate rdf_synchronous_detail(const CtVarianceProfile& profile, const SamplingSpec& spec,
                                       std::int64_t u, std::int64_t v, double D,
                                       WaterfillOptions options = {}) {
    if (v < 1 || u < 0 || u >= v) {
        throw DomainError("synchronous epsilon u/v must lie in [0, 1)");
    }
    const DtVariancePeriod period = dt_variance_period(profile, spec, Rational{u, v});
    const WaterfillSolution sol = solve_reverse_waterfill(period, D, options);
    return {sol.rate_bits, sol.theta, static_cast<std::int64_t>(period.period())};
}

/// RDF in bits/sample for T_ps / T_s = p + u/v. `spec.eps` is ignored.
inline double rdf_synchronous(const CtVarianceProfile& profile, const SamplingSpec& spec, std::int64_t u,
                              std::int64_t v, double D, WaterfillOptions options = {}) {
    return rdf_synchronous_detail(profile, spec, u, v, D, options).rate_bits;
}

struct RdfSeriesEntry {
    std::int64_t n = 0;
    Rational eps_n;
    std::int64_t p_n = 0;
    double rate_bits = 0.0;
    double theta = 0.0;
};

struct RdfSeries {
    std::vector<RdfSeriesEntry> entries;
    TailWindow tail_window;
    double limsup_estimate = 0.0;
    double tail_spread = 0.0;
    std::int64_t argmax_n = 0; // n attaining the tail maximum
    // False when D >= min_t sigma^2(t): the per-n rates are still valid, but
    // the tail maximum is no longer backed by the low-distortion theory.
    bool low_distortion_regime = true;

    const RdfSeriesEntry& at(std::int64_t n) const {
        return entries.at(static_cast<std::size_t>(n - entries.front().n));
    }
};

namespace detail {

inline std::vector<RdfSeriesEntry> series_entries(const CtVarianceProfile& profile, const SamplingSpec& spec,
                                                  double D, std::int64_t n_from, std::int64_t n_to,
                                                  WaterfillOptions options) {
    std::vector<RdfSeriesEntry> entries(static_cast<std::size_t>(n_to - n_from + 1));
    parallel_for(entries.size(), [&](std::size_t i) {
        const std::int64_t n = n_from + static_cast<std::int64_t>(i);
        const RationalApprox approx = rational_approx(spec.eps, n, spec.p);
        const SyncRate r =
            rdf_synchronous_detail(profile, spec, approx.eps_n.num, approx.eps_n.den, D, options);
        entries[i] = {n, approx.eps_n, approx.p_n, r.rate_bits, r.theta};
    });
    return entries;
}

// Tail statistics over entries whose n lies in the window.
inline void summarize_tail(RdfSeries& series) {
    double hi = -1.0;
    double lo = 0.0;
    bool first = true;
    for (const auto& e : series.entries) {
        if (e.n < series.tail_window.lo || e.n > series.tail_window.hi) {
            continue;
        }
        if (e.rate_bits > hi) {
            hi = e.rate_bits;
            series.argmax_n = e.n;
        }
        lo = first ? e.rate_bits : std::min(lo, e.rate_bits);
        first = false;
    }
    series.limsup_estimate = hi;
    series.tail_spread = hi - lo;
}

} // namespace detail

/// R_n(D) for n = 1..n_max and its tail-window limsup estimate.
inline RdfSeries rdf_series(const CtVarianceProfile& profile, const SamplingSpec& spec, double D,
                            std::int64_t n_max, TailWindow window = {}, WaterfillOptions options = {}) {
    spec.validate();
    if (!(window.lo >= 1 && window.hi >= window.lo && n_max >= window.hi)) {
        throw ConfigError("tail window must satisfy 1 <= lo <= hi <= n_max");
    }
    RdfSeries series;
    series.tail_window = window;
    series.low_distortion_regime = D < profile.min_value();
    series.entries = detail::series_entries(profile, spec, D, 1, n_max, options);
    detail::summarize_tail(series);
    return series;
}

/// Only the tail window of the series; entries start at window.lo.
inline RdfSeries rdf_series_tail(const CtVarianceProfile& profile, const SamplingSpec& spec, double D,
                                 TailWindow window = {}, WaterfillOptions options = {}) {
    spec.validate();
    if (!(window.lo >= 1 && window.hi >= window.lo)) {
        throw ConfigError("tail window must satisfy 1 <= lo <= hi");
    }
    RdfSeries series;
    series.tail_window = window;
    series.low_distortion_regime = D < profile.min_value();
    series.entries = detail::series_entries(profile, spec, D, window.lo, window.hi, options);
    detail::summarize_tail(series);
    return series;
}

enum class SamplingMode { Synchronous, Asynchronous };

inline const char* to_string(SamplingMode m) {
    return m == SamplingMode::Synchronous ? "sync" : "async";
}

/// Everything needed to recompute a rate with rdf_synchronous: the rational
/// mismatch actually evaluated, its period, and the water level.
struct PointMetadata {
    std::int64_t p = 0;
    std::string eps_expr;
    std::int64_t n_used = 0; // 0 for exact synchronous evaluation
    Rational eps_evaluated;
    std::int64_t period = 0;
    double theta = 0.0;
};

struct RatePoint {
    double rate_bits = 0.0;
    SamplingMode mode = SamplingMode::Synchronous;
    PointMetadata metadata;
    bool low_distortion_regime = true;
    double tail_spread = 0.0;
};

struct EvaluationOptions {
    std::int64_t denominator_cap = kDefaultDenominatorCap;
    TailWindow tail_window = {};
    std::int64_t n_max = 500;
    WaterfillOptions waterfill = {};
};

/// Classifies spec.eps and evaluates the RDF exactly (synchronous) or as the
/// tail-window limsup of R_n(D) (asynchronous).
inline RatePoint evaluate_rdf(const CtVarianceProfile& profile, const SamplingSpec& spec, double D,
                              const EvaluationOptions& opts = {}) {
    const SamplingClass cls = classify_sampling(spec.eps, opts.denominator_cap);
    RatePoint point;
    point.metadata.p = spec.p;
    point.metadata.eps_expr = spec.eps.to_string();
    if (cls.synchronous()) {
        const SyncRate r = rdf_synchronous_detail(profile, spec, cls.u, cls.v, D, opts.waterfill);
        point.rate_bits = r.rate_bits;
        point.mode = SamplingMode::Synchronous;
        point.metadata.eps_evaluated = Rational{cls.u, cls.v};
        point.metadata.period = r.period;
        point.metadata.theta = r.theta;
        return point;
    }
    if (opts.n_max < opts.tail_window.hi) {
        throw ConfigError("tail window must end at or before n_max");
    }
    const RdfSeries series = rdf_series_tail(profile, spec, D, opts.tail_window, opts.waterfill);
    const RdfSeriesEntry& best = series.at(series.argmax_n);
    point.rate_bits = series.limsup_estimate;
    point.mode = SamplingMode::Asynchronous;
    point.metadata.n_used = best.n;
    point.metadata.eps_evaluated = best.eps_n;
    point.metadata.period = spec.p * best.eps_n.den + best.eps_n.num;
    point.metadata.theta = best.theta;
    point.low_distortion_regime = series.low_distortion_regime;
    point.tail_spread = series.tail_spread;
    return point;
}

enum class SweepAxis { N, Ratio, Distortion };

struct SweepPoint {
    double x = 0.0;
    double rate_bits = 0.0;
    SamplingMode mode = SamplingMode::Synchronous;
    PointMetadata metadata;
    std::size_t curve = 0; // index into SweepResult::curves
};

struct SweepResult {
    SweepAxis axis = SweepAxis::Ratio;
    std::vector<std::string> curves; // one label per curve
    std::vector<SweepPoint> points;  // sorted by (x, curve)
};

/// Splits a period ratio T_ps / T_s into p = floor(ratio) and a fractional
/// part. Ratios that are exact rationals as doubles (denominator up to 10^9)
/// keep a Rational fraction; anything else becomes a Decimal.
inline std::pair<std::int64_t, SymbolicFraction> split_ratio(double ratio) {
    if (!std::isfinite(ratio) || !(ratio >= 1.0)) {
        throw ConfigError("period ratio must be at least 1");
    }
    if (auto r = recover_rational(ratio, kExactRecoveryCap)) {
        const std::int64_t p = r->num / r->den;
        return {p, SymbolicFraction::rational(r->num - p * r->den, r->den)};
    }
    const double p = std::floor(ratio);
    return {static_cast<std::int64_t>(p), SymbolicFraction::decimal(ratio - p)};
}

inline void sort_points(SweepResult& result) {
    std::stable_sort(result.points.begin(), result.points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        return a.x < b.x || (a.x == b.x && a.curve < b.curve);
    });
}

/// RDF across period ratios T_ps / T_s; each ratio is classified with the
/// given denominator cap.
inline SweepResult sweep_ratio(const CtVarianceProfile& profile, const std::vector<double>& ratio_grid, double D,
                               const EvaluationOptions& opts = {}, double offset_abs = 0.0) {
    SweepResult result;
    result.axis = SweepAxis::Ratio;
    result.curves = {"R(D)"};
    result.points.resize(ratio_grid.size());
    for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
        if (!(ratio_grid[i] > 1.0)) {
            throw ConfigError("ratio grid values must exceed 1");
        }
    }
    // Points are independent; rdf_series parallelizes internally, so the
    // outer loop stays sequential.
    for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
        auto [p, eps] = split_ratio(ratio_grid[i]);
        SamplingSpec spec{p, eps, offset_abs};
        const RatePoint rp = evaluate_rdf(profile, spec, D, opts);
        result.points[i] = {ratio_grid[i], rp.rate_bits, rp.mode, rp.metadata, 0};
    }
    sort_points(result);
    return result;
}

/// One RDF-versus-D curve per mismatch in `eps_list`, sharing p and the offset.
inline SweepResult sweep_distortion(const CtVarianceProfile& profile, const SamplingSpec& spec,
                                    const std::vector<double>& D_grid,
                                    const std::vector<SymbolicFraction>& eps_list,
                                    const EvaluationOptions& opts = {}) {
    SweepResult result;
    result.axis = SweepAxis::Distortion;
    for (double D : D_grid) {
        if (!(D > 0.0) || !std::isfinite(D)) {
            throw ConfigError("distortion grid values must be positive");
        }
    }
    for (std::size_t c = 0; c < eps_list.size(); ++c) {
        result.curves.push_back(eps_list[c].to_string());
        SamplingSpec s{spec.p, eps_list[c], spec.offset_abs};
        for (double D : D_grid) {
            const RatePoint rp = evaluate_rdf(profile, s, D, opts);
            result.points.push_back({D, rp.rate_bits, rp.mode, rp.metadata, c});
        }
    }
    sort_points(result);
    return result;
}

struct ScalingCheck {
    double rate_original = 0.0;
    double rate_scaled = 0.0;
};

/// Rates of (profile, D) and of (alpha^2 * profile, alpha^2 * D).
inline ScalingCheck scaling_check(const CtVarianceProfile& profile, const SamplingSpec& spec, double D, double alpha,
                                  const EvaluationOptions& opts = {}) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("scaling factor alpha must be positive");
    }
    const double a2 = alpha * alpha;
    return {evaluate_rdf(profile, spec, D, opts).rate_bits,
            evaluate_rdf(profile.scaled(a2), spec, a2 * D, opts).rate_bits};
}

inline ScalingCheck scaling_check(const DtVariancePeriod& variances, double D, double alpha,
                                  WaterfillOptions options = {}) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("scaling factor alpha must be positive");
    }
    const double a2 = alpha * alpha;
    return {solve_reverse_waterfill(variances, D, options).rate_bits,
            solve_reverse_waterfill(variances.scaled(a2), a2 * D, options).rate_bits};
}

} // namespace wscs_rdf
