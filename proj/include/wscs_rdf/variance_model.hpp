#pragma once

// Periodic continuous-time variance profiles and the discrete-time variance
// sequences produced by uniformly sampling them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wscs_rdf/error.hpp"
#include "wscs_rdf/symbolic_fraction.hpp"

namespace wscs_rdf {

/// Shape parameters of the unit-period trapezoidal pulse: a linear rise of
/// length `t_rf`, a plateau of length `t_dc`, a linear fall of length `t_rf`
/// and zero for the rest of the period. Both are fractions of the period.
struct PulseParams {
    double t_dc = 0.5;
    double t_rf = 0.01;

    void validate() const {
        if (!std::isfinite(t_dc) || !std::isfinite(t_rf)) {
            throw ConfigError("pulse parameters must be finite");
        }
        if (t_dc < 0.0 || t_dc > 0.98) {
            throw ConfigError("pulse duty cycle must lie in [0, 0.98]");
        }
        if (t_rf <= 0.0) {
            throw ConfigError("pulse rise/fall time must be positive");
        }
        if (t_dc + 2.0 * t_rf > 1.0) {
            throw ConfigError("pulse duty cycle plus rise and fall exceeds one period");
        }
    }
};

/// Value in [0, 1] of the periodic pulse at dimensionless time `t`.
/// Interval ends follow the closed/open pattern [0,rf] (rf,dc+rf)
/// [dc+rf,dc+2rf] (dc+2rf,1), checked in that order.
inline double pulse_value(double t, const PulseParams& params) {
    params.validate();
    double x = t - std::floor(t);
    if (x >= 1.0) {
        x = 0.0;
    }
    const double rise_end = params.t_rf;
    const double plateau_end = params.t_dc + params.t_rf;
    const double fall_end = params.t_dc + 2.0 * params.t_rf;
    if (x <= rise_end) {
        return x / params.t_rf;
    }
    if (x < plateau_end) {
        return 1.0;
    }
    if (x <= fall_end) {
        return std::clamp(1.0 - (x - plateau_end) / params.t_rf, 0.0, 1.0);
    }
    return 0.0;
}

struct PulseShape {
    double base = 0.2;
    double amplitude = 4.8;
    PulseParams pulse;
};

struct SineShape {
    double mean = 2.0;
    double amplitude = 0.5;
};

/// sigma^2(t) of a continuous-time WSCS source, periodic in `period`.
/// `phi` delays the profile by phi * period.
class CtVarianceProfile {
  public:
    using Shape = std::variant<PulseShape, SineShape>;

    CtVarianceProfile(Shape shape, double period, double phi = 0.0)
        : shape_(shape), period_(period), phi_(phi) {
        validate();
    }

    static CtVarianceProfile pulse(double base, double amplitude, PulseParams params, double period,
                                   double phi = 0.0) {
        return CtVarianceProfile(PulseShape{base, amplitude, params}, period, phi);
    }

    static CtVarianceProfile sine(double mean, double amplitude, double period, double phi = 0.0) {
        return CtVarianceProfile(SineShape{mean, amplitude}, period, phi);
    }

    static CtVarianceProfile constant(double value, double period = 1.0) {
        return sine(value, 0.0, period, 0.0);
    }

    const Shape& shape() const { return shape_; }
    double period() const { return period_; }
    double phi() const { return phi_; }

    /// Variance at normalized time x = t / period.
    double at_phase(double x) const {
        const double shifted = x - phi_;
        if (const auto* p = std::get_if<PulseShape>(&shape_)) {
            return p->base + p->amplitude * pulse_value(shifted, p->pulse);
        }
        const auto& s = std::get<SineShape>(shape_);
        if (s.amplitude == 0.0) {
            return s.mean;
        }
        double frac = shifted - std::floor(shifted);
        return s.mean + s.amplitude * std::sin(2.0 * std::numbers::pi * frac);
    }

    double min_value() const {
        if (const auto* p = std::get_if<PulseShape>(&shape_)) {
            return std::min(p->base, p->base + p->amplitude);
        }
        const auto& s = std::get<SineShape>(shape_);
        return s.mean - std::fabs(s.amplitude);
    }

    double max_value() const {
        if (const auto* p = std::get_if<PulseShape>(&shape_)) {
            return std::max(p->base, p->base + p->amplitude);
        }
        const auto& s = std::get<SineShape>(shape_);
        return s.mean + std::fabs(s.amplitude);
    }

    /// The same profile with every variance multiplied by `factor`.
    CtVarianceProfile scaled(double factor) const {
        if (!(factor > 0.0) || !std::isfinite(factor)) {
            throw ConfigError("variance scale factor must be positive and finite");
        }
        Shape s = shape_;
        if (auto* p = std::get_if<PulseShape>(&s)) {
            p->base *= factor;
            p->amplitude *= factor;
        } else {
            auto& sn = std::get<SineShape>(s);
            sn.mean *= factor;
            sn.amplitude *= factor;
        }
        return CtVarianceProfile(s, period_, phi_);
    }

    CtVarianceProfile with_phi(double phi) const { return CtVarianceProfile(shape_, period_, phi); }

  private:
    void validate() const {
        if (!(period_ > 0.0) || !std::isfinite(period_)) {
            throw ConfigError("profile period must be positive and finite");
        }
        if (!(phi_ >= 0.0 && phi_ < 1.0)) {
            throw ConfigError("profile offset phi must lie in [0, 1)");
        }
        if (const auto* p = std::get_if<PulseShape>(&shape_)) {
            p->pulse.validate();
            if (!std::isfinite(p->base) || !std::isfinite(p->amplitude)) {
                throw ConfigError("pulse base and amplitude must be finite");
            }
        } else {
            const auto& s = std::get<SineShape>(shape_);
            if (!std::isfinite(s.mean) || !std::isfinite(s.amplitude)) {
                throw ConfigError("sine mean and amplitude must be finite");
            }
        }
        if (!(min_value() > 0.0)) {
            throw ConfigError("variance profile must be strictly positive");
        }
    }

    Shape shape_;
    double period_;
    double phi_;
};

inline double ct_variance(const CtVarianceProfile& profile, double t) {
    return profile.at_phase(t / profile.period());
}

/// T_ps = (p + eps) * T_s, with the first sample taken at `offset_abs`.
struct SamplingSpec {
    std::int64_t p = 2;
    SymbolicFraction eps;
    double offset_abs = 0.0;

    void validate() const {
        if (p < 1) {
            throw ConfigError("integer part p of the period ratio must be at least 1");
        }
        if (!std::isfinite(offset_abs)) {
            throw ConfigError("sampling offset must be finite");
        }
    }

    double ratio() const { return static_cast<double>(p) + eps.value(); }

    double sampling_interval(double period) const { return period / ratio(); }
};

/// Smallest variance accepted in a discrete-time period.
inline constexpr double kMinVariance = 1e-12;

/// One period of a discrete-time WSCS variance sequence.
class DtVariancePeriod {
  public:
    explicit DtVariancePeriod(std::vector<double> variances) : variances_(std::move(variances)) {
        if (variances_.empty()) {
            throw DomainError("variance period must be non-empty");
        }
        for (double v : variances_) {
            if (!std::isfinite(v)) {
                throw DomainError("variance entries must be finite");
            }
            if (!(v > kMinVariance)) {
                throw DomainError("variance entries must be bounded away from zero");
            }
        }
    }

    std::span<const double> values() const { return variances_; }
    std::size_t period() const { return variances_.size(); }
    double operator[](std::size_t m) const { return variances_[m]; }

    double max() const { return *std::max_element(variances_.begin(), variances_.end()); }
    double min() const { return *std::min_element(variances_.begin(), variances_.end()); }

    DtVariancePeriod scaled(double factor) const {
        std::vector<double> v = variances_;
        for (double& x : v) {
            x *= factor;
        }
        return DtVariancePeriod(std::move(v));
    }

  private:
    std::vector<double> variances_;
};

struct RationalApprox {
    Rational eps_n; // reduced floor(n*eps)/n
    std::int64_t p_n = 0;
};

/// eps_n = floor(n*eps)/n and p_n = p*n + floor(n*eps).
inline RationalApprox rational_approx(const SymbolicFraction& eps, std::int64_t n, std::int64_t p) {
    if (n < 1) {
        throw DomainError("rational approximation index n must be positive");
    }
    const std::int64_t fl = eps.floor_times(n);
    return {Rational{fl, n}.reduced(), p * n + fl};
}

struct SamplingClass {
    enum class Kind { Synchronous, Asynchronous };
    Kind kind = Kind::Asynchronous;
    std::int64_t u = 0;
    std::int64_t v = 1;

    bool synchronous() const { return kind == Kind::Synchronous; }
    /// Discrete-time period p*v + u for synchronous sampling.
    std::int64_t period(std::int64_t p) const { return p * v + u; }
};

inline constexpr std::int64_t kDefaultDenominatorCap = 1'000'000;

inline SamplingClass classify_sampling(const SymbolicFraction& eps,
                                       std::int64_t denominator_cap = kDefaultDenominatorCap) {
    if (const auto* r = std::get_if<Rational>(&eps.repr())) {
        if (r->den <= denominator_cap) {
            return {SamplingClass::Kind::Synchronous, r->num, r->den};
        }
        return {};
    }
    if (const auto* d = std::get_if<Decimal>(&eps.repr())) {
        if (auto r = recover_rational(d->value, denominator_cap)) {
            return {SamplingClass::Kind::Synchronous, r->num, r->den};
        }
    }
    return {};
}

/// Variances at sample times m * T_ps / (p + u/v) + offset_abs for one full
/// period N_p = p*v + u. Sample phases are reduced with integer arithmetic so
/// the returned period repeats exactly.
inline DtVariancePeriod dt_variance_period(const CtVarianceProfile& profile, const SamplingSpec& spec,
                                           Rational eps_rational) {
    spec.validate();
    const Rational eps = eps_rational.reduced();
    if (eps.num < 0 || eps.num >= eps.den) {
        throw DomainError("rational epsilon must lie in [0, 1)");
    }
    const std::int64_t period = spec.p * eps.den + eps.num;
    const double offset_phase = spec.offset_abs / profile.period();
    std::vector<double> out(static_cast<std::size_t>(period));
    for (std::int64_t m = 0; m < period; ++m) {
        const std::int64_t residue = (m * eps.den) % period;
        const double phase = static_cast<double>(residue) / static_cast<double>(period);
        out[static_cast<std::size_t>(m)] = profile.at_phase(phase + offset_phase);
    }
    return DtVariancePeriod(std::move(out));
}

/// Direct sampling sigma^2(i*T_s + offset) for i = 0..count-1; no periodicity
/// is assumed, so this also covers asynchronous sampling.
inline std::vector<double> sample_variances(const CtVarianceProfile& profile, double sampling_interval,
                                            double offset_abs, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = ct_variance(profile, static_cast<double>(i) * sampling_interval + offset_abs);
    }
    return out;
}

} // namespace wscs_rdf
