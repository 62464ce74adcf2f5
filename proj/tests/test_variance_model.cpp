#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "wscs_rdf/variance_model.hpp"

using namespace wscs_rdf;

namespace {

const PulseParams kPulse45{0.45, 0.01};

CtVarianceProfile reference_pulse(double t_dc, double phi) {
    return CtVarianceProfile::pulse(0.2, 4.8, PulseParams{t_dc, 0.01}, 5e-6, phi);
}

} // namespace

// =============================================================================
// Pulse
// =============================================================================

TEST(PulseValue, RampStartAndMidpoint) {
    EXPECT_DOUBLE_EQ(pulse_value(0.0, kPulse45), 0.0);
    EXPECT_DOUBLE_EQ(pulse_value(0.005, kPulse45), 0.5);
}

TEST(PulseValue, Plateau) {
    EXPECT_DOUBLE_EQ(pulse_value(0.2, kPulse45), 1.0);
}

TEST(PulseValue, FallAndZero) {
    // Fall spans [0.46, 0.47]; midpoint 0.465.
    EXPECT_NEAR(pulse_value(0.465, kPulse45), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(pulse_value(0.8, kPulse45), 0.0);
}

TEST(PulseValue, PeriodicIncludingNegativeTime) {
    EXPECT_DOUBLE_EQ(pulse_value(1.2, kPulse45), pulse_value(0.2, kPulse45));
    EXPECT_NEAR(pulse_value(-0.995, kPulse45), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(pulse_value(-0.5, kPulse45), 0.0);
}

TEST(PulseValue, BoundariesAreContinuous) {
    const double eps = 1e-12;
    for (double b : {0.01, 0.46, 0.47}) {
        EXPECT_NEAR(pulse_value(b, kPulse45), pulse_value(b - eps, kPulse45), 1e-9) << b;
        EXPECT_NEAR(pulse_value(b, kPulse45), pulse_value(b + eps, kPulse45), 1e-9) << b;
    }
    EXPECT_DOUBLE_EQ(pulse_value(0.01, kPulse45), 1.0);
    EXPECT_DOUBLE_EQ(pulse_value(0.46, kPulse45), 1.0);
    EXPECT_NEAR(pulse_value(0.47, kPulse45), 0.0, 1e-12);
}

TEST(PulseValue, RejectsInvalidParameters) {
    EXPECT_THROW(pulse_value(0.1, PulseParams{0.99, 0.01}), ConfigError);
    EXPECT_THROW(pulse_value(0.1, PulseParams{-0.1, 0.01}), ConfigError);
    EXPECT_THROW(pulse_value(0.1, PulseParams{0.5, 0.0}), ConfigError);
    EXPECT_THROW(pulse_value(0.1, PulseParams{0.9, 0.06}), ConfigError);
    EXPECT_NO_THROW(pulse_value(0.1, PulseParams{0.98, 0.01}));
}

// =============================================================================
// Continuous-time profile
// =============================================================================

TEST(CtVariance, PulsePlateauAndFloor) {
    const auto prof = reference_pulse(0.45, 0.0);
    EXPECT_DOUBLE_EQ(ct_variance(prof, 0.2 * 5e-6), 5.0);
    EXPECT_DOUBLE_EQ(ct_variance(prof, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(prof.min_value(), 0.2);
    EXPECT_DOUBLE_EQ(prof.max_value(), 5.0);
}

TEST(CtVariance, PhiDelaysTheProfile) {
    const auto a = reference_pulse(0.75, 0.0);
    const auto b = reference_pulse(0.75, 1.0 / 16);
    for (double x : {0.0, 0.1, 0.5, 0.77, 0.9}) {
        EXPECT_DOUBLE_EQ(b.at_phase(x + 1.0 / 16), a.at_phase(x));
    }
}

TEST(CtVariance, SineThirdOfPeriod) {
    const auto prof = CtVarianceProfile::sine(2.0, 0.5, 1.0);
    EXPECT_NEAR(ct_variance(prof, 1.0 / 3), 2.433, 5e-4);
    EXPECT_NEAR(ct_variance(prof, 2.0 / 3), 1.567, 5e-4);
}

TEST(CtVariance, RejectsNonPositiveProfiles) {
    EXPECT_THROW(CtVarianceProfile::sine(1.0, 1.0, 1.0), ConfigError);
    EXPECT_THROW(CtVarianceProfile::pulse(0.0, 1.0, kPulse45, 1.0), ConfigError);
    EXPECT_THROW(CtVarianceProfile::pulse(0.2, 4.8, kPulse45, 0.0), ConfigError);
    EXPECT_THROW(CtVarianceProfile::pulse(0.2, 4.8, kPulse45, 1.0, 1.0), ConfigError);
}

TEST(CtVariance, PeriodicOnGrid) {
    const std::vector<CtVarianceProfile> profiles = {
        reference_pulse(0.2, 0.0), reference_pulse(0.75, 1.0 / 16), reference_pulse(0.98, 0.3),
        CtVarianceProfile::sine(2.0, 0.5, 3.0, 0.25)};
    for (const auto& prof : profiles) {
        const double T = prof.period();
        for (int i = 0; i < 1000; ++i) {
            const double t = T * (i / 1000.0 - 0.5) * 3.0;
            const double a = ct_variance(prof, t);
            const double b = ct_variance(prof, t + T);
            EXPECT_LE(std::fabs(a - b), 1e-12 * std::fabs(a)) << "t=" << t;
        }
    }
}

// =============================================================================
// Rational approximation and classification
// =============================================================================

TEST(RationalApprox, PiOverSeven) {
    const auto eps = SymbolicFraction::pi_expr(1, 7);
    auto r = rational_approx(eps, 10, 2);
    EXPECT_EQ(r.eps_n, (Rational{2, 5}));
    EXPECT_EQ(r.p_n, 24);
    r = rational_approx(eps, 1, 2);
    EXPECT_EQ(r.eps_n, (Rational{0, 1}));
    EXPECT_EQ(r.p_n, 2);
}

TEST(RationalApprox, ExactAtMultiplesOfDenominator) {
    auto r = rational_approx(SymbolicFraction::rational(1, 2), 4, 2);
    EXPECT_EQ(r.eps_n, (Rational{1, 2}));
    EXPECT_EQ(r.p_n, 10);
}

TEST(RationalApprox, DecimalsFloorExactly) {
    // 0.29 is stored as 0.28999999999999998; floor(100 * 0.29) must still be 29.
    auto r = rational_approx(SymbolicFraction::decimal(0.29), 100, 2);
    EXPECT_EQ(r.eps_n, (Rational{29, 100}));
    EXPECT_EQ(r.p_n, 229);
}

TEST(RationalApprox, RejectsNonPositiveN) {
    EXPECT_THROW(rational_approx(SymbolicFraction::rational(1, 2), 0, 2), DomainError);
}

TEST(RationalApprox, SandwichProperty) {
    const std::vector<SymbolicFraction> eps = {
        SymbolicFraction::pi_expr(1, 7), SymbolicFraction::pi_expr(5, 32), SymbolicFraction::rational(1, 3),
        SymbolicFraction::decimal(0.29), SymbolicFraction::decimal(0.123456789),
        SymbolicFraction::pi_expr(-1, 4, 1, 1)};
    for (const auto& e : eps) {
        const long double x = e.value_ld();
        long double best = -1.0L;
        for (std::int64_t n = 1; n <= 10000; ++n) {
            const auto r = rational_approx(e, n, 3);
            const long double en = static_cast<long double>(r.eps_n.num) / r.eps_n.den;
            ASSERT_LE(en, x + 1e-15L) << e.to_string() << " n=" << n;
            ASSERT_GT(en, x - 1.0L / n) << e.to_string() << " n=" << n;
            ASSERT_EQ(r.p_n, 3 * n + e.floor_times(n));
            best = std::max(best, en);
        }
        EXPECT_NEAR(static_cast<double>(best), static_cast<double>(x), 1e-4);
    }
}

TEST(ClassifySampling, Examples) {
    auto c = classify_sampling(SymbolicFraction::rational(1, 2), 1'000'000);
    ASSERT_TRUE(c.synchronous());
    EXPECT_EQ(c.u, 1);
    EXPECT_EQ(c.v, 2);
    EXPECT_EQ(c.period(2), 5);

    EXPECT_FALSE(classify_sampling(SymbolicFraction::pi_expr(5, 32), 1'000'000).synchronous());

    c = classify_sampling(SymbolicFraction::decimal(0.6), 1'000'000);
    ASSERT_TRUE(c.synchronous());
    EXPECT_EQ(c.u, 3);
    EXPECT_EQ(c.v, 5);
}

TEST(ClassifySampling, DenominatorCap) {
    EXPECT_FALSE(classify_sampling(SymbolicFraction::rational(51, 100), 50).synchronous());
    EXPECT_TRUE(classify_sampling(SymbolicFraction::rational(51, 100), 100).synchronous());
    EXPECT_FALSE(classify_sampling(SymbolicFraction::decimal(0.51), 50).synchronous());
    // A double approximation of pi/7 is not mistaken for a small rational.
    EXPECT_FALSE(classify_sampling(SymbolicFraction::decimal(std::numbers::pi / 7), 1'000'000).synchronous());
}

TEST(SymbolicFraction, RejectsOutOfRange) {
    EXPECT_THROW(SymbolicFraction::rational(3, 2), ConfigError);
    EXPECT_THROW(SymbolicFraction::rational(1, 0), ConfigError);
    EXPECT_THROW(SymbolicFraction::pi_expr(1, 3), ConfigError);
    EXPECT_THROW(SymbolicFraction::decimal(1.0), ConfigError);
    EXPECT_THROW(SymbolicFraction::decimal(-0.1), ConfigError);
}

// =============================================================================
// Discrete-time variance period
// =============================================================================

TEST(DtVariancePeriod, SineThirdSampling) {
    const auto prof = CtVarianceProfile::sine(2.0, 0.5, 1.0);
    SamplingSpec spec{3, SymbolicFraction::rational(0, 1), 0.0};
    const auto period = dt_variance_period(prof, spec, Rational{0, 1});
    ASSERT_EQ(period.period(), 3u);
    EXPECT_NEAR(period[0], 2.0, 5e-4);
    EXPECT_NEAR(period[1], 2.433, 5e-4);
    EXPECT_NEAR(period[2], 1.567, 5e-4);
}

TEST(DtVariancePeriod, SineWithAbsoluteOffset) {
    // Offset T_s / (2 pi) advances the sine argument by exactly 1/3 rad.
    const auto prof = CtVarianceProfile::sine(2.0, 0.5, 1.0);
    const double ts = 1.0 / 3.0;
    SamplingSpec spec{3, SymbolicFraction::rational(0, 1), ts / (2.0 * std::numbers::pi)};
    const auto period = dt_variance_period(prof, spec, Rational{0, 1});
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(period[i], 2.0 + 0.5 * std::sin(2.0 * std::numbers::pi * i / 3.0 + 1.0 / 3.0), 1e-12);
    }
}

TEST(DtVariancePeriod, ConstantProfile) {
    const auto prof = CtVarianceProfile::constant(1.7);
    SamplingSpec spec{2, SymbolicFraction::rational(3, 7), 0.123};
    const auto period = dt_variance_period(prof, spec, Rational{3, 7});
    EXPECT_EQ(period.period(), 17u);
    for (double v : period.values()) {
        EXPECT_DOUBLE_EQ(v, 1.7);
    }
}

TEST(DtVariancePeriod, RepeatsExactlyAndMatchesDirectSampling) {
    const std::vector<CtVarianceProfile> profiles = {
        CtVarianceProfile::pulse(0.2, 4.8, PulseParams{0.45, 0.01}, 1.0, 0.0),
        CtVarianceProfile::pulse(0.2, 4.8, PulseParams{0.75, 0.01}, 1.0, 1.0 / 16),
        CtVarianceProfile::sine(2.0, 0.5, 1.0, 0.1)};
    const std::vector<std::pair<std::int64_t, Rational>> specs = {
        {2, {1, 2}}, {2, {1, 4}}, {3, {2, 7}}, {2, {13, 50}}, {3, {0, 1}}};
    for (const auto& prof : profiles) {
        for (const auto& [p, eps] : specs) {
            SamplingSpec spec{p, SymbolicFraction::rational(eps.num, eps.den), 0.0};
            const auto period = dt_variance_period(prof, spec, eps);
            ASSERT_EQ(static_cast<std::int64_t>(period.period()), p * eps.den + eps.num);
            const auto direct =
                sample_variances(prof, spec.sampling_interval(prof.period()), 0.0, 2 * period.period());
            // Direct sampling accumulates phase rounding; on the pulse ramps
            // that is amplified by the slope amplitude / t_rf.
            const double tol = std::holds_alternative<PulseShape>(prof.shape()) ? 1e-10 : 1e-12;
            for (std::size_t i = 0; i < direct.size(); ++i) {
                const double rep = period[i % period.period()];
                EXPECT_LE(std::fabs(rep - direct[i]), tol * direct[i])
                    << "p=" << p << " eps=" << eps.num << "/" << eps.den << " i=" << i;
            }
        }
    }
}

TEST(DtVariancePeriod, EntriesStayWithinProfileRange) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double t_dc = 0.98 * unif(rng);
        const auto prof = CtVarianceProfile::pulse(0.2, 4.8, PulseParams{t_dc, 0.01}, 5e-6, unif(rng) * 0.999);
        const std::int64_t v = 1 + static_cast<std::int64_t>(unif(rng) * 40);
        const std::int64_t u = static_cast<std::int64_t>(unif(rng) * static_cast<double>(v));
        SamplingSpec spec{1 + static_cast<std::int64_t>(unif(rng) * 3), SymbolicFraction::rational(u, v),
                          unif(rng) * 1e-6};
        const auto eps = classify_sampling(spec.eps);
        const auto period = dt_variance_period(prof, spec, Rational{eps.u, eps.v});
        for (double x : period.values()) {
            EXPECT_GE(x, prof.min_value());
            EXPECT_LE(x, prof.max_value());
        }
    }
}

TEST(DtVariancePeriod, RejectsInvalidEntries) {
    EXPECT_THROW(DtVariancePeriod({}), DomainError);
    EXPECT_THROW(DtVariancePeriod({1.0, 0.0}), DomainError);
    EXPECT_THROW(DtVariancePeriod({1.0, NAN}), DomainError);
    EXPECT_THROW(DtVariancePeriod({1.0, INFINITY}), DomainError);
}

TEST(SampleVariances, AsynchronousSequenceIsNotPeriodic) {
    // T_s = (1 + 1/(2 pi)) T / 3 gives an irrational period ratio.
    const auto prof = CtVarianceProfile::sine(2.0, 0.5, 1.0);
    const double ts = (1.0 + 1.0 / (2.0 * std::numbers::pi)) / 3.0;
    const auto v = sample_variances(prof, ts, 0.0, 400);
    EXPECT_DOUBLE_EQ(v[0], 2.0);
    for (std::size_t shift = 1; shift < 100; ++shift) {
        double diff = 0.0;
        for (std::size_t i = 0; i + shift < v.size(); ++i) {
            diff = std::max(diff, std::fabs(v[i] - v[i + shift]));
        }
        EXPECT_GT(diff, 1e-6) << "shift " << shift;
    }
}
