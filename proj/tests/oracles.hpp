#pragma once

// Reference computations used only by tests. They share no code with the
// library: plain loops, long double, grid scans and golden-section search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline long double distortion(const std::vector<double>& var, long double theta) {
    long double s = 0.0L;
    for (double v : var) {
        s += std::min<long double>(v, theta);
    }
    return s / static_cast<long double>(var.size());
}

/// Water level by grid scan (10^4 cells) followed by golden-section search
/// on |distortion(theta) - D| inside the bracketing cell.
inline double theta(const std::vector<double>& var, double D) {
    const long double top = *std::max_element(var.begin(), var.end());
    const int cells = 10000;
    long double lo = 0.0L, hi = top;
    for (int i = 0; i < cells; ++i) {
        const long double a = top * i / cells;
        const long double b = top * (i + 1) / cells;
        if (distortion(var, a) <= D && distortion(var, b) >= D) {
            lo = a;
            hi = b;
            break;
        }
    }
    const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    auto f = [&](long double t) { return std::fabs(distortion(var, t) - D); };
    long double a = lo, b = hi;
    long double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-15L * top; ++it) {
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return static_cast<double>((a + b) / 2.0L);
}

/// (1/2N) sum max(0, log2(var/theta)) in long double.
inline double rate(const std::vector<double>& var, double theta) {
    long double s = 0.0L;
    for (double v : var) {
        if (v > theta) {
            s += std::log2(static_cast<long double>(v) / theta);
        }
    }
    return static_cast<double>(s / (2.0L * var.size()));
}

inline double rate_for_D(const std::vector<double>& var, double D) {
    long double m = 0.0L;
    for (double v : var) {
        m += v;
    }
    m /= var.size();
    if (D >= m) {
        return 0.0;
    }
    return rate(var, theta(var, D));
}

/// Trapezoidal pulse written directly from its piecewise definition.
inline double pulse(double t, double t_dc, double t_rf) {
    double x = t - std::floor(t);
    if (x <= t_rf) return x / t_rf;
    if (x < t_dc + t_rf) return 1.0;
    if (x <= t_dc + 2 * t_rf) return 1.0 - (x - t_dc - t_rf) / t_rf;
    return 0.0;
}

/// One DT period of the pulse profile 0.2 + 4.8*pulse(t/T - phi), sampled at
/// m * T / (p + u/v), computed with plain double arithmetic.
inline std::vector<double> pulse_period(double t_dc, double phi, long p, long u, long v) {
    const long n = p * v + u;
    const double ratio = static_cast<double>(p) + static_cast<double>(u) / static_cast<double>(v);
    std::vector<double> out;
    for (long m = 0; m < n; ++m) {
        out.push_back(0.2 + 4.8 * pulse(static_cast<double>(m) / ratio - phi, t_dc, 0.01));
    }
    return out;
}

} // namespace oracle
