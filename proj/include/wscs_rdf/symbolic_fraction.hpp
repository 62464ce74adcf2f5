#pragma once

// Exact representation of the fractional sampling mismatch epsilon.
//
// Floating point cannot tell a rational mismatch (synchronous sampling) from
// an irrational one (asynchronous sampling), so epsilon is carried as one of
// three forms and only collapsed to a double when a value is required.

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <variant>

#include "wscs_rdf/error.hpp"

namespace wscs_rdf {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational reduced() const {
        if (den == 0) {
            throw DomainError("rational with zero denominator");
        }
        std::int64_t g = std::gcd(num, den);
        if (g == 0) {
            g = 1;
        }
        std::int64_t sign = den < 0 ? -1 : 1;
        return {sign * num / g, sign * den / g};
    }

    friend bool operator==(const Rational&, const Rational&) = default;
};

// a*pi/b + c/d
struct PiExpr {
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::int64_t c = 0;
    std::int64_t d = 1;

    long double value_ld() const {
        return static_cast<long double>(a) * std::numbers::pi_v<long double> /
                   static_cast<long double>(b) +
               static_cast<long double>(c) / static_cast<long double>(d);
    }

    friend bool operator==(const PiExpr&, const PiExpr&) = default;
};

struct Decimal {
    double value = 0.0;

    friend bool operator==(const Decimal&, const Decimal&) = default;
};

namespace detail {

inline double rational_match_tolerance(double x) {
    return 4.0 * DBL_EPSILON * std::max(1.0, std::fabs(x));
}

} // namespace detail

// Continued-fraction expansion of x, truncated at the last convergent whose
// denominator does not exceed `cap`. Returns that convergent only if it
// reproduces x to within a few ulps, i.e. x "is" that rational as a double.
inline std::optional<Rational> recover_rational(double x, std::int64_t cap) {
    if (!std::isfinite(x) || cap < 1) {
        return std::nullopt;
    }
    const double tol = detail::rational_match_tolerance(x);
    long double r = x;
    std::int64_t h_prev = 1, h_prev2 = 0;
    std::int64_t k_prev = 0, k_prev2 = 1;
    for (int iter = 0; iter < 64; ++iter) {
        long double a_ld = std::floor(r);
        if (std::fabs(a_ld) > 9.0e15L) {
            break;
        }
        auto a = static_cast<std::int64_t>(a_ld);
        std::int64_t h = a * h_prev + h_prev2;
        std::int64_t k = a * k_prev + k_prev2;
        if (k > cap || k <= 0) {
            break;
        }
        if (std::fabs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
            return Rational{h, k}.reduced();
        }
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        long double frac = r - a_ld;
        if (frac < 1e-18L) {
            break;
        }
        r = 1.0L / frac;
    }
    return std::nullopt;
}

// Denominators up to this size are recovered exactly from decimals before
// evaluating floor(n*eps), so that e.g. 0.29 is not floored as 0.2899999...
inline constexpr std::int64_t kExactRecoveryCap = 1'000'000'000;

class SymbolicFraction {
  public:
    using Repr = std::variant<Rational, PiExpr, Decimal>;

    SymbolicFraction() : repr_(Rational{0, 1}) {}

    static SymbolicFraction rational(std::int64_t u, std::int64_t v) {
        if (v <= 0) {
            throw ConfigError("rational epsilon needs a positive denominator");
        }
        Rational r = Rational{u, v}.reduced();
        if (r.num < 0 || r.num >= r.den) {
            throw ConfigError("rational epsilon " + std::to_string(u) + "/" + std::to_string(v) +
                              " is outside [0, 1)");
        }
        return SymbolicFraction(r);
    }

    static SymbolicFraction pi_expr(std::int64_t a, std::int64_t b, std::int64_t c = 0,
                                    std::int64_t d = 1) {
        if (b <= 0 || d <= 0) {
            throw ConfigError("pi expression needs positive denominators");
        }
        if (a == 0) {
            return rational(c, d);
        }
        PiExpr e{a, b, c, d};
        long double v = e.value_ld();
        if (!(v >= 0.0L && v < 1.0L)) {
            throw ConfigError("epsilon expression evaluates outside [0, 1)");
        }
        return SymbolicFraction(e);
    }

    static SymbolicFraction decimal(double value) {
        if (!std::isfinite(value) || value < 0.0 || value >= 1.0) {
            throw ConfigError("decimal epsilon is outside [0, 1)");
        }
        return SymbolicFraction(Decimal{value});
    }

    const Repr& repr() const { return repr_; }

    bool is_rational() const { return std::holds_alternative<Rational>(repr_); }
    bool is_pi_expr() const { return std::holds_alternative<PiExpr>(repr_); }
    bool is_decimal() const { return std::holds_alternative<Decimal>(repr_); }

    double value() const { return static_cast<double>(value_ld()); }

    long double value_ld() const {
        return std::visit(
            [](const auto& r) -> long double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Rational>) {
                    return static_cast<long double>(r.num) / static_cast<long double>(r.den);
                } else if constexpr (std::is_same_v<T, PiExpr>) {
                    return r.value_ld();
                } else {
                    return r.value;
                }
            },
            repr_);
    }

    // floor(n * eps), exact for rationals and recoverable decimals.
    std::int64_t floor_times(std::int64_t n) const {
        if (const auto* r = std::get_if<Rational>(&repr_)) {
            return floor_div(n * r->num, r->den);
        }
        if (const auto* d = std::get_if<Decimal>(&repr_)) {
            if (auto exact = recover_rational(d->value, kExactRecoveryCap)) {
                return floor_div(n * exact->num, exact->den);
            }
            return static_cast<std::int64_t>(
                std::floor(static_cast<long double>(n) * static_cast<long double>(d->value)));
        }
        const auto& e = std::get<PiExpr>(repr_);
        std::int64_t nc = n * e.c;
        std::int64_t whole = floor_div(nc, e.d);
        long double rest = static_cast<long double>(nc - whole * e.d) / static_cast<long double>(e.d);
        long double pi_part = static_cast<long double>(n) * static_cast<long double>(e.a) *
                              std::numbers::pi_v<long double> / static_cast<long double>(e.b);
        return whole + static_cast<std::int64_t>(std::floor(pi_part + rest));
    }

    std::string to_string() const {
        return std::visit(
            [](const auto& r) -> std::string {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Rational>) {
                    return std::to_string(r.num) + "/" + std::to_string(r.den);
                } else if constexpr (std::is_same_v<T, PiExpr>) {
                    std::string s;
                    if (r.a == -1) {
                        s = "-";
                    } else if (r.a != 1) {
                        s = std::to_string(r.a) + "*";
                    }
                    s += "pi";
                    if (r.b != 1) {
                        s += "/" + std::to_string(r.b);
                    }
                    if (r.c != 0) {
                        s += (r.c > 0 ? "+" : "-") + std::to_string(r.c > 0 ? r.c : -r.c) + "/" +
                             std::to_string(r.d);
                    }
                    return s;
                } else {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.17g", r.value);
                    return buf;
                }
            },
            repr_);
    }

    friend bool operator==(const SymbolicFraction&, const SymbolicFraction&) = default;

  private:
    explicit SymbolicFraction(Repr r) : repr_(r) {}

    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) {
            --q;
        }
        return q;
    }

    Repr repr_;
};

} // namespace wscs_rdf
