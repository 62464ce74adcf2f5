#pragma once

// Reverse water-filling over one period of a memoryless WSCS Gaussian source.
//
// Each of the N_p decimated components with variance s_m receives distortion
// D_m = min(s_m, theta); theta is the water level at which the average of the
// D_m meets the budget. The rate is (1 / 2N_p) * sum log2(s_m / D_m) bits per
// sample.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wscs_rdf/error.hpp"
#include "wscs_rdf/numeric.hpp"
#include "wscs_rdf/variance_model.hpp"

namespace wscs_rdf {

struct WaterfillSolution {
    double theta = 0.0;
    std::vector<double> per_component_D;
    double rate_bits = 0.0;
    double achieved_D = 0.0;
    int iterations = 0;
};

struct WaterfillOptions {
    double tolerance = 1e-10; // relative, on the achieved distortion
    int max_iterations = 200;
};

inline double distortion_from_theta(const DtVariancePeriod& variances, double theta) {
    if (!(theta >= 0.0)) {
        throw DomainError("water level must be non-negative");
    }
    CompensatedSum sum;
    for (double s : variances.values()) {
        sum.add(std::min(s, theta));
    }
    return sum.value() / static_cast<double>(variances.period());
}

namespace detail {

inline double rate_bits(const DtVariancePeriod& variances, const std::vector<double>& per_component_D) {
    CompensatedSum sum;
    for (std::size_t m = 0; m < variances.period(); ++m) {
        const double dm = per_component_D[m];
        if (dm < variances[m]) {
            sum.add(std::log2(variances[m] / dm));
        }
    }
    return sum.value() / (2.0 * static_cast<double>(variances.period()));
}

inline WaterfillSolution make_solution(const DtVariancePeriod& variances, double theta, int iterations) {
    WaterfillSolution sol;
    sol.theta = theta;
    sol.iterations = iterations;
    sol.per_component_D.reserve(variances.period());
    for (double s : variances.values()) {
        sol.per_component_D.push_back(std::min(s, theta));
    }
    sol.achieved_D = mean(sol.per_component_D);
    sol.rate_bits = rate_bits(variances, sol.per_component_D);
    return sol;
}

} // namespace detail

/// Re-evaluates the rate formula for a given allocation.
inline double rate_from_solution(const DtVariancePeriod& variances, const WaterfillSolution& solution) {
    if (solution.per_component_D.size() != variances.period()) {
        throw DomainError("allocation length does not match the variance period");
    }
    for (std::size_t m = 0; m < variances.period(); ++m) {
        const double dm = solution.per_component_D[m];
        if (!(dm > 0.0) || dm > variances[m]) {
            throw DomainError("per-component distortion must lie in (0, sigma_m^2]");
        }
    }
    return detail::rate_bits(variances, solution.per_component_D);
}

/// Finds theta by bisection on [0, max sigma^2] so that the mean allocated
/// distortion matches `D` to a relative tolerance. Budgets at or above the
/// mean variance give the zero-rate allocation D_m = sigma_m^2; budgets below
/// the smallest variance give theta = D exactly.
inline WaterfillSolution solve_reverse_waterfill(const DtVariancePeriod& variances, double D,
                                                 WaterfillOptions options = {}) {
    if (!std::isfinite(D) || !(D > 0.0)) {
        throw DomainError("distortion budget must be positive and finite");
    }
    const double mean_variance = mean(variances.values());
    if (D >= mean_variance) {
        WaterfillSolution sol = detail::make_solution(variances, variances.max(), 0);
        sol.theta = D;
        sol.rate_bits = 0.0;
        return sol;
    }
    if (D <= variances.min()) {
        return detail::make_solution(variances, D, 0);
    }

    double lo = 0.0;
    double hi = variances.max();
    double theta = 0.5 * (lo + hi);
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        theta = 0.5 * (lo + hi);
        const double d = distortion_from_theta(variances, theta);
        if (std::fabs(d - D) <= options.tolerance * D) {
            break;
        }
        if (d < D) {
            lo = theta;
        } else {
            hi = theta;
        }
    }
    WaterfillSolution sol = detail::make_solution(variances, theta, it);
    if (std::fabs(sol.achieved_D - D) > std::max(options.tolerance * D, 64.0 * DBL_EPSILON * D)) {
        throw NumericalError("reverse water-filling did not reach the distortion budget");
    }
    return sol;
}

} // namespace wscs_rdf
