#pragma once

// Monte Carlo simulation of the RDF-achieving backward channel S = S_hat + W.
//
// For a water-filling allocation D_m, the reproduction S_hat[i] and the
// error W[i] are independent zero-mean Gaussians with variances
// sigma_m^2 - D_m and D_m, where m = i mod N_p. Simulating the pair gives
// empirical distortion, information-density and information-spectrum
// estimates that can be compared against the closed-form rate.
//
// Random numbers: every (purpose, trial) pair owns a std::mt19937_64 stream
// seeded through splitmix64 from the user seed; normals come from
// std::normal_distribution<double>. Results are bit-reproducible for a given
// standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wscs_rdf/error.hpp"
#include "wscs_rdf/numeric.hpp"
#include "wscs_rdf/parallel.hpp"
#include "wscs_rdf/variance_model.hpp"
#include "wscs_rdf/waterfill.hpp"

namespace wscs_rdf {

inline constexpr const char* kRngAlgorithm =
    "mt19937_64 per trial, seeded by splitmix64(seed, purpose, trial); std::normal_distribution<double>";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class StreamPurpose : std::uint64_t { Channel = 1, UniformIntegrability = 2 };

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    s = splitmix64(s ^ index);
    return std::mt19937_64(s);
}

class BackwardChannelSpec {
  public:
    BackwardChannelSpec(DtVariancePeriod variances, WaterfillSolution solution)
        : variances_(std::move(variances)), solution_(std::move(solution)) {
        if (solution_.per_component_D.size() != variances_.period()) {
            throw DomainError("allocation length does not match the variance period");
        }
        reproduction_.resize(variances_.period());
        for (std::size_t m = 0; m < variances_.period(); ++m) {
            const double dm = solution_.per_component_D[m];
            if (!(dm > 0.0)) {
                throw DomainError("per-component distortion must be positive");
            }
            const double r = variances_[m] - dm;
            if (r < 0.0) {
                throw NumericalError("negative reproduction variance: allocation exceeds source variance");
            }
            reproduction_[m] = r;
        }
    }

    static BackwardChannelSpec from_distortion(const DtVariancePeriod& variances, double D,
                                               WaterfillOptions options = {}) {
        return BackwardChannelSpec(variances, solve_reverse_waterfill(variances, D, options));
    }

    const DtVariancePeriod& variances() const { return variances_; }
    const WaterfillSolution& solution() const { return solution_; }
    std::span<const double> reproduction_variances() const { return reproduction_; }
    std::size_t period() const { return variances_.period(); }

  private:
    DtVariancePeriod variances_;
    WaterfillSolution solution_;
    std::vector<double> reproduction_;
};

namespace detail {

// Draws k backward-channel samples and calls fn(m, s, s_hat) for each.
template <typename Fn>
void draw_backward_block(const BackwardChannelSpec& spec, std::size_t k, std::mt19937_64& rng, Fn&& fn) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t np = spec.period();
    const auto repro = spec.reproduction_variances();
    const auto& dm = spec.solution().per_component_D;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t m = i % np;
        const double s_hat = std::sqrt(repro[m]) * normal(rng);
        const double w = std::sqrt(dm[m]) * normal(rng);
        fn(m, s_hat + w, s_hat);
    }
}

inline void check_run_size(std::size_t k, std::size_t trials) {
    if (k < 1) {
        throw DomainError("blocklength k must be at least 1");
    }
    if (trials < 1) {
        throw DomainError("trial count must be at least 1");
    }
}

} // namespace detail

/// (1/l) * sum (s[i] - s_hat[i])^2 over a block.
inline double block_mse(std::span<const double> s, std::span<const double> s_hat) {
    if (s.size() != s_hat.size() || s.empty()) {
        throw DomainError("blocks must be non-empty and of equal length");
    }
    CompensatedSum sum;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = s[i] - s_hat[i];
        sum.add(e * e);
    }
    return sum.value() / static_cast<double>(s.size());
}

struct DistortionEstimate {
    double emp_mse = 0.0;
    double half_width = 0.0; // 3 standard errors across trials
    double std_err = 0.0;
    std::vector<double> per_trial_mse;
    std::vector<double> per_component_mse; // pooled over trials, per residue m
};

inline DistortionEstimate simulate_backward_channel(const BackwardChannelSpec& spec, std::size_t k,
                                                    std::size_t trials, std::uint64_t seed) {
    detail::check_run_size(k, trials);
    const std::size_t np = spec.period();
    std::vector<double> per_trial(trials);
    std::vector<std::vector<double>> comp_sums(trials, std::vector<double>(np, 0.0));
    std::vector<std::vector<std::size_t>> comp_counts(trials, std::vector<std::size_t>(np, 0));
    parallel_for(trials, [&](std::size_t t) {
        auto rng = make_stream(seed, StreamPurpose::Channel, t);
        CompensatedSum total;
        std::vector<CompensatedSum> comp(np);
        detail::draw_backward_block(spec, k, rng, [&](std::size_t m, double s, double s_hat) {
            const double e = s - s_hat;
            total.add(e * e);
            comp[m].add(e * e);
            ++comp_counts[t][m];
        });
        per_trial[t] = total.value() / static_cast<double>(k);
        for (std::size_t m = 0; m < np; ++m) {
            comp_sums[t][m] = comp[m].value();
        }
    });

    DistortionEstimate est;
    est.emp_mse = mean(per_trial);
    est.std_err = sample_stddev(per_trial) / std::sqrt(static_cast<double>(trials));
    est.half_width = 3.0 * est.std_err;
    est.per_component_mse.assign(np, 0.0);
    for (std::size_t m = 0; m < np; ++m) {
        CompensatedSum s;
        std::size_t count = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            s.add(comp_sums[t][m]);
            count += comp_counts[t][m];
        }
        est.per_component_mse[m] = count > 0 ? s.value() / static_cast<double>(count) : 0.0;
    }
    est.per_trial_mse = std::move(per_trial);
    return est;
}

/// One realization of Z_k = (1/k) sum_i [log2 p_W(S[i] - S_hat[i]) - log2 p_S(S[i])]
/// per trial. Components with D_m = sigma_m^2 carry no information and are
/// left out of the sum.
inline std::vector<double> information_density_samples(const BackwardChannelSpec& spec, std::size_t k,
                                                       std::size_t trials, std::uint64_t seed) {
    detail::check_run_size(k, trials);
    const std::size_t np = spec.period();
    const auto& dm = spec.solution().per_component_D;
    std::vector<bool> active(np);
    bool any_active = false;
    for (std::size_t m = 0; m < np; ++m) {
        active[m] = dm[m] < spec.variances()[m];
        any_active = any_active || active[m];
    }
    std::vector<double> out(trials, 0.0);
    if (!any_active) {
        return out;
    }
    const double inv_ln2 = 1.0 / std::numbers::ln2;
    const double log2_2pi = std::log2(2.0 * std::numbers::pi);
    parallel_for(trials, [&](std::size_t t) {
        auto rng = make_stream(seed, StreamPurpose::Channel, t);
        CompensatedSum z;
        detail::draw_backward_block(spec, k, rng, [&](std::size_t m, double s, double s_hat) {
            if (!active[m]) {
                return;
            }
            const double w = s - s_hat;
            const double var = spec.variances()[m];
            const double log_cond = -0.5 * (log2_2pi + std::log2(dm[m])) - 0.5 * w * w / dm[m] * inv_ln2;
            const double log_marg = -0.5 * (log2_2pi + std::log2(var)) - 0.5 * s * s / var * inv_ln2;
            z.add(log_cond - log_marg);
        });
        out[t] = z.value() / static_cast<double>(k);
    });
    return out;
}

inline constexpr double kDefaultPlimsupDelta = 0.01;
inline constexpr std::size_t kDefaultBetaGridPoints = 512;

/// Finite-sample stand-in for the limit superior in probability: the
/// smallest beta on the grid with empirical Pr(Z_k > beta) < delta for every
/// supplied k at or above the median k. An empty grid means 512 points over
/// [min Z, max Z].
inline double empirical_plimsup(const std::map<std::size_t, std::vector<double>>& samples_by_k,
                                double delta = kDefaultPlimsupDelta, std::vector<double> beta_grid = {}) {
    if (samples_by_k.size() < 3) {
        throw DiagnosticError("empirical p-limsup needs at least three distinct blocklengths");
    }
    double zmin = INFINITY;
    double zmax = -INFINITY;
    for (const auto& [k, zs] : samples_by_k) {
        if (zs.size() < 100) {
            throw DiagnosticError("empirical p-limsup needs at least 100 samples per blocklength (k=" +
                                  std::to_string(k) + ")");
        }
        for (double z : zs) {
            if (!std::isfinite(z)) {
                throw DiagnosticError("information density samples must be finite");
            }
            zmin = std::min(zmin, z);
            zmax = std::max(zmax, z);
        }
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("tail probability delta must lie in (0, 1]");
    }
    if (beta_grid.empty()) {
        beta_grid.resize(kDefaultBetaGridPoints);
        for (std::size_t j = 0; j < kDefaultBetaGridPoints; ++j) {
            beta_grid[j] = zmin + (zmax - zmin) * static_cast<double>(j) /
                                      static_cast<double>(kDefaultBetaGridPoints - 1);
        }
        beta_grid.back() = zmax;
    }
    std::sort(beta_grid.begin(), beta_grid.end());

    std::vector<std::size_t> ks;
    for (const auto& entry : samples_by_k) {
        ks.push_back(entry.first);
    }
    const std::size_t median_k = ks[ks.size() / 2];

    for (double beta : beta_grid) {
        bool ok = true;
        for (const auto& [k, zs] : samples_by_k) {
            if (k < median_k) {
                continue;
            }
            const auto exceed = std::count_if(zs.begin(), zs.end(), [beta](double z) { return z > beta; });
            if (static_cast<double>(exceed) / static_cast<double>(zs.size()) >= delta) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return beta;
        }
    }
    return beta_grid.back();
}

struct UiPoint {
    std::size_t k = 0;
    double mean = 0.0;    // estimate of E{[(1/k) sum S^2]^2}
    double std_err = 0.0;
};

struct UiDiagnostic {
    std::vector<UiPoint> per_k;
    double max_value = 0.0;
    double max_std_err = 0.0;
    double bound = 0.0; // 3 * (max sigma^2)^2
    bool within_bound = true;
};

/// Second moment of the per-block average squared magnitude, checked against
/// the l2 bound 3 * sigma_max^4 that makes the distortion measure uniformly
/// integrable.
inline UiDiagnostic uniform_integrability_diagnostic(const DtVariancePeriod& variances,
                                                     const std::vector<std::size_t>& k_list,
                                                     std::size_t trials, std::uint64_t seed) {
    if (trials < 100) {
        throw DomainError("uniform integrability diagnostic needs at least 100 trials");
    }
    if (k_list.empty()) {
        throw DomainError("uniform integrability diagnostic needs at least one blocklength");
    }
    const std::size_t np = variances.period();
    UiDiagnostic out;
    out.bound = 3.0 * variances.max() * variances.max();
    for (std::size_t kk = 0; kk < k_list.size(); ++kk) {
        const std::size_t k = k_list[kk];
        if (k < 1) {
            throw DomainError("blocklength k must be at least 1");
        }
        std::vector<double> vals(trials);
        parallel_for(trials, [&](std::size_t t) {
            auto rng = make_stream(seed, StreamPurpose::UniformIntegrability, kk * trials + t);
            std::normal_distribution<double> normal(0.0, 1.0);
            CompensatedSum sum;
            for (std::size_t i = 0; i < k; ++i) {
                const double s = std::sqrt(variances[i % np]) * normal(rng);
                sum.add(s * s);
            }
            const double d = sum.value() / static_cast<double>(k);
            vals[t] = d * d;
        });
        UiPoint pt{k, mean(vals), sample_stddev(vals) / std::sqrt(static_cast<double>(trials))};
        if (pt.mean > out.max_value || kk == 0) {
            out.max_value = pt.mean;
            out.max_std_err = pt.std_err;
        }
        if (pt.mean > out.bound + 3.0 * pt.std_err) {
            out.within_bound = false;
        }
        out.per_k.push_back(pt);
    }
    return out;
}

struct McConfig {
    std::size_t k = 10'000;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::vector<std::size_t> plimsup_k_list; // empty: {k/100, k/10, k}
    std::size_t plimsup_trials = 100;
    double plimsup_delta = kDefaultPlimsupDelta;
    std::vector<std::size_t> ui_k_list; // empty: {1, 10, 100, k}
    std::size_t ui_trials = 200;
};

struct McReport {
    std::size_t k = 0;
    std::size_t trials = 0;
    double emp_mse = 0.0;
    double emp_mse_half_width = 0.0;
    double info_density_mean = 0.0;
    double info_density_std = 0.0;
    double info_density_std_err = 0.0;
    double emp_plimsup = 0.0;
    double ui_l2_bound = 0.0; // largest estimated E{d(S,0)^2} over the k list
    double ui_bound_limit = 0.0;
    bool ui_within_bound = true;
    double rate_bits = 0.0; // closed-form water-filling rate for reference
    double target_D = 0.0;
    std::uint64_t seed = 0;
    std::string rng_algorithm = kRngAlgorithm;
    std::string plimsup_note = "finite-sample surrogate: smallest grid beta with Pr(Z_k > beta) < delta";
    double plimsup_delta = kDefaultPlimsupDelta;
};

inline McReport run_monte_carlo(const BackwardChannelSpec& spec, const McConfig& cfg) {
    McReport r;
    r.k = cfg.k;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.rate_bits = spec.solution().rate_bits;
    r.target_D = spec.solution().achieved_D;
    r.plimsup_delta = cfg.plimsup_delta;

    const DistortionEstimate dist = simulate_backward_channel(spec, cfg.k, cfg.trials, cfg.seed);
    r.emp_mse = dist.emp_mse;
    r.emp_mse_half_width = dist.half_width;

    const std::vector<double> z = information_density_samples(spec, cfg.k, cfg.trials, cfg.seed);
    r.info_density_mean = mean(z);
    r.info_density_std = sample_stddev(z);
    r.info_density_std_err = r.info_density_std / std::sqrt(static_cast<double>(z.size()));

    std::vector<std::size_t> ks = cfg.plimsup_k_list;
    if (ks.empty()) {
        ks = {std::max<std::size_t>(1, cfg.k / 100), std::max<std::size_t>(1, cfg.k / 10), cfg.k};
    }
    std::map<std::size_t, std::vector<double>> by_k;
    for (std::size_t k : ks) {
        // Offset the seed so the largest-k batch is not a copy of the run above.
        by_k[k] = information_density_samples(spec, k, cfg.plimsup_trials, splitmix64(cfg.seed ^ k));
    }
    r.emp_plimsup = empirical_plimsup(by_k, cfg.plimsup_delta);

    std::vector<std::size_t> ui_ks = cfg.ui_k_list;
    if (ui_ks.empty()) {
        ui_ks = {1, 10, 100, cfg.k};
    }
    const UiDiagnostic ui = uniform_integrability_diagnostic(spec.variances(), ui_ks, cfg.ui_trials, cfg.seed);
    r.ui_l2_bound = ui.max_value;
    r.ui_bound_limit = ui.bound;
    r.ui_within_bound = ui.within_bound;
    return r;
}

} // namespace wscs_rdf
