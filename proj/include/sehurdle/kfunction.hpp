#pragma once

#include "sehurdle/simulate.hpp"
#include "sehurdle/timeline.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sehurdle {

/// Weighted K-function over a lag grid, optionally with a bootstrap envelope
/// on the centered values.
struct KFunctionCurve {
    std::vector<long> lags;
    std::vector<double> values;   // K(t)
    std::vector<double> centered; // K(t) - t
    std::vector<double> lo;       // empty unless an envelope is attached
    std::vector<double> hi;

    [[nodiscard]] bool has_envelope() const noexcept { return !lo.empty(); }
};

// 1..100
[[nodiscard]] std::vector<long> default_lags(long max_lag = 100);

/// K(t) = (T - t_max)^{-1} sum_i 1/p_i sum_{j>i} 1(t_j - t_i <= t) / p_j over
/// event-day pairs, with i restricted to t_i <= T - t_max (border correction).
/// Rows are computed in parallel and summed in event order.
[[nodiscard]] KFunctionCurve weighted_k(const DailySeries& series, std::span<const double> phat,
                                        std::span<const long> lags);
[[nodiscard]] KFunctionCurve weighted_k_serial(const DailySeries& series, std::span<const double> phat,
                                               std::span<const long> lags);

// Numerator of K(t) before dividing by T - t_max. Unchanged by appending
// zero-count days once every event already lies t_max days before the end.
[[nodiscard]] std::vector<double> k_pair_sums(const DailySeries& series, std::span<const double> phat,
                                              std::span<const long> lags);

/// Centered curves K(t) - t of n_sims series simulated from `model`, each
/// scored with its own model-implied probabilities. Replicate r uses the
/// stream make_rng(seed, r).
struct BootstrapSample {
    std::vector<long> lags;
    std::vector<std::vector<double>> curves; // [replicate][lag]

    // Type-1 (inverse empirical CDF) quantile at each lag.
    [[nodiscard]] std::vector<double> quantile(double q) const;
};

[[nodiscard]] BootstrapSample bootstrap_sample(const SimulationModel& model, long days, std::span<const long> lags,
                                               int n_sims, std::uint64_t seed);
[[nodiscard]] BootstrapSample bootstrap_sample_serial(const SimulationModel& model, long days,
                                                      std::span<const long> lags, int n_sims, std::uint64_t seed);

struct KEnvelope {
    std::vector<long> lags;
    std::vector<double> lo;
    std::vector<double> hi;
};

[[nodiscard]] KEnvelope envelope_of(const BootstrapSample& sample, double lo_q = 0.025, double hi_q = 0.975);

// Pointwise 2.5% / 97.5% quantiles of the centered bootstrap curves.
[[nodiscard]] KEnvelope bootstrap_envelope(const SimulationModel& model, long days, std::span<const long> lags,
                                           int n_sims, std::uint64_t seed, double lo_q = 0.025, double hi_q = 0.975);

void attach_envelope(KFunctionCurve& curve, const KEnvelope& envelope);

// Smallest x with empirical CDF >= q.
[[nodiscard]] double type1_quantile(std::vector<double> values, double q);

// Fraction of lags at which lo <= centered <= hi.
[[nodiscard]] double envelope_coverage(const KFunctionCurve& curve);
// Number of lags at which centered > hi.
[[nodiscard]] long lags_above_envelope(const KFunctionCurve& curve);

} // namespace sehurdle
