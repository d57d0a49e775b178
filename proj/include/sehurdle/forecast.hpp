#pragma once

#include "sehurdle/estimate.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sehurdle {

inline constexpr double kProbabilityFloor = 1e-12;

struct ForecastRecord {
    long day;           // 1-based index into the full series
    Date date;
    double p_hat;       // model hurdle probability
    double pi_hat;      // reference hurdle probability
    double s_t;         // model zeta exponent in effect
    double s_ref;       // reference zeta exponent
    int event;          // E_t
    int count;          // Y_t
    double g_contrib;
    double gc_contrib;  // 0 on non-event days
    bool refit_failed{false}; // the refit after this day diverged; parameters were kept
};

struct ForecastOptions {
    HurdleModelSpec hurdle{hurdle_spec_by_name("SE1")};
    CountModelSpec count{CountVariant::constant};
    HurdleModelSpec reference_hurdle{hurdle_spec_by_name("BL1")};
    CountModelSpec reference_count{CountVariant::constant};
    long refit_every{1};
    std::uint64_t seed{1};
    int starts{5};      // multi-starts for the initial training fit; refits are warm-started
    MinimizeOptions minimize{};
};

struct BacktestReport {
    std::vector<ForecastRecord> records;
    double g{0.0};
    double g_count{0.0};
    long training_days{0};
    long refit_every{1};
    std::vector<long> refit_days;   // days after which a refit was attempted
    long failed_refits{0};
    std::vector<std::string> warnings;
    FittedHurdle initial_hurdle;
    FittedCount initial_count;
};

/// Trains on days before `split`, then walks the test window one day at a
/// time: predict from parameters fitted through t-1, observe day t, and refit
/// every `refit_every` days. The trend reference stays at the training length.
[[nodiscard]] BacktestReport rolling_forecast(const DailySeries& series, Date split, const ForecastOptions& opts = {});
[[nodiscard]] BacktestReport rolling_forecast(const DailySeries& series, long split_day,
                                              const ForecastOptions& opts = {});

// E log(p/pi) + (1 - E) log((1 - p)/(1 - pi)); probabilities must lie in (0, 1).
[[nodiscard]] double hurdle_gain_term(int event, double p_hat, double pi_hat);
// log(f(y)/h(y)) for zeta densities with exponents s and s_ref.
[[nodiscard]] double count_gain_term(long y, double s, double s_ref);

// Recomputed from each record's probabilities and exponents.
[[nodiscard]] double log_gain_hurdle(std::span<const ForecastRecord> records);
[[nodiscard]] double log_gain_count(std::span<const ForecastRecord> records);

} // namespace sehurdle
