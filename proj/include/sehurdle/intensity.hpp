#pragma once

#include "sehurdle/decay.hpp"
#include "sehurdle/timeline.hpp"

#include <optional>
#include <span>

namespace sehurdle {

inline constexpr double kSeasonalPeriod = 365.25;

struct BaselineTerms {
    bool linear{false};
    bool quadratic{false};
    bool seasonal{false};

    friend bool operator==(const BaselineTerms&, const BaselineTerms&) = default;
};

/// log B_t = beta0 + beta1 t~ + beta2 t~^2 + a1 sin(2 pi t / omega) + a2 cos(2 pi t / omega),
/// with t~ = t / t_ref. Inactive terms are ignored whatever their stored value.
struct BaselineParams {
    double beta0{0.0};
    double beta1{0.0};
    double beta2{0.0};
    double a1{0.0};
    double a2{0.0};
    double omega{kSeasonalPeriod};
    BaselineTerms terms{};
};

struct ShotNoiseParams {
    double alpha{0.0};
    DecayKernel kernel{DecayKernel::geometric(2.0)};
};

/// Event-day driving process X_t = B_t + S_t.
struct HurdleParams {
    BaselineParams baseline{};
    std::optional<ShotNoiseParams> shot{};
};

enum class CountLink { self_exciting, self_inhibiting };

/// Count-side driving process X^c_t = beta_c + alpha_c sum_i Y_i g^c(t - t_i)
/// with a shifted geometric g^c of mean mu_c.
struct CountDrivingParams {
    double beta_c{1.0};
    double alpha_c{0.0};
    double mu_c{2.0};
    CountLink link{CountLink::self_exciting};
};

struct CountDrivingValue {
    double x;
    double s;
};

[[nodiscard]] double baseline(long t, long t_ref, const BaselineParams& p);
[[nodiscard]] double log_baseline(long t, long t_ref, const BaselineParams& p);

// S_t over events strictly before t. When `marks` is given, marks[i] replaces
// alpha as the magnitude of event i (the count model uses alpha_c * Y_i).
// Lags beyond the kernel's truncation horizon contribute nothing.
[[nodiscard]] double shot_noise(long t, const EventHistory& h, const ShotNoiseParams& p,
                                std::span<const double> marks = {});

[[nodiscard]] double driving(long t, long t_ref, const EventHistory& h, const HurdleParams& p);

// p = 1 - exp(-x)
[[nodiscard]] double hurdle_prob(double x);
// x = -log(1 - p), inverse of hurdle_prob
[[nodiscard]] double hurdle_transform(double p);

// Link from X^c to the zeta exponent s; result always > 1 for x > 0.
[[nodiscard]] double count_link(double x, CountLink link);
[[nodiscard]] CountDrivingValue count_driving(long t, const EventHistory& h, const CountDrivingParams& p);

/// Evaluates X_t for many days against a fixed parameter set, caching the
/// decay kernel up to its truncation horizon.
class HurdleIntensity {
public:
    // Kernel lags beyond max_lag are treated as zero; pass the data length.
    HurdleIntensity(HurdleParams params, long t_ref, long max_lag = kMaxKernelLag);

    [[nodiscard]] const HurdleParams& params() const noexcept { return params_; }
    [[nodiscard]] long t_ref() const noexcept { return t_ref_; }

    [[nodiscard]] double baseline(long t) const;
    // Shot noise from events of h with day < t.
    [[nodiscard]] double shot_noise(long t, const EventHistory& h) const;
    [[nodiscard]] double driving(long t, const EventHistory& h) const { return baseline(t) + shot_noise(t, h); }
    [[nodiscard]] double probability(long t, const EventHistory& h) const { return hurdle_prob(driving(t, h)); }

private:
    HurdleParams params_;
    long t_ref_;
    std::optional<KernelTable> table_;
};

/// Count-side counterpart of HurdleIntensity.
class CountIntensity {
public:
    explicit CountIntensity(CountDrivingParams params, long max_lag = kMaxKernelLag);

    [[nodiscard]] const CountDrivingParams& params() const noexcept { return params_; }
    [[nodiscard]] CountDrivingValue evaluate(long t, const EventHistory& h) const;

private:
    CountDrivingParams params_;
    KernelTable table_;
};

/// State for forecasting the wait to the next event day from day t0, assuming
/// no events after t0.
class SurvivalContext {
public:
    SurvivalContext(HurdleParams params, long t_ref, const EventHistory& history, long t0);

    [[nodiscard]] long t0() const noexcept { return t0_; }
    [[nodiscard]] double driving(long delta) const; // X_{t0+delta}
    [[nodiscard]] double probability(long delta) const { return hurdle_prob(driving(delta)); }

private:
    HurdleIntensity intensity_;
    EventHistory history_;
    long t0_;
};

// V_{t0}(u) = exp(-sum_{delta=1..u} X_{t0+delta})
[[nodiscard]] double survival(const SurvivalContext& ctx, long u);
// V_{t0}(1..u_max)
[[nodiscard]] std::vector<double> survival_curve(const SurvivalContext& ctx, long u_max);

struct ExpectedWait {
    double days;
    long horizon;          // last u summed
    double tail_estimate;  // V(h) e^{-x}/(1 - e^{-x}) with x = X at the horizon
};

// 1 + sum_{u=1..cap} V(u); throws HorizonError when V(cap) >= 1e-8.
[[nodiscard]] ExpectedWait expected_wait(const SurvivalContext& ctx, long horizon_cap = 1'000'000);

} // namespace sehurdle
