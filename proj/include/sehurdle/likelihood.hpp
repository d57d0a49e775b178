#pragma once

#include "sehurdle/decay.hpp"
#include "sehurdle/intensity.hpp"
#include "sehurdle/timeline.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace sehurdle {

/// Event-day (hurdle) model: which baseline terms are free and whether a
/// shot-noise term with the given kernel family is present.
struct HurdleModelSpec {
    std::string name;
    BaselineTerms terms{};
    bool self_exciting{false};
    KernelFamily kernel{KernelFamily::negative_binomial};

    [[nodiscard]] int free_parameters() const noexcept;
    [[nodiscard]] std::vector<std::string> parameter_names() const;

    friend bool operator==(const HurdleModelSpec&, const HurdleModelSpec&) = default;
};

// BL1..BL6 (baseline only) and SE1..SE6 (same baselines plus alpha, mu, r).
[[nodiscard]] HurdleModelSpec hurdle_spec_by_name(std::string_view name);
[[nodiscard]] std::vector<std::string> hurdle_spec_names();

enum class CountVariant { constant, self_exciting, self_inhibiting };

struct CountModelSpec {
    CountVariant variant{CountVariant::constant};

    [[nodiscard]] std::string name() const; // "Cz" | "Cse" | "Csi"
    [[nodiscard]] int free_parameters() const noexcept { return variant == CountVariant::constant ? 1 : 3; }
    [[nodiscard]] std::vector<std::string> parameter_names() const;

    friend bool operator==(const CountModelSpec&, const CountModelSpec&) = default;
};

[[nodiscard]] CountModelSpec count_spec_by_name(std::string_view name);

// Constant exponent `s` for Cz; (beta_c, alpha_c, mu_c) for Cse / Csi.
struct CountParams {
    double s{2.0};
    double beta_c{1.0};
    double alpha_c{0.0};
    double mu_c{2.0};
};

// Pins the spec's inactive terms and attaches its kernel family.
[[nodiscard]] HurdleParams conform(const HurdleModelSpec& spec, HurdleParams params);
[[nodiscard]] CountDrivingParams count_driving_params(const CountModelSpec& spec, const CountParams& params);

// log(e^x - 1) without overflow or cancellation.
[[nodiscard]] double log_expm1(double x);

/// Event-day log-likelihood for a fixed series, evaluated through the
/// event-day sum form: sum_i log(e^{X_{t_i}} - 1) - sum_t B_t - sum_i alpha G(T - t_i).
class HurdleLikelihood {
public:
    HurdleLikelihood(const DailySeries& series, long t_ref);

    [[nodiscard]] double operator()(const HurdleParams& params) const;
    [[nodiscard]] long length() const noexcept { return length_; }
    [[nodiscard]] long t_ref() const noexcept { return t_ref_; }
    [[nodiscard]] const EventHistory& history() const noexcept { return history_; }

private:
    [[nodiscard]] double baseline_sum(const BaselineParams& p) const;

    long length_;
    long t_ref_;
    EventHistory history_;
    std::vector<double> sin_;
    std::vector<double> cos_;
};

// t_ref = 0 means the series length.
[[nodiscard]] double hurdle_loglik(const DailySeries& series, const HurdleModelSpec& spec,
                                   const HurdleParams& params, long t_ref = 0);
// Day-by-day Bernoulli form sum_t E_t log p_t + (1 - E_t) log(1 - p_t).
[[nodiscard]] double hurdle_loglik_naive(const DailySeries& series, const HurdleModelSpec& spec,
                                         const HurdleParams& params, long t_ref = 0);

// Driving process X_1..X_T along the realized history.
[[nodiscard]] std::vector<double> driving_path(const DailySeries& series, const HurdleParams& params, long t_ref = 0);
[[nodiscard]] std::vector<double> hurdle_probabilities(const DailySeries& series, const HurdleParams& params,
                                                       long t_ref = 0);

/// Zeta exponent in effect on day t given the history before t, clamped to
/// the working range.
[[nodiscard]] double count_exponent(long t, const EventHistory& history, const CountModelSpec& spec,
                                    const CountParams& params);

class CountLikelihood {
public:
    explicit CountLikelihood(const DailySeries& series);

    [[nodiscard]] double operator()(const CountModelSpec& spec, const CountParams& params) const;
    [[nodiscard]] const EventHistory& history() const noexcept { return history_; }
    [[nodiscard]] double sum_log_counts() const noexcept { return sum_log_counts_; }

private:
    EventHistory history_;
    std::vector<double> log_counts_;
    double sum_log_counts_{0.0};
};

[[nodiscard]] double count_loglik(const DailySeries& series, const CountModelSpec& spec, const CountParams& params);

// f*(y) = 1 - p for y = 0, p y^{-s} / zeta(s) otherwise.
[[nodiscard]] double full_density(long y, double p, double s);

[[nodiscard]] double aic(double loglik, int k);

struct WindowInfo {
    Date start;
    long days;
    long t_ref;
};

struct StartReport {
    int index;
    double loglik;
    long evaluations;
    bool converged;
    std::string error; // empty when the start ran to completion
};

struct ConvergenceReport {
    std::string method;
    bool converged{false};
    long iterations{0};
    long evaluations{0};
    int best_start{0};
    std::vector<StartReport> starts;
};

struct FittedHurdle {
    HurdleModelSpec spec;
    HurdleParams params;
    double loglik;
    double aic;
    int free_parameters;
    WindowInfo window;
    ConvergenceReport report;
};

struct FittedCount {
    CountModelSpec spec;
    CountParams params;
    double loglik;
    double aic;
    int free_parameters;
    WindowInfo window;
    ConvergenceReport report;
    bool boundary{false}; // zeta MLE pinned at the exponent cap
};

} // namespace sehurdle
