#include "sehurdle/forecast.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace sehurdle {

namespace {

double clamp_probability(double p) { return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor); }

// Current parameters of one hurdle model plus its evaluator.
struct HurdleState {
    HurdleModelSpec spec;
    HurdleParams params;
    std::optional<HurdleIntensity> intensity;
    long t_ref;
    long max_lag;

    void set(HurdleParams p) {
        params = std::move(p);
        intensity.emplace(params, t_ref, max_lag);
    }
    [[nodiscard]] double predict(long t, const EventHistory& h) const {
        return clamp_probability(intensity->probability(t, h));
    }
};

struct CountState {
    CountModelSpec spec;
    CountParams params;
    std::optional<CountIntensity> intensity;
    long max_lag;

    void set(const CountParams& p) {
        params = p;
        if (spec.variant == CountVariant::constant) {
            intensity.reset();
        } else {
            intensity.emplace(count_driving_params(spec, params), max_lag);
        }
    }
    [[nodiscard]] double exponent(long t, const EventHistory& h) const {
        if (!intensity) {
            return clamp_zeta_exponent(params.s);
        }
        return clamp_zeta_exponent(intensity->evaluate(t, h).s);
    }
};

} // namespace

double hurdle_gain_term(int event, double p_hat, double pi_hat) {
    if (!(p_hat > 0.0 && p_hat < 1.0) || !(pi_hat > 0.0 && pi_hat < 1.0)) {
        throw DomainError("gain scoring needs probabilities strictly inside (0, 1)");
    }
    if (event != 0) {
        return std::log(p_hat) - std::log(pi_hat);
    }
    return std::log1p(-p_hat) - std::log1p(-pi_hat);
}

double count_gain_term(long y, double s, double s_ref) {
    if (y < 1) {
        throw DomainError("count gain needs y >= 1 (got " + std::to_string(y) + ")");
    }
    if (s == s_ref) {
        return 0.0;
    }
    return zeta_log_pmf(y, s) - zeta_log_pmf(y, s_ref);
}

double log_gain_hurdle(std::span<const ForecastRecord> records) {
    double g = 0.0;
    for (const auto& r : records) {
        g += hurdle_gain_term(r.event, r.p_hat, r.pi_hat);
    }
    return g;
}

double log_gain_count(std::span<const ForecastRecord> records) {
    double g = 0.0;
    for (const auto& r : records) {
        if (r.event != 0) {
            g += count_gain_term(r.count, r.s_t, r.s_ref);
        }
    }
    return g;
}

BacktestReport rolling_forecast(const DailySeries& series, Date split, const ForecastOptions& opts) {
    return rolling_forecast(series, series.day_of(split), opts);
}

BacktestReport rolling_forecast(const DailySeries& series, long split_day, const ForecastOptions& opts) {
    const long big_t = series.length();
    const long n_train = split_day - 1;
    if (n_train < 1 || split_day > big_t) {
        throw DomainError("split must leave at least one day on each side (split day " + std::to_string(split_day) +
                          " of " + std::to_string(big_t) + ")");
    }
    if (opts.refit_every < 1) {
        throw DomainError("refit_every must be >= 1");
    }

    const auto training = series.slice(1, n_train);
    FitOptions fit_opts;
    fit_opts.starts = opts.starts;
    fit_opts.seed = opts.seed;
    fit_opts.minimize = opts.minimize;
    fit_opts.t_ref = n_train;
    CountFitOptions count_opts;
    count_opts.starts = opts.starts;
    count_opts.seed = opts.seed;
    count_opts.minimize = opts.minimize;

    BacktestReport report{};
    report.training_days = n_train;
    report.refit_every = opts.refit_every;
    report.initial_hurdle = fit_hurdle(training, opts.hurdle, fit_opts);
    report.initial_count = fit_count(training, opts.count, count_opts);

    const bool same_hurdle = opts.reference_hurdle == opts.hurdle;
    const bool same_count = opts.reference_count == opts.count;

    HurdleState model{opts.hurdle, {}, {}, n_train, big_t};
    HurdleState reference{opts.reference_hurdle, {}, {}, n_train, big_t};
    CountState count_model{opts.count, {}, {}, big_t};
    CountState count_reference{opts.reference_count, {}, {}, big_t};
    model.set(report.initial_hurdle.params);
    count_model.set(report.initial_count.params);
    reference.set(same_hurdle ? report.initial_hurdle.params
                              : fit_hurdle(training, opts.reference_hurdle, fit_opts).params);
    count_reference.set(same_count ? report.initial_count.params
                                   : fit_count(training, opts.reference_count, count_opts).params);

    const auto history = to_history(series);

    // Warm-started single-start refits on days 1..t.
    fit_opts.starts = 1;
    count_opts.starts = 1;
    const auto refit_hurdle = [&](HurdleState& state, const DailySeries& window, long t, bool& failed) {
        fit_opts.warm_start = state.params;
        try {
            auto fitted = fit_hurdle(window, state.spec, fit_opts);
            if (!std::isfinite(fitted.loglik)) {
                throw FitError("non-finite log-likelihood");
            }
            state.set(std::move(fitted.params));
        } catch (const std::exception& e) {
            failed = true;
            report.warnings.push_back("day " + std::to_string(t) + ": " + state.spec.name +
                                      " refit failed, keeping previous parameters (" + e.what() + ")");
        }
    };
    const auto refit_count = [&](CountState& state, const DailySeries& window, long t, bool& failed) {
        count_opts.warm_start = state.params;
        try {
            auto fitted = fit_count(window, state.spec, count_opts);
            if (!std::isfinite(fitted.loglik)) {
                throw FitError("non-finite log-likelihood");
            }
            state.set(fitted.params);
        } catch (const std::exception& e) {
            failed = true;
            report.warnings.push_back("day " + std::to_string(t) + ": " + state.spec.name() +
                                      " refit failed, keeping previous parameters (" + e.what() + ")");
        }
    };

    report.records.reserve(static_cast<std::size_t>(big_t - n_train));
    for (long t = split_day; t <= big_t; ++t) {
        ForecastRecord rec{};
        rec.day = t;
        rec.date = series.date_of(t);
        rec.p_hat = model.predict(t, history);
        rec.pi_hat = same_hurdle ? rec.p_hat : reference.predict(t, history);
        rec.s_t = count_model.exponent(t, history);
        rec.s_ref = same_count ? rec.s_t : count_reference.exponent(t, history);
        rec.count = series.count(t);
        rec.event = rec.count >= 1 ? 1 : 0;
        rec.g_contrib = hurdle_gain_term(rec.event, rec.p_hat, rec.pi_hat);
        rec.gc_contrib = rec.event != 0 ? count_gain_term(rec.count, rec.s_t, rec.s_ref) : 0.0;

        if ((t - n_train) % opts.refit_every == 0 && t < big_t) {
            report.refit_days.push_back(t);
            const auto window = series.slice(1, t);
            bool failed = false;
            refit_hurdle(model, window, t, failed);
            if (same_hurdle) {
                reference.set(model.params);
            } else {
                refit_hurdle(reference, window, t, failed);
            }
            if (window.event_day_count() > 0) {
                refit_count(count_model, window, t, failed);
                if (same_count) {
                    count_reference.set(count_model.params);
                } else {
                    refit_count(count_reference, window, t, failed);
                }
            }
            rec.refit_failed = failed;
            report.failed_refits += failed ? 1 : 0;
        }
        report.g += rec.g_contrib;
        report.g_count += rec.gc_contrib;
        report.records.push_back(rec);
    }
    return report;
}

} // namespace sehurdle
