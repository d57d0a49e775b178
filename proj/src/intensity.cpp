#include "sehurdle/intensity.hpp"

#include "sehurdle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sehurdle {

namespace {

// Table length cap for kernels whose tail never reaches the tolerance in practice.

double sum_kernel_table(long t, const EventHistory& h, const KernelTable& table, std::span<const double> marks) {
    const auto n = h.count_before(t);
    const auto days = h.days();
    double s = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const long lag = t - days[i];
        if (lag > table.length()) {
            break;
        }
        const double w = marks.empty() ? 1.0 : marks[i];
        s += w * table.pmf(lag);
    }
    return s;
}

} // namespace

double log_baseline(long t, long t_ref, const BaselineParams& p) {
    double v = p.beta0;
    const double tt = static_cast<double>(t) / static_cast<double>(t_ref);
    if (p.terms.linear) {
        v += p.beta1 * tt;
    }
    if (p.terms.quadratic) {
        v += p.beta2 * tt * tt;
    }
    if (p.terms.seasonal) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / p.omega;
        v += p.a1 * std::sin(phase) + p.a2 * std::cos(phase);
    }
    return v;
}

double baseline(long t, long t_ref, const BaselineParams& p) {
    return std::exp(log_baseline(t, t_ref, p));
}

double shot_noise(long t, const EventHistory& h, const ShotNoiseParams& p, std::span<const double> marks) {
    if (!marks.empty() && marks.size() != h.size()) {
        throw DomainError("shot noise marks must align with the event history");
    }
    if (h.empty()) {
        return 0.0;
    }
    const long horizon = truncation_horizon(p.kernel);
    const auto n = h.count_before(t);
    const auto days = h.days();
    double s = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const long lag = t - days[i];
        if (lag > horizon) {
            break;
        }
        const double weight = marks.empty() ? p.alpha : marks[i];
        s += weight * kernel_pmf(p.kernel, lag);
    }
    return s;
}

double driving(long t, long t_ref, const EventHistory& h, const HurdleParams& p) {
    double x = baseline(t, t_ref, p.baseline);
    if (p.shot) {
        x += shot_noise(t, h, *p.shot);
    }
    return x;
}

double hurdle_prob(double x) {
    if (!(x >= 0.0)) {
        throw DomainError("driving process must be non-negative (got " + std::to_string(x) + ")");
    }
    return -std::expm1(-x);
}

double hurdle_transform(double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw DomainError("hurdle probability must lie in [0, 1)");
    }
    return -std::log1p(-p);
}

double count_link(double x, CountLink link) {
    switch (link) {
    case CountLink::self_exciting:
        return -1.0 / std::expm1(-x);
    case CountLink::self_inhibiting:
        return std::exp(x);
    }
    return std::exp(x);
}

CountDrivingValue count_driving(long t, const EventHistory& h, const CountDrivingParams& p) {
    if (!(p.beta_c > 0.0)) {
        throw DomainError("count baseline beta_c must be > 0");
    }
    if (!(p.alpha_c >= 0.0)) {
        throw DomainError("count magnitude alpha_c must be >= 0");
    }
    const auto kernel = DecayKernel::geometric(p.mu_c);
    const long horizon = truncation_horizon(kernel);
    const auto n = h.count_before(t);
    double sum = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const long lag = t - h.days()[i];
        if (lag > horizon) {
            break;
        }
        sum += h.counts()[i] * kernel_pmf(kernel, lag);
    }
    const double x = p.beta_c + p.alpha_c * sum;
    return {x, count_link(x, p.link)};
}

HurdleIntensity::HurdleIntensity(HurdleParams params, long t_ref, long max_lag)
    : params_(std::move(params)), t_ref_(t_ref) {
    if (t_ref_ < 1) {
        throw DomainError("trend reference length must be >= 1");
    }
    if (params_.shot) {
        if (!(params_.shot->alpha >= 0.0)) {
            throw DomainError("shot-noise magnitude alpha must be >= 0");
        }
        table_.emplace(params_.shot->kernel, std::clamp(max_lag, 1L, kMaxKernelLag));
    }
}

double HurdleIntensity::baseline(long t) const { return sehurdle::baseline(t, t_ref_, params_.baseline); }

double HurdleIntensity::shot_noise(long t, const EventHistory& h) const {
    if (!table_) {
        return 0.0;
    }
    return params_.shot->alpha * sum_kernel_table(t, h, *table_, {});
}

CountIntensity::CountIntensity(CountDrivingParams params, long max_lag)
    : params_(params), table_(DecayKernel::geometric(params.mu_c), std::clamp(max_lag, 1L, kMaxKernelLag)) {
    if (!(params_.beta_c > 0.0)) {
        throw DomainError("count baseline beta_c must be > 0");
    }
    if (!(params_.alpha_c >= 0.0)) {
        throw DomainError("count magnitude alpha_c must be >= 0");
    }
}

CountDrivingValue CountIntensity::evaluate(long t, const EventHistory& h) const {
    const auto n = h.count_before(t);
    double sum = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const long lag = t - h.days()[i];
        if (lag > table_.length()) {
            break;
        }
        sum += h.counts()[i] * table_.pmf(lag);
    }
    const double x = params_.beta_c + params_.alpha_c * sum;
    return {x, count_link(x, params_.link)};
}

SurvivalContext::SurvivalContext(HurdleParams params, long t_ref, const EventHistory& history, long t0)
    : intensity_(std::move(params), t_ref), history_(history.through(t0)), t0_(t0) {}

double SurvivalContext::driving(long delta) const { return intensity_.driving(t0_ + delta, history_); }

double survival(const SurvivalContext& ctx, long u) {
    if (u < 1) {
        throw DomainError("survival horizon must be >= 1 day");
    }
    double cumulative = 0.0;
    for (long delta = 1; delta <= u; ++delta) {
        cumulative += ctx.driving(delta);
    }
    return std::exp(-cumulative);
}

std::vector<double> survival_curve(const SurvivalContext& ctx, long u_max) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(u_max > 0 ? u_max : 0));
    double cumulative = 0.0;
    for (long delta = 1; delta <= u_max; ++delta) {
        cumulative += ctx.driving(delta);
        out.push_back(std::exp(-cumulative));
    }
    return out;
}

ExpectedWait expected_wait(const SurvivalContext& ctx, long horizon_cap) {
    if (horizon_cap < 1) {
        throw DomainError("horizon cap must be >= 1 day");
    }
    double cumulative = 0.0;
    double total = 1.0;
    double v = 1.0;
    double x = 0.0;
    long u = 0;
    while (u < horizon_cap) {
        ++u;
        x = ctx.driving(u);
        cumulative += x;
        v = std::exp(-cumulative);
        total += v;
        if (v == 0.0) {
            break; // remaining terms underflow
        }
    }
    if (v >= 1e-8) {
        throw HorizonError("survival V(" + std::to_string(u) + ") = " + std::to_string(v) +
                           " has not decayed below 1e-8; the driving process vanishes too fast for a finite "
                           "expected wait within the horizon cap");
    }
    const double tail = x > 0.0 ? v * std::exp(-x) / -std::expm1(-x) : 0.0;
    return {total, u, tail};
}

} // namespace sehurdle
