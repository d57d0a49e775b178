#include "sehurdle/likelihood.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/zeta.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sehurdle {

namespace {


long resolve_t_ref(const DailySeries& series, long t_ref) { return t_ref > 0 ? t_ref : series.length(); }

} // namespace

int HurdleModelSpec::free_parameters() const noexcept {
    int k = 1;
    k += terms.linear ? 1 : 0;
    k += terms.quadratic ? 1 : 0;
    k += terms.seasonal ? 2 : 0;
    if (self_exciting) {
        k += kernel == KernelFamily::negative_binomial ? 3 : 2;
    }
    return k;
}

std::vector<std::string> HurdleModelSpec::parameter_names() const {
    std::vector<std::string> names{"beta0"};
    if (terms.linear) {
        names.emplace_back("beta1");
    }
    if (terms.quadratic) {
        names.emplace_back("beta2");
    }
    if (terms.seasonal) {
        names.emplace_back("a1");
        names.emplace_back("a2");
    }
    if (self_exciting) {
        names.emplace_back("alpha");
        names.emplace_back("mu");
        if (kernel == KernelFamily::negative_binomial) {
            names.emplace_back("r");
        }
    }
    return names;
}

HurdleModelSpec hurdle_spec_by_name(std::string_view name) {
    if (name.size() != 3 || (name.substr(0, 2) != "BL" && name.substr(0, 2) != "SE") || name[2] < '1' ||
        name[2] > '6') {
        throw ParseError("unknown model '" + std::string(name) + "' (expected BL1..BL6 or SE1..SE6)");
    }
    HurdleModelSpec spec;
    spec.name = std::string(name);
    spec.self_exciting = name[0] == 'S';
    switch (name[2]) {
    case '1':
        break;
    case '2':
        spec.terms = {.linear = true};
        break;
    case '3':
        spec.terms = {.linear = true, .quadratic = true};
        break;
    case '4':
        spec.terms = {.seasonal = true};
        break;
    case '5':
        spec.terms = {.linear = true, .seasonal = true};
        break;
    case '6':
        spec.terms = {.linear = true, .quadratic = true, .seasonal = true};
        break;
    }
    return spec;
}

std::vector<std::string> hurdle_spec_names() {
    return {"BL1", "BL2", "BL3", "BL4", "BL5", "BL6", "SE1", "SE2", "SE3", "SE4", "SE5", "SE6"};
}

std::string CountModelSpec::name() const {
    switch (variant) {
    case CountVariant::constant:
        return "Cz";
    case CountVariant::self_exciting:
        return "Cse";
    case CountVariant::self_inhibiting:
        return "Csi";
    }
    return "Cz";
}

std::vector<std::string> CountModelSpec::parameter_names() const {
    if (variant == CountVariant::constant) {
        return {"s"};
    }
    return {"beta_c", "alpha_c", "mu_c"};
}

CountModelSpec count_spec_by_name(std::string_view name) {
    if (name == "Cz") {
        return {CountVariant::constant};
    }
    if (name == "Cse") {
        return {CountVariant::self_exciting};
    }
    if (name == "Csi") {
        return {CountVariant::self_inhibiting};
    }
    throw ParseError("unknown count model '" + std::string(name) + "' (expected Cz, Cse or Csi)");
}

HurdleParams conform(const HurdleModelSpec& spec, HurdleParams params) {
    auto& b = params.baseline;
    b.terms = spec.terms;
    if (!spec.terms.linear) {
        b.beta1 = 0.0;
    }
    if (!spec.terms.quadratic) {
        b.beta2 = 0.0;
    }
    if (!spec.terms.seasonal) {
        b.a1 = 0.0;
        b.a2 = 0.0;
    }
    if (!spec.self_exciting) {
        params.shot.reset();
    } else {
        if (!params.shot) {
            throw DomainError("model " + spec.name + " needs shot-noise parameters");
        }
        const auto& k = params.shot->kernel;
        if (k.family() != spec.kernel) {
            params.shot->kernel = DecayKernel::make(spec.kernel, k.mean(), k.size().value_or(1.0));
        }
    }
    return params;
}

CountDrivingParams count_driving_params(const CountModelSpec& spec, const CountParams& params) {
    if (spec.variant == CountVariant::constant) {
        throw DomainError("the constant zeta model has no driving process");
    }
    return {params.beta_c, params.alpha_c, params.mu_c,
            spec.variant == CountVariant::self_exciting ? CountLink::self_exciting : CountLink::self_inhibiting};
}

double log_expm1(double x) {
    if (x > 30.0) {
        return x + std::log1p(-std::exp(-x));
    }
    return std::log(std::expm1(x));
}

HurdleLikelihood::HurdleLikelihood(const DailySeries& series, long t_ref)
    : length_(series.length()), t_ref_(resolve_t_ref(series, t_ref)), history_(to_history(series)) {
    sin_.resize(static_cast<std::size_t>(length_));
    cos_.resize(static_cast<std::size_t>(length_));
    for (long t = 1; t <= length_; ++t) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / kSeasonalPeriod;
        sin_[static_cast<std::size_t>(t - 1)] = std::sin(phase);
        cos_[static_cast<std::size_t>(t - 1)] = std::cos(phase);
    }
}

double HurdleLikelihood::baseline_sum(const BaselineParams& p) const {
    const auto& terms = p.terms;
    if (!terms.linear && !terms.quadratic && !terms.seasonal) {
        return static_cast<double>(length_) * std::exp(p.beta0);
    }
    const bool cached_season = p.omega == kSeasonalPeriod;
    double total = 0.0;
    for (long t = 1; t <= length_; ++t) {
        if (!cached_season) {
            total += baseline(t, t_ref_, p);
            continue;
        }
        const double tt = static_cast<double>(t) / static_cast<double>(t_ref_);
        double v = p.beta0;
        if (terms.linear) {
            v += p.beta1 * tt;
        }
        if (terms.quadratic) {
            v += p.beta2 * tt * tt;
        }
        if (terms.seasonal) {
            v += p.a1 * sin_[static_cast<std::size_t>(t - 1)] + p.a2 * cos_[static_cast<std::size_t>(t - 1)];
        }
        total += std::exp(v);
    }
    return total;
}

double HurdleLikelihood::operator()(const HurdleParams& params) const {
    const auto days = history_.days();
    const std::size_t n = days.size();
    double loglik = -baseline_sum(params.baseline);

    if (!params.shot) {
        for (std::size_t i = 0; i < n; ++i) {
            loglik += log_expm1(baseline(days[i], t_ref_, params.baseline));
        }
        return loglik;
    }

    const double alpha = params.shot->alpha;
    const KernelTable table(params.shot->kernel, std::min(length_, kMaxKernelLag));
    double shot_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = i; j-- > 0;) {
            const long lag = days[i] - days[j];
            if (lag > table.length()) {
                break;
            }
            s += table.pmf(lag);
        }
        const double x = baseline(days[i], t_ref_, params.baseline) + alpha * s;
        if (!(x > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        loglik += log_expm1(x);
        shot_total += table.cdf(length_ - days[i]);
    }
    return loglik - alpha * shot_total;
}

double hurdle_loglik(const DailySeries& series, const HurdleModelSpec& spec, const HurdleParams& params,
                     long t_ref) {
    return HurdleLikelihood(series, t_ref)(conform(spec, params));
}

std::vector<double> driving_path(const DailySeries& series, const HurdleParams& params, long t_ref) {
    const long big_t = series.length();
    t_ref = resolve_t_ref(series, t_ref);
    const auto history = to_history(series);
    std::vector<double> x(static_cast<std::size_t>(big_t));
    std::optional<KernelTable> table;
    if (params.shot) {
        table.emplace(params.shot->kernel, std::min(big_t, kMaxKernelLag));
    }
    const auto days = history.days();
    for (long t = 1; t <= big_t; ++t) {
        double v = baseline(t, t_ref, params.baseline);
        if (table) {
            double s = 0.0;
            for (std::size_t j = history.count_before(t); j-- > 0;) {
                const long lag = t - days[j];
                if (lag > table->length()) {
                    break;
                }
                s += table->pmf(lag);
            }
            v += params.shot->alpha * s;
        }
        x[static_cast<std::size_t>(t - 1)] = v;
    }
    return x;
}

std::vector<double> hurdle_probabilities(const DailySeries& series, const HurdleParams& params, long t_ref) {
    auto p = driving_path(series, params, t_ref);
    for (double& v : p) {
        v = hurdle_prob(v);
    }
    return p;
}

double hurdle_loglik_naive(const DailySeries& series, const HurdleModelSpec& spec, const HurdleParams& params,
                           long t_ref) {
    const auto x = driving_path(series, conform(spec, params), t_ref);
    double loglik = 0.0;
    for (long t = 1; t <= series.length(); ++t) {
        const double p = hurdle_prob(x[static_cast<std::size_t>(t - 1)]);
        loglik += series.is_event_day(t) ? std::log(p) : std::log1p(-p);
    }
    return loglik;
}

double count_exponent(long t, const EventHistory& history, const CountModelSpec& spec, const CountParams& params) {
    if (spec.variant == CountVariant::constant) {
        return clamp_zeta_exponent(params.s);
    }
    return clamp_zeta_exponent(count_driving(t, history, count_driving_params(spec, params)).s);
}

CountLikelihood::CountLikelihood(const DailySeries& series) : history_(to_history(series)) {
    if (history_.empty()) {
        throw DomainError("count likelihood needs at least one event day");
    }
    for (int y : history_.counts()) {
        const double l = std::log(static_cast<double>(y));
        log_counts_.push_back(l);
        sum_log_counts_ += l;
    }
}

double CountLikelihood::operator()(const CountModelSpec& spec, const CountParams& params) const {
    const std::size_t n = history_.size();
    if (spec.variant == CountVariant::constant) {
        const double s = clamp_zeta_exponent(params.s);
        return -s * sum_log_counts_ - static_cast<double>(n) * std::log(zeta_norm(s));
    }
    const auto days = history_.days();
    const CountIntensity intensity(count_driving_params(spec, params), std::max(1L, days.back() - days.front()));
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = clamp_zeta_exponent(intensity.evaluate(days[i], history_).s);
        loglik += -s * log_counts_[i] - std::log(zeta_norm(s));
    }
    return loglik;
}

double count_loglik(const DailySeries& series, const CountModelSpec& spec, const CountParams& params) {
    return CountLikelihood(series)(spec, params);
}

double full_density(long y, double p, double s) {
    if (y < 0) {
        return 0.0;
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("hurdle probability must lie in [0, 1]");
    }
    if (y == 0) {
        return 1.0 - p;
    }
    return p * zeta_pmf(y, s);
}

double aic(double loglik, int k) {
    if (k < 0) {
        throw DomainError("parameter count must be >= 0");
    }
    return 2.0 * static_cast<double>(k) - 2.0 * loglik;
}

} // namespace sehurdle
