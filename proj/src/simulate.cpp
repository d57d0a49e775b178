#include "sehurdle/simulate.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/zeta.hpp"

#include <algorithm>
#include <limits>

namespace sehurdle {

DailySeries simulate(const SimulationModel& model, long days, Rng& rng) {
    if (days < 1) {
        throw DomainError("simulation length must be >= 1 day");
    }
    const long t_ref = model.t_ref > 0 ? model.t_ref : days;
    const HurdleIntensity hurdle(conform(model.hurdle_spec, model.hurdle), t_ref, days);

    std::optional<CountIntensity> count;
    if (model.count_spec && model.count_spec->variant != CountVariant::constant) {
        count.emplace(count_driving_params(*model.count_spec, model.count), days);
    }

    EventHistory history;
    std::vector<int> counts(static_cast<std::size_t>(days), 0);
    for (long t = 1; t <= days; ++t) {
        const double p = hurdle.probability(t, history);
        if (!(uniform01(rng) < p)) {
            continue;
        }
        long y = 1;
        if (model.count_spec) {
            const double s = count ? clamp_zeta_exponent(count->evaluate(t, history).s)
                                   : clamp_zeta_exponent(model.count.s);
            y = draw_zeta(s, rng);
        }
        const int stored = static_cast<int>(std::clamp<long>(y, 1, std::min<long>(model.max_count, std::numeric_limits<int>::max())));
        counts[static_cast<std::size_t>(t - 1)] = stored;
        history.append(t, stored);
    }
    return DailySeries(model.start, std::move(counts));
}

DailySeries simulate(const SimulationModel& model, long days, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return simulate(model, days, rng);
}

std::vector<double> model_probabilities(const SimulationModel& model, const DailySeries& series) {
    const long t_ref = model.t_ref > 0 ? model.t_ref : series.length();
    return hurdle_probabilities(series, conform(model.hurdle_spec, model.hurdle), t_ref);
}

SimulationModel se1_reference_model() {
    SimulationModel m;
    m.hurdle_spec = hurdle_spec_by_name("SE1");
    m.hurdle.baseline.beta0 = -4.41;
    m.hurdle.shot = ShotNoiseParams{0.89, DecayKernel::negative_binomial(37.54, 0.45)};
    return m;
}

CountParams cse_reference_params() {
    CountParams p;
    p.beta_c = 0.375;
    p.alpha_c = 0.20;
    p.mu_c = 2.13;
    return p;
}

} // namespace sehurdle
