#include "sehurdle/kfunction.hpp"

#include "kfunction_detail.hpp"
#include "sehurdle/errors.hpp"
#include "sehurdle/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sehurdle {

namespace detail {

KInputs prepare_k(const DailySeries& series, std::span<const double> phat, std::span<const long> lags) {
    const long big_t = series.length();
    if (static_cast<long>(phat.size()) != big_t) {
        throw DomainError("phat has " + std::to_string(phat.size()) + " entries for a " + std::to_string(big_t) +
                          "-day series");
    }
    if (lags.empty()) {
        throw DomainError("lag grid is empty");
    }
    if (lags.front() < 1) {
        throw DomainError("lags must be >= 1");
    }
    for (std::size_t k = 1; k < lags.size(); ++k) {
        if (lags[k] <= lags[k - 1]) {
            throw DomainError("lags must be strictly increasing");
        }
    }
    const long t_max = lags.back();
    if (t_max >= big_t) {
        throw DomainError("largest lag " + std::to_string(t_max) + " leaves no border-corrected events in a " +
                          std::to_string(big_t) + "-day series");
    }
    KInputs in{{}, {}, {lags.begin(), lags.end()}, big_t, 0};
    for (long t = 1; t <= big_t; ++t) {
        const double p = phat[static_cast<std::size_t>(t - 1)];
        if (!(p > 0.0 && p <= 1.0)) {
            throw DomainError("phat on day " + std::to_string(t) + " is outside (0, 1]");
        }
        if (series.is_event_day(t)) {
            in.days.push_back(t);
            in.inv_p.push_back(1.0 / p);
            if (t <= big_t - t_max) {
                ++in.eligible;
            }
        }
    }
    return in;
}

void k_row(const KInputs& in, std::size_t i, std::vector<double>& row) {
    row.assign(in.lags.size(), 0.0);
    const long t_max = in.lags.back();
    for (std::size_t j = i + 1; j < in.days.size(); ++j) {
        const long d = in.days[j] - in.days[i];
        if (d > t_max) {
            break;
        }
        const auto k = static_cast<std::size_t>(std::lower_bound(in.lags.begin(), in.lags.end(), d) - in.lags.begin());
        row[k] += in.inv_p[j];
    }
    double running = 0.0;
    for (double& v : row) {
        running += v;
        v = running * in.inv_p[i];
    }
}

KFunctionCurve finish_k(const KInputs& in, std::vector<double> pair_sums) {
    KFunctionCurve curve;
    curve.lags = in.lags;
    const double norm = static_cast<double>(in.length - in.lags.back());
    curve.values.resize(pair_sums.size());
    curve.centered.resize(pair_sums.size());
    for (std::size_t k = 0; k < pair_sums.size(); ++k) {
        curve.values[k] = pair_sums[k] / norm;
        curve.centered[k] = curve.values[k] - static_cast<double>(in.lags[k]);
    }
    return curve;
}

std::vector<double> replicate_curve(const SimulationModel& model, long days, std::span<const long> lags,
                                    std::uint64_t seed, std::uint64_t index) {
    auto rng = make_rng(seed, index);
    const auto series = simulate(model, days, rng);
    const auto phat = model_probabilities(model, series);
    return weighted_k_serial(series, phat, lags).centered;
}

} // namespace detail

std::vector<long> default_lags(long max_lag) {
    if (max_lag < 1) {
        throw DomainError("max lag must be >= 1");
    }
    std::vector<long> lags(static_cast<std::size_t>(max_lag));
    for (long k = 0; k < max_lag; ++k) {
        lags[static_cast<std::size_t>(k)] = k + 1;
    }
    return lags;
}

std::vector<double> k_pair_sums(const DailySeries& series, std::span<const double> phat, std::span<const long> lags) {
    const auto in = detail::prepare_k(series, phat, lags);
    std::vector<double> total(in.lags.size(), 0.0);
    std::vector<double> row;
    for (std::size_t i = 0; i < in.eligible; ++i) {
        detail::k_row(in, i, row);
        for (std::size_t k = 0; k < row.size(); ++k) {
            total[k] += row[k];
        }
    }
    return total;
}

KFunctionCurve weighted_k(const DailySeries& series, std::span<const double> phat, std::span<const long> lags) {
    const auto in = detail::prepare_k(series, phat, lags);
    const long n = static_cast<long>(in.eligible);
    const std::size_t width = in.lags.size();
    std::vector<double> rows(static_cast<std::size_t>(n) * width);
#pragma omp parallel
    {
        std::vector<double> row;
#pragma omp for schedule(static)
        for (long i = 0; i < n; ++i) {
            detail::k_row(in, static_cast<std::size_t>(i), row);
            std::copy(row.begin(), row.end(), rows.begin() + static_cast<std::ptrdiff_t>(i) * static_cast<std::ptrdiff_t>(width));
        }
    }
    std::vector<double> total(width, 0.0);
    for (long i = 0; i < n; ++i) {
        const double* row = rows.data() + static_cast<std::size_t>(i) * width;
        for (std::size_t k = 0; k < width; ++k) {
            total[k] += row[k];
        }
    }
    return detail::finish_k(in, std::move(total));
}

std::vector<double> BootstrapSample::quantile(double q) const {
    std::vector<double> out(lags.size());
    std::vector<double> column(curves.size());
    for (std::size_t k = 0; k < lags.size(); ++k) {
        for (std::size_t r = 0; r < curves.size(); ++r) {
            column[r] = curves[r][k];
        }
        out[k] = type1_quantile(column, q);
    }
    return out;
}

BootstrapSample bootstrap_sample(const SimulationModel& model, long days, std::span<const long> lags, int n_sims,
                                 std::uint64_t seed) {
    if (n_sims < 2) {
        throw DomainError("bootstrap needs n_sims >= 2");
    }
    BootstrapSample sample{{lags.begin(), lags.end()}, std::vector<std::vector<double>>(static_cast<std::size_t>(n_sims))};
#pragma omp parallel for schedule(dynamic, 4)
    for (int r = 0; r < n_sims; ++r) {
        sample.curves[static_cast<std::size_t>(r)] =
            detail::replicate_curve(model, days, lags, seed, static_cast<std::uint64_t>(r));
    }
    return sample;
}

KEnvelope envelope_of(const BootstrapSample& sample, double lo_q, double hi_q) {
    if (!(lo_q <= hi_q)) {
        throw DomainError("envelope quantile levels are out of order");
    }
    return {sample.lags, sample.quantile(lo_q), sample.quantile(hi_q)};
}

KEnvelope bootstrap_envelope(const SimulationModel& model, long days, std::span<const long> lags, int n_sims,
                             std::uint64_t seed, double lo_q, double hi_q) {
    return envelope_of(bootstrap_sample(model, days, lags, n_sims, seed), lo_q, hi_q);
}

void attach_envelope(KFunctionCurve& curve, const KEnvelope& envelope) {
    if (envelope.lags != curve.lags) {
        throw DomainError("envelope lags differ from the curve's lags");
    }
    curve.lo = envelope.lo;
    curve.hi = envelope.hi;
}

double type1_quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw DomainError("quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("quantile level must lie in [0, 1]");
    }
    const auto n = values.size();
    auto idx = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * q));
    idx = idx == 0 ? 0 : std::min(idx - 1, n - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
    return values[idx];
}

double envelope_coverage(const KFunctionCurve& curve) {
    if (!curve.has_envelope()) {
        throw DomainError("curve has no envelope");
    }
    long inside = 0;
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        inside += curve.centered[k] >= curve.lo[k] && curve.centered[k] <= curve.hi[k] ? 1 : 0;
    }
    return static_cast<double>(inside) / static_cast<double>(curve.lags.size());
}

long lags_above_envelope(const KFunctionCurve& curve) {
    if (!curve.has_envelope()) {
        throw DomainError("curve has no envelope");
    }
    long above = 0;
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        above += curve.centered[k] > curve.hi[k] ? 1 : 0;
    }
    return above;
}

} // namespace sehurdle
