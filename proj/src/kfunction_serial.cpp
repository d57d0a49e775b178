// Single-threaded reference versions of the K-function kernels. The parallel
// versions must reproduce these bit for bit.

#include "sehurdle/kfunction.hpp"

#include "kfunction_detail.hpp"
#include "sehurdle/errors.hpp"

namespace sehurdle {

KFunctionCurve weighted_k_serial(const DailySeries& series, std::span<const double> phat, std::span<const long> lags) {
    const auto in = detail::prepare_k(series, phat, lags);
    std::vector<double> total(in.lags.size(), 0.0);
    std::vector<double> row;
    for (std::size_t i = 0; i < in.eligible; ++i) {
        detail::k_row(in, i, row);
        for (std::size_t k = 0; k < row.size(); ++k) {
            total[k] += row[k];
        }
    }
    return detail::finish_k(in, std::move(total));
}

BootstrapSample bootstrap_sample_serial(const SimulationModel& model, long days, std::span<const long> lags,
                                        int n_sims, std::uint64_t seed) {
    if (n_sims < 2) {
        throw DomainError("bootstrap needs n_sims >= 2");
    }
    BootstrapSample sample{{lags.begin(), lags.end()}, {}};
    sample.curves.reserve(static_cast<std::size_t>(n_sims));
    for (int r = 0; r < n_sims; ++r) {
        sample.curves.push_back(detail::replicate_curve(model, days, lags, seed, static_cast<std::uint64_t>(r)));
    }
    return sample;
}

} // namespace sehurdle
