#pragma once

// Shared pieces of the parallel and serial K-function code paths.

#include "sehurdle/kfunction.hpp"

#include <span>
#include <vector>

namespace sehurdle::detail {

struct KInputs {
    std::vector<long> days;     // event days
    std::vector<double> inv_p;  // 1 / p at each event day
    std::vector<long> lags;
    long length;
    std::size_t eligible;       // events with t_i <= T - t_max come first
};

[[nodiscard]] KInputs prepare_k(const DailySeries& series, std::span<const double> phat, std::span<const long> lags);

// Contribution of event i at every lag (cumulative over the grid).
void k_row(const KInputs& in, std::size_t i, std::vector<double>& row);

[[nodiscard]] KFunctionCurve finish_k(const KInputs& in, std::vector<double> pair_sums);

[[nodiscard]] std::vector<double> replicate_curve(const SimulationModel& model, long days,
                                                  std::span<const long> lags, std::uint64_t seed, std::uint64_t index);

} // namespace sehurdle::detail
