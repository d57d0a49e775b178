#pragma once

#include "sehurdle/likelihood.hpp"
#include "sehurdle/rng.hpp"

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace sehurdle {

/// A fully parameterized hurdle model, optionally paired with a count model.
/// Without a count model every event day carries Y = 1.
struct SimulationModel {
    HurdleModelSpec hurdle_spec{};
    HurdleParams hurdle{};
    std::optional<CountModelSpec> count_spec{};
    CountParams count{};
    long t_ref{0}; // trend normalization; 0 = simulated length
    // Zeta draws above this are stored as this value. Near s = 1 the zeta mean
    // is infinite and self-exciting counts can run away.
    long max_count{std::numeric_limits<int>::max()};
    Date start{std::chrono::year{1994} / 1 / 1};
};

// Forward day-by-day sampling; each day's probability sees the simulated past.
[[nodiscard]] DailySeries simulate(const SimulationModel& model, long days, Rng& rng);
[[nodiscard]] DailySeries simulate(const SimulationModel& model, long days, std::uint64_t seed);

// p_t under the model along a given (observed or simulated) history.
[[nodiscard]] std::vector<double> model_probabilities(const SimulationModel& model, const DailySeries& series);

// Reference SE1 parameters: beta0 = -4.41, alpha = 0.89, NB kernel mu = 37.54, r = 0.45.
[[nodiscard]] SimulationModel se1_reference_model();
// Reference C_se parameters: beta_c = 0.375, alpha_c = 0.20, mu_c = 2.13.
[[nodiscard]] CountParams cse_reference_params();

} // namespace sehurdle
