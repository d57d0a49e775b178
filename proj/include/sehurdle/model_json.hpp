#pragma once

#include "sehurdle/forecast.hpp"
#include "sehurdle/kfunction.hpp"
#include "sehurdle/simulate.hpp"

#include <json.hpp>

#include <optional>

namespace sehurdle {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// {"name": "SE1"} or {"baseline": ["linear", "seasonal"], "self_exciting": true, "kernel": "nb"}
[[nodiscard]] Json to_json(const HurdleModelSpec& spec);
[[nodiscard]] HurdleModelSpec hurdle_spec_from_json(const Json& j);
// {"name": "Cse"}
[[nodiscard]] Json to_json(const CountModelSpec& spec);
[[nodiscard]] CountModelSpec count_spec_from_json(const Json& j);

// Named parameter maps ordered as spec.parameter_names().
[[nodiscard]] Json params_to_json(const HurdleModelSpec& spec, const HurdleParams& params);
[[nodiscard]] HurdleParams hurdle_params_from_json(const HurdleModelSpec& spec, const Json& j);
[[nodiscard]] Json params_to_json(const CountModelSpec& spec, const CountParams& params);
[[nodiscard]] CountParams count_params_from_json(const CountModelSpec& spec, const Json& j);

[[nodiscard]] Json to_json(const ConvergenceReport& report);
[[nodiscard]] Json to_json(const FittedHurdle& fit);
[[nodiscard]] Json to_json(const FittedCount& fit);

/// Model documents. A document holds a "hurdle" section, a "count" section or
/// both; each names its spec and, once fitted, carries "params".
///   {"format_version": 1, "hurdle": {"spec": {...}, "params": {...}}, "count": {...}}
struct ModelDocument {
    std::optional<HurdleModelSpec> hurdle_spec;
    std::optional<HurdleParams> hurdle_params;
    std::optional<CountModelSpec> count_spec;
    std::optional<CountParams> count_params;
    long t_ref{0};
    std::optional<Date> start;
};

[[nodiscard]] ModelDocument model_document_from_json(const Json& j);
[[nodiscard]] Json to_json(const SimulationModel& model);
// Requires hurdle params; count params are required when a count spec is given.
[[nodiscard]] SimulationModel simulation_model(const ModelDocument& doc);

[[nodiscard]] Json to_json(const BacktestReport& report);

} // namespace sehurdle
