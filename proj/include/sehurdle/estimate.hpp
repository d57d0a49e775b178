#pragma once

#include "sehurdle/likelihood.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sehurdle {

using Objective = std::function<double(std::span<const double>)>;

struct MinimizeOptions {
    double x_tolerance{1e-8};      // converged once the simplex diameter (max-norm) drops below this
    double value_tolerance{0.0};   // optional: also converged when f_worst - f_best <= this
    long max_evaluations{10'000};
    double initial_step{0.25};
    int max_restarts{2};           // fresh simplex around the best point after a stall
};

struct MinimizeResult {
    std::vector<double> x;
    double value;
    long iterations;
    long evaluations;
    bool converged;
    int restarts;
};

/// Nelder-Mead simplex descent. Non-finite objective values are treated as
/// +infinity, so such steps are rejected and the simplex shrinks.
[[nodiscard]] MinimizeResult minimize(const Objective& f, std::vector<double> x0, const MinimizeOptions& opts = {});

enum class Constraint {
    real,         // identity
    positive,     // log v
    above_one,    // log(v - 1)
};

/// Maps constrained parameter values to an unconstrained optimizer space.
class ParamTransform {
public:
    ParamTransform(std::vector<std::string> names, std::vector<Constraint> constraints);

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }

    [[nodiscard]] std::vector<double> to_free(std::span<const double> values) const;
    [[nodiscard]] std::vector<double> from_free(std::span<const double> free) const;

private:
    std::vector<std::string> names_;
    std::vector<Constraint> constraints_;
};

[[nodiscard]] ParamTransform make_transform(const HurdleModelSpec& spec);
[[nodiscard]] ParamTransform make_transform(const CountModelSpec& spec);

// Parameter vectors ordered as spec.parameter_names().
[[nodiscard]] std::vector<double> pack(const HurdleModelSpec& spec, const HurdleParams& params);
[[nodiscard]] HurdleParams unpack(const HurdleModelSpec& spec, std::span<const double> values);
[[nodiscard]] std::vector<double> pack(const CountModelSpec& spec, const CountParams& params);
[[nodiscard]] CountParams unpack(const CountModelSpec& spec, std::span<const double> values);

struct FitOptions {
    int starts{5};
    std::uint64_t seed{1};
    std::optional<HurdleParams> warm_start{}; // used as start 0 when present
    MinimizeOptions minimize{};
    long t_ref{0};          // trend normalization length; 0 = series length
    bool closed_form{true}; // BL1 uses its analytic MLE
};

struct CountFitOptions {
    int starts{5};
    std::uint64_t seed{1};
    std::optional<CountParams> warm_start{};
    MinimizeOptions minimize{};
};

// Constant-probability MLE: beta0 = log(-log(1 - event_days / T)).
[[nodiscard]] double constant_model_beta0(const DailySeries& series);

// Multi-starts run in parallel; the best start wins, ties to the lower index.
[[nodiscard]] FittedHurdle fit_hurdle(const DailySeries& series, const HurdleModelSpec& spec, const FitOptions& opts = {});
// Serial reference: same starts, same result.
[[nodiscard]] FittedHurdle fit_hurdle_serial(const DailySeries& series, const HurdleModelSpec& spec,
                                             const FitOptions& opts = {});

struct ZetaMle {
    double s;
    bool boundary; // pinned at the exponent range limit (e.g. all counts equal 1)
};

// Root of mean(log y) = -zeta'(s)/zeta(s) on the working exponent range.
[[nodiscard]] ZetaMle zeta_mle(std::span<const int> counts);

[[nodiscard]] FittedCount fit_count(const DailySeries& series, const CountModelSpec& spec,
                                    const CountFitOptions& opts = {});

} // namespace sehurdle
