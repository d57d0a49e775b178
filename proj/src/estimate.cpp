#include "sehurdle/estimate.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/rng.hpp"
#include "sehurdle/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sehurdle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, std::span<const double> x) {
    double v = kInf;
    try {
        v = f(x);
    } catch (const std::exception&) {
        return kInf;
    }
    return std::isfinite(v) ? v : kInf;
}

struct SimplexRun {
    std::vector<double> x;
    double value;
    long iterations;
    bool converged;
};

SimplexRun run_simplex(const Objective& f, const std::vector<double>& start, double start_value,
                       const MinimizeOptions& opts, long& evaluations) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1, start_value);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += opts.initial_step;
        vals[i + 1] = safe_eval(f, pts[i + 1]);
        ++evaluations;
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    long iterations = 0;
    bool converged = false;

    const auto eval = [&](const std::vector<double>& x) {
        ++evaluations;
        return safe_eval(f, x);
    };

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t d = 0; d < n; ++d) {
                diameter = std::max(diameter, std::abs(pts[i][d] - pts[best][d]));
            }
        }
        if (diameter < opts.x_tolerance ||
            (opts.value_tolerance > 0.0 && std::isfinite(vals[worst]) &&
             vals[worst] - vals[best] <= opts.value_tolerance)) {
            converged = true;
            break;
        }
        if (evaluations >= opts.max_evaluations) {
            break;
        }
        ++iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& p = pts[order[k]];
            for (std::size_t d = 0; d < n; ++d) {
                centroid[d] += p[d];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        const auto along = [&](double coeff, std::vector<double>& out) {
            for (std::size_t d = 0; d < n; ++d) {
                out[d] = centroid[d] + coeff * (pts[worst][d] - centroid[d]);
            }
        };

        along(-1.0, trial); // reflection
        const double f_reflect = eval(trial);
        if (f_reflect < vals[best]) {
            along(-2.0, trial2); // expansion
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                pts[worst] = trial2;
                vals[worst] = f_expand;
            } else {
                pts[worst] = trial;
                vals[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < vals[second]) {
            pts[worst] = trial;
            vals[worst] = f_reflect;
            continue;
        }
        bool accepted = false;
        if (f_reflect < vals[worst]) {
            along(-0.5, trial2); // outside contraction
            const double f_contract = eval(trial2);
            if (f_contract <= f_reflect) {
                pts[worst] = trial2;
                vals[worst] = f_contract;
                accepted = true;
            }
        } else {
            along(0.5, trial2); // inside contraction
            const double f_contract = eval(trial2);
            if (f_contract < vals[worst]) {
                pts[worst] = trial2;
                vals[worst] = f_contract;
                accepted = true;
            }
        }
        if (!accepted) {
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == best) {
                    continue;
                }
                for (std::size_t d = 0; d < n; ++d) {
                    pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                }
                vals[i] = eval(pts[i]);
            }
        }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    return {pts[static_cast<std::size_t>(best_it - vals.begin())], *best_it, iterations, converged};
}

} // namespace

MinimizeResult minimize(const Objective& f, std::vector<double> x0, const MinimizeOptions& opts) {
    if (x0.empty()) {
        throw DomainError("minimize needs at least one free parameter");
    }
    double v0 = kInf;
    try {
        v0 = f(x0);
    } catch (const std::exception& e) {
        throw FitError(std::string("objective failed at the starting point: ") + e.what());
    }
    if (!std::isfinite(v0)) {
        throw FitError("objective is not finite at the starting point");
    }
    long evaluations = 1;
    MinimizeResult result{std::move(x0), v0, 0, evaluations, false, 0};
    while (true) {
        auto run = run_simplex(f, result.x, result.value, opts, evaluations);
        const double improvement = result.value - run.value;
        result.iterations += run.iterations;
        if (run.value <= result.value) {
            result.x = std::move(run.x);
            result.value = run.value;
        }
        result.converged = run.converged;
        result.evaluations = evaluations;
        // Restart only when the last run converged and still moved the objective.
        if (!run.converged || result.restarts >= opts.max_restarts || evaluations >= opts.max_evaluations) {
            break;
        }
        if (result.restarts > 0 && improvement <= 1e-12 * (1.0 + std::abs(result.value))) {
            break;
        }
        ++result.restarts;
    }
    return result;
}

ParamTransform::ParamTransform(std::vector<std::string> names, std::vector<Constraint> constraints)
    : names_(std::move(names)), constraints_(std::move(constraints)) {
    if (names_.size() != constraints_.size()) {
        throw DomainError("transform names and constraints differ in length");
    }
}

std::vector<double> ParamTransform::to_free(std::span<const double> values) const {
    if (values.size() != size()) {
        throw DomainError("parameter vector has the wrong length");
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        switch (constraints_[i]) {
        case Constraint::real:
            out[i] = values[i];
            break;
        case Constraint::positive:
            if (!(values[i] > 0.0)) {
                throw DomainError(names_[i] + " must be > 0");
            }
            out[i] = std::log(values[i]);
            break;
        case Constraint::above_one:
            if (!(values[i] > 1.0)) {
                throw DomainError(names_[i] + " must be > 1");
            }
            out[i] = std::log(values[i] - 1.0);
            break;
        }
    }
    return out;
}

std::vector<double> ParamTransform::from_free(std::span<const double> free) const {
    if (free.size() != size()) {
        throw DomainError("free vector has the wrong length");
    }
    std::vector<double> out(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
        switch (constraints_[i]) {
        case Constraint::real:
            out[i] = free[i];
            break;
        case Constraint::positive:
            out[i] = std::exp(free[i]);
            break;
        case Constraint::above_one:
            out[i] = 1.0 + std::exp(free[i]);
            break;
        }
    }
    return out;
}

ParamTransform make_transform(const HurdleModelSpec& spec) {
    auto names = spec.parameter_names();
    std::vector<Constraint> constraints;
    for (const auto& name : names) {
        if (name == "alpha" || name == "r") {
            constraints.push_back(Constraint::positive);
        } else if (name == "mu") {
            constraints.push_back(Constraint::above_one);
        } else {
            constraints.push_back(Constraint::real);
        }
    }
    return ParamTransform(std::move(names), std::move(constraints));
}

ParamTransform make_transform(const CountModelSpec& spec) {
    if (spec.variant == CountVariant::constant) {
        return ParamTransform({"s"}, {Constraint::above_one});
    }
    return ParamTransform(spec.parameter_names(), {Constraint::positive, Constraint::positive, Constraint::above_one});
}

std::vector<double> pack(const HurdleModelSpec& spec, const HurdleParams& params) {
    const auto& b = params.baseline;
    std::vector<double> v{b.beta0};
    if (spec.terms.linear) {
        v.push_back(b.beta1);
    }
    if (spec.terms.quadratic) {
        v.push_back(b.beta2);
    }
    if (spec.terms.seasonal) {
        v.push_back(b.a1);
        v.push_back(b.a2);
    }
    if (spec.self_exciting) {
        if (!params.shot) {
            throw DomainError("model " + spec.name + " needs shot-noise parameters");
        }
        v.push_back(params.shot->alpha);
        v.push_back(params.shot->kernel.mean());
        if (spec.kernel == KernelFamily::negative_binomial) {
            v.push_back(params.shot->kernel.size().value_or(1.0));
        }
    }
    return v;
}

HurdleParams unpack(const HurdleModelSpec& spec, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(spec.free_parameters())) {
        throw DomainError("parameter vector length does not match model " + spec.name);
    }
    HurdleParams p;
    p.baseline.terms = spec.terms;
    std::size_t i = 0;
    p.baseline.beta0 = values[i++];
    if (spec.terms.linear) {
        p.baseline.beta1 = values[i++];
    }
    if (spec.terms.quadratic) {
        p.baseline.beta2 = values[i++];
    }
    if (spec.terms.seasonal) {
        p.baseline.a1 = values[i++];
        p.baseline.a2 = values[i++];
    }
    if (spec.self_exciting) {
        const double alpha = values[i++];
        const double mu = values[i++];
        const double r = spec.kernel == KernelFamily::negative_binomial ? values[i++] : 1.0;
        p.shot = ShotNoiseParams{alpha, DecayKernel::make(spec.kernel, mu, r)};
    }
    return p;
}

std::vector<double> pack(const CountModelSpec& spec, const CountParams& params) {
    if (spec.variant == CountVariant::constant) {
        return {params.s};
    }
    return {params.beta_c, params.alpha_c, params.mu_c};
}

CountParams unpack(const CountModelSpec& spec, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(spec.free_parameters())) {
        throw DomainError("parameter vector length does not match count model " + spec.name());
    }
    CountParams p;
    if (spec.variant == CountVariant::constant) {
        p.s = values[0];
    } else {
        p.beta_c = values[0];
        p.alpha_c = values[1];
        p.mu_c = values[2];
    }
    return p;
}

double constant_model_beta0(const DailySeries& series) {
    const double events = static_cast<double>(series.event_day_count());
    const double days = static_cast<double>(series.length());
    if (events <= 0.0 || events >= days) {
        throw FitError("constant model needs at least one event day and one non-event day");
    }
    return std::log(-std::log1p(-events / days));
}

namespace {

// Free-space start vectors: grid corners in seeded order, then seeded jitter.
std::vector<std::vector<double>> seeded_starts(std::vector<std::vector<double>> grid, int count, std::uint64_t seed,
                                               const std::optional<std::vector<double>>& warm) {
    auto rng = make_rng(seed, 0x57a27);
    for (std::size_t i = grid.size(); i > 1; --i) {
        std::swap(grid[i - 1], grid[uniform_below(rng, i)]);
    }
    std::vector<std::vector<double>> starts;
    if (warm) {
        starts.push_back(*warm);
    }
    std::size_t next = 0;
    while (static_cast<int>(starts.size()) < count) {
        if (next < grid.size()) {
            starts.push_back(grid[next++]);
            continue;
        }
        auto jittered = grid[uniform_below(rng, grid.size())];
        for (double& v : jittered) {
            v += uniform01(rng) - 0.5;
        }
        starts.push_back(std::move(jittered));
    }
    return starts;
}

struct StartOutcome {
    std::optional<MinimizeResult> result;
    std::string error;
};

StartOutcome run_start(const Objective& f, const std::vector<double>& x0, const MinimizeOptions& opts) {
    try {
        return {minimize(f, x0, opts), {}};
    } catch (const std::exception& e) {
        return {std::nullopt, e.what()};
    }
}

template <class Build>
auto best_of_starts(const std::vector<std::vector<double>>& starts, const Objective& f, const MinimizeOptions& opts,
                    bool parallel, Build&& build) {
    std::vector<StartOutcome> outcomes(starts.size());
    const long n = static_cast<long>(starts.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) {
            outcomes[static_cast<std::size_t>(i)] = run_start(f, starts[static_cast<std::size_t>(i)], opts);
        }
    } else {
        for (long i = 0; i < n; ++i) {
            outcomes[static_cast<std::size_t>(i)] = run_start(f, starts[static_cast<std::size_t>(i)], opts);
        }
    }

    ConvergenceReport report;
    report.method = "nelder-mead";
    int best = -1;
    std::string failures;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.result) {
            report.starts.push_back({static_cast<int>(i), -kInf, 0, false, o.error});
            failures += " [start " + std::to_string(i) + ": " + o.error + "]";
            continue;
        }
        report.starts.push_back(
            {static_cast<int>(i), -o.result->value, o.result->evaluations, o.result->converged, {}});
        report.evaluations += o.result->evaluations;
        report.iterations += o.result->iterations;
        if (best < 0 || o.result->value < outcomes[static_cast<std::size_t>(best)].result->value) {
            best = static_cast<int>(i);
        }
    }
    if (best < 0) {
        throw FitError("all " + std::to_string(starts.size()) + " optimizer starts failed:" + failures);
    }
    report.best_start = best;
    report.converged = outcomes[static_cast<std::size_t>(best)].result->converged;
    return build(*outcomes[static_cast<std::size_t>(best)].result, std::move(report));
}

FittedHurdle fit_hurdle_impl(const DailySeries& series, const HurdleModelSpec& spec, const FitOptions& opts,
                             bool parallel) {
    const double beta0 = constant_model_beta0(series);
    const long t_ref = opts.t_ref > 0 ? opts.t_ref : series.length();
    const WindowInfo window{series.start_date(), series.length(), t_ref};
    const int k = spec.free_parameters();

    const HurdleLikelihood likelihood(series, t_ref);

    if (opts.closed_form && !spec.self_exciting && spec.terms == BaselineTerms{}) {
        HurdleParams p;
        p.baseline.beta0 = beta0;
        const double ll = likelihood(p);
        ConvergenceReport report{"closed-form", true, 0, 1, 0, {{0, ll, 1, true, {}}}};
        return {spec, p, ll, aic(ll, k), k, window, std::move(report)};
    }

    const auto transform = make_transform(spec);
    const Objective objective = [&](std::span<const double> free) {
        const auto params = unpack(spec, transform.from_free(free));
        return -likelihood(params);
    };

    // Grid of constrained starting values, mapped to free space.
    std::vector<std::vector<double>> grid;
    const auto base_point = [&](double alpha, double mu, double r) {
        HurdleParams p;
        p.baseline.beta0 = beta0;
        p.baseline.terms = spec.terms;
        if (spec.self_exciting) {
            p.shot = ShotNoiseParams{alpha, DecayKernel::make(spec.kernel, mu, r)};
        }
        return transform.to_free(pack(spec, p));
    };
    if (spec.self_exciting) {
        for (double alpha : {0.2, 0.9}) {
            for (double mu : {10.0, 40.0}) {
                if (spec.kernel == KernelFamily::negative_binomial) {
                    for (double r : {0.5, 2.0}) {
                        grid.push_back(base_point(alpha, mu, r));
                    }
                } else {
                    grid.push_back(base_point(alpha, mu, 1.0));
                }
            }
        }
    } else {
        grid.push_back(base_point(0.0, 2.0, 1.0));
    }
    std::optional<std::vector<double>> warm;
    if (opts.warm_start) {
        warm = transform.to_free(pack(spec, conform(spec, *opts.warm_start)));
    }
    const auto starts = seeded_starts(std::move(grid), std::max(1, opts.starts), opts.seed, warm);

    return best_of_starts(starts, objective, opts.minimize, parallel,
                          [&](const MinimizeResult& best, ConvergenceReport report) {
                              auto params = unpack(spec, transform.from_free(best.x));
                              const double ll = -best.value;
                              return FittedHurdle{spec, std::move(params), ll, aic(ll, k), k, window,
                                                  std::move(report)};
                          });
}

} // namespace

FittedHurdle fit_hurdle(const DailySeries& series, const HurdleModelSpec& spec, const FitOptions& opts) {
    return fit_hurdle_impl(series, spec, opts, true);
}

FittedHurdle fit_hurdle_serial(const DailySeries& series, const HurdleModelSpec& spec, const FitOptions& opts) {
    return fit_hurdle_impl(series, spec, opts, false);
}

ZetaMle zeta_mle(std::span<const int> counts) {
    if (counts.empty()) {
        throw FitError("zeta MLE needs at least one count");
    }
    double sum_log = 0.0;
    for (int y : counts) {
        if (y < 1) {
            throw DomainError("zeta counts must be >= 1");
        }
        sum_log += std::log(static_cast<double>(y));
    }
    const double target = sum_log / static_cast<double>(counts.size());

    // zeta_mean_log is strictly decreasing in s.
    double lo = kMinZetaExponent;
    double hi = kMaxZetaExponent;
    if (target <= zeta_mean_log(hi)) {
        return {hi, true};
    }
    if (target >= zeta_mean_log(lo)) {
        return {lo, true};
    }
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (zeta_mean_log(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), false};
}

FittedCount fit_count(const DailySeries& series, const CountModelSpec& spec, const CountFitOptions& opts) {
    const CountLikelihood likelihood(series);
    const WindowInfo window{series.start_date(), series.length(), series.length()};
    const int k = spec.free_parameters();

    const auto counts = likelihood.history().counts();
    const auto constant = zeta_mle(counts);
    if (spec.variant == CountVariant::constant) {
        CountParams p;
        p.s = constant.s;
        const double ll = likelihood(spec, p);
        ConvergenceReport report{"zeta-score-root", !constant.boundary, 0, 1, 0, {{0, ll, 1, !constant.boundary, {}}}};
        return {spec, p, ll, aic(ll, k), k, window, std::move(report), constant.boundary};
    }

    const auto transform = make_transform(spec);
    const Objective objective = [&](std::span<const double> free) {
        return -likelihood(spec, unpack(spec, transform.from_free(free)));
    };

    // beta_c that reproduces the constant-model exponent when alpha_c = 0
    const double s0 = std::max(constant.s, 1.01);
    const double beta_c = spec.variant == CountVariant::self_exciting ? -std::log1p(-1.0 / s0) : std::log(s0);
    std::vector<std::vector<double>> grid;
    for (double alpha_c : {0.1, 0.5}) {
        for (double mu_c : {2.5, 20.0}) {
            grid.push_back(transform.to_free(std::vector<double>{beta_c, alpha_c, mu_c}));
        }
    }
    std::optional<std::vector<double>> warm;
    if (opts.warm_start) {
        warm = transform.to_free(pack(spec, *opts.warm_start));
    }
    const auto starts = seeded_starts(std::move(grid), std::max(1, opts.starts), opts.seed, warm);
    return best_of_starts(starts, objective, opts.minimize, true,
                          [&](const MinimizeResult& best, ConvergenceReport report) {
                              const auto params = unpack(spec, transform.from_free(best.x));
                              const double ll = -best.value;
                              return FittedCount{spec, params, ll, aic(ll, k), k, window, std::move(report), false};
                          });
}

} // namespace sehurdle
