#include "sehurdle/errors.hpp"
#include "sehurdle/estimate.hpp"
#include "sehurdle/simulate.hpp"
#include "sehurdle/zeta.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace sehurdle;

TEST(Minimize, Quadratic) {
    const auto r = minimize([](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); }, {0.0});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 3.0, 1e-6);
}

TEST(Minimize, Rosenbrock) {
    const auto rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = minimize(rosen, {-1.2, 1.0});
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4);
    EXPECT_LE(r.evaluations, 10'000);
}

TEST(Minimize, NonFiniteStartIsAnError) {
    const auto nan = [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); };
    EXPECT_THROW((void)minimize(nan, {1.0}), FitError);
    const auto inf = [](std::span<const double>) { return std::numeric_limits<double>::infinity(); };
    EXPECT_THROW((void)minimize(inf, {1.0}), FitError);
}

TEST(Minimize, NonFiniteStepsAreRejected) {
    // Undefined left of 0.5; the optimum (0.7) sits close to the wall.
    long bad_calls = 0;
    const auto f = [&](std::span<const double> x) {
        if (x[0] < 0.5) {
            ++bad_calls;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return std::pow(x[0] - 0.7, 2);
    };
    const auto r = minimize(f, {3.0});
    EXPECT_NEAR(r.x[0], 0.7, 1e-6);
    EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Minimize, EvaluationCap) {
    MinimizeOptions opts;
    opts.max_evaluations = 50;
    const auto rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = minimize(rosen, {-1.2, 1.0}, opts);
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.evaluations, 60);
}

TEST(Transform, RoundTrip) {
    const ParamTransform t({"beta0", "alpha", "mu"}, {Constraint::real, Constraint::positive, Constraint::above_one});
    auto rng = make_rng(1);
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> v{10.0 * uniform01(rng) - 5.0, std::exp(8.0 * uniform01(rng) - 4.0),
                                    1.0 + std::exp(8.0 * uniform01(rng) - 4.0)};
        const auto back = t.from_free(t.to_free(v));
        for (std::size_t k = 0; k < v.size(); ++k) {
            EXPECT_NEAR(back[k], v[k], 1e-12 * std::max(1.0, std::abs(v[k])));
        }
    }
    EXPECT_THROW((void)t.to_free(std::vector<double>{0.0, -1.0, 2.0}), DomainError);
    EXPECT_THROW((void)t.to_free(std::vector<double>{0.0, 1.0, 1.0}), DomainError);
}

TEST(Transform, AlwaysInDomain) {
    const auto t = make_transform(hurdle_spec_by_name("SE6"));
    auto rng = make_rng(2);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> free(t.size());
        for (auto& v : free) {
            v = 60.0 * uniform01(rng) - 30.0;
        }
        const auto p = unpack(hurdle_spec_by_name("SE6"), t.from_free(free));
        EXPECT_GE(p.shot->alpha, 0.0);
        EXPECT_GT(p.shot->kernel.mean(), 1.0);
        EXPECT_GT(*p.shot->kernel.size(), 0.0);
    }
}

TEST(PackUnpack, RoundTrip) {
    const auto spec = hurdle_spec_by_name("SE5");
    HurdleParams p;
    p.baseline = {-5.99, 2.68, 0.0, -0.38, -0.42, kSeasonalPeriod, spec.terms};
    p.shot = ShotNoiseParams{0.82, DecayKernel::negative_binomial(36.57, 0.43)};
    EXPECT_EQ(pack(spec, unpack(spec, pack(spec, p))), pack(spec, p));
    EXPECT_THROW((void)unpack(spec, std::vector<double>{1.0}), DomainError);
}

TEST(FitHurdle, Bl1OnFixture) {
    const auto series = training_fixture(1);
    const auto fit = fit_hurdle(series, hurdle_spec_by_name("BL1"));
    EXPECT_NEAR(fit.params.baseline.beta0, std::log(-std::log(1.0 - 158.0 / 2557.0)), 1e-12);
    EXPECT_NEAR(fit.params.baseline.beta0, -2.752, 1e-3);
    EXPECT_NEAR(fit.aic, 1187.77, 0.01);
    EXPECT_EQ(fit.free_parameters, 1);
    EXPECT_EQ(fit.report.method, "closed-form");
}

TEST(FitHurdle, Bl1OptimizerAgreesWithClosedForm) {
    const auto series = training_fixture(4);
    FitOptions opts;
    opts.closed_form = false;
    const auto numeric = fit_hurdle(series, hurdle_spec_by_name("BL1"), opts);
    EXPECT_NEAR(numeric.params.baseline.beta0, constant_model_beta0(series), 1e-4);
    EXPECT_EQ(numeric.report.method, "nelder-mead");
}

TEST(FitHurdle, DegenerateSeriesFails) {
    const DailySeries none(training_fixture(1).start_date(), std::vector<int>(50, 0));
    EXPECT_THROW((void)fit_hurdle(none, hurdle_spec_by_name("BL1")), FitError);
    EXPECT_THROW((void)fit_hurdle(none, hurdle_spec_by_name("SE1")), FitError);
    const DailySeries all(training_fixture(1).start_date(), std::vector<int>(50, 1));
    EXPECT_THROW((void)fit_hurdle(all, hurdle_spec_by_name("BL2")), FitError);
}

TEST(FitHurdle, NestedModelsNeverLoseLikelihood) {
    auto model = se1_reference_model();
    const auto series = simulate(model, 2557, 31);
    const auto bl1 = fit_hurdle(series, hurdle_spec_by_name("BL1"));
    const auto bl2 = fit_hurdle(series, hurdle_spec_by_name("BL2"));
    const auto bl3 = fit_hurdle(series, hurdle_spec_by_name("BL3"));
    const auto se1 = fit_hurdle(series, hurdle_spec_by_name("SE1"));
    EXPECT_GE(bl2.loglik, bl1.loglik - 1e-6);
    EXPECT_GE(bl3.loglik, bl2.loglik - 1e-6);
    EXPECT_GE(se1.loglik, bl1.loglik - 1e-6);
    EXPECT_LT(se1.aic, bl1.aic); // clustered data favors the self-exciting model
}

TEST(FitHurdle, ReproducibleAndSerialMatchesParallel) {
    const auto series = simulate(se1_reference_model(), 2000, 12);
    FitOptions opts;
    opts.seed = 42;
    const auto a = fit_hurdle(series, hurdle_spec_by_name("SE1"), opts);
    const auto b = fit_hurdle(series, hurdle_spec_by_name("SE1"), opts);
    const auto c = fit_hurdle_serial(series, hurdle_spec_by_name("SE1"), opts);
    const auto spec = hurdle_spec_by_name("SE1");
    EXPECT_EQ(pack(spec, a.params), pack(spec, b.params));
    EXPECT_EQ(pack(spec, a.params), pack(spec, c.params));
    EXPECT_EQ(a.report.best_start, c.report.best_start);
    EXPECT_EQ(a.report.starts.size(), 5u);
}

TEST(FitHurdle, WarmStartIsStartZero) {
    const auto series = simulate(se1_reference_model(), 1500, 3);
    FitOptions opts;
    opts.starts = 1;
    opts.warm_start = se1_reference_model().hurdle;
    const auto fit = fit_hurdle(series, hurdle_spec_by_name("SE1"), opts);
    EXPECT_EQ(fit.report.starts.size(), 1u);
    EXPECT_GE(fit.loglik, hurdle_loglik(series, hurdle_spec_by_name("SE1"), se1_reference_model().hurdle) - 1e-9);
}

TEST(ZetaMle, Fixture) {
    const auto counts = training_count_multiset();
    const auto mle = zeta_mle(counts);
    EXPECT_FALSE(mle.boundary);
    EXPECT_NEAR(mle.s, 2.86, 0.005);
}

TEST(ZetaMle, AllOnesHitsBoundary) {
    const std::vector<int> ones(20, 1);
    const auto mle = zeta_mle(ones);
    EXPECT_TRUE(mle.boundary);
    EXPECT_EQ(mle.s, kMaxZetaExponent);
    EXPECT_THROW((void)zeta_mle(std::vector<int>{}), FitError);
    EXPECT_THROW((void)zeta_mle(std::vector<int>{1, 0}), DomainError);
}

// The root maximizes the likelihood over a fine grid.
TEST(ZetaMle, GridOracle) {
    auto rng = make_rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> counts(5 + uniform_below(rng, 60));
        const double s_true = 1.5 + 3.0 * uniform01(rng);
        for (auto& c : counts) {
            c = static_cast<int>(std::min<long>(draw_zeta(s_true, rng), 1'000'000));
        }
        counts[0] = 2; // keep away from the all-ones boundary
        double sum_log = 0.0;
        for (int c : counts) {
            sum_log += std::log(c);
        }
        const auto n = static_cast<double>(counts.size());
        double best_s = 0.0;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (double s = 1.0001; s <= 10.0; s += 1e-4) {
            const double ll = -s * sum_log - n * std::log(zeta_norm(s));
            if (ll > best_ll) {
                best_ll = ll;
                best_s = s;
            }
        }
        EXPECT_NEAR(zeta_mle(counts).s, best_s, 1e-3);
    }
}

TEST(FitCount, CzOnFixture) {
    const auto fit = fit_count(training_fixture(1), CountModelSpec{CountVariant::constant});
    EXPECT_NEAR(fit.params.s, 2.86, 0.005);
    EXPECT_NEAR(fit.aic, 241.0, 0.5);
    EXPECT_FALSE(fit.boundary);
}

namespace {

SimulationModel count_sim_model(CountVariant variant, const CountParams& p) {
    // Dense enough event days that the short count kernel sees recent neighbours.
    SimulationModel m;
    m.hurdle_spec = hurdle_spec_by_name("BL1");
    m.hurdle.baseline.beta0 = -1.5;
    m.count_spec = CountModelSpec{variant};
    m.count = p;
    return m;
}

} // namespace

TEST(FitCount, SelfExcitingRecoversPositiveMagnitude) {
    CountParams truth;
    truth.beta_c = 0.25;
    truth.alpha_c = 0.3;
    truth.mu_c = 3.0;
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        const auto series = simulate(count_sim_model(CountVariant::self_exciting, truth), 3000, seed);
        const auto cz = fit_count(series, CountModelSpec{CountVariant::constant});
        const auto cse = fit_count(series, CountModelSpec{CountVariant::self_exciting});
        EXPECT_GT(cse.params.alpha_c, 0.05) << seed;
        EXPECT_LT(cse.aic, cz.aic) << seed;
    }
}

TEST(FitCount, NoSpuriousGainOnConstantData) {
    CountParams truth;
    truth.s = 2.86;
    double total_gap = 0.0;
    const int reps = 8;
    for (int rep = 0; rep < reps; ++rep) {
        const auto series = simulate(count_sim_model(CountVariant::constant, truth), 2557, 100 + rep);
        const auto cz = fit_count(series, CountModelSpec{CountVariant::constant});
        const auto cse = fit_count(series, CountModelSpec{CountVariant::self_exciting});
        EXPECT_GE(cse.loglik, cz.loglik - 0.5); // nested up to the alpha_c = 0 boundary
        total_gap += cse.aic - cz.aic;
    }
    EXPECT_GE(total_gap / reps, -2.0);
}
