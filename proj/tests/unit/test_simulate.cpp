#include "sehurdle/errors.hpp"
#include "sehurdle/simulate.hpp"
#include "sehurdle/zeta.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sehurdle;

namespace {

SimulationModel constant_model(double p) {
    SimulationModel m;
    m.hurdle_spec = hurdle_spec_by_name("BL1");
    m.hurdle.baseline.beta0 = hurdle_transform(p) > 0 ? std::log(hurdle_transform(p)) : 0.0;
    return m;
}

std::vector<int> counts_of(const DailySeries& s) { return {s.counts().begin(), s.counts().end()}; }

} // namespace

TEST(Simulate, ConstantModelIsBinomial) {
    const double p = 0.0618;
    const long days = 2557;
    const int sims = 200;
    double total = 0.0;
    for (int i = 0; i < sims; ++i) {
        const auto s = simulate(constant_model(p), days, static_cast<std::uint64_t>(i));
        total += static_cast<double>(s.event_day_count());
    }
    const double n = static_cast<double>(days) * sims;
    const double rate = total / n;
    EXPECT_NEAR(rate, p, 3.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST(Simulate, SameSeedSameSeries) {
    const auto model = se1_reference_model();
    const auto a = simulate(model, 1000, 77);
    const auto b = simulate(model, 1000, 77);
    const auto c = simulate(model, 1000, 78);
    EXPECT_EQ(counts_of(a), counts_of(b));
    EXPECT_NE(counts_of(a), counts_of(c));
}

TEST(Simulate, ExplicitRngMatchesSeed) {
    auto rng = make_rng(5);
    EXPECT_EQ(counts_of(simulate(se1_reference_model(), 500, rng)), counts_of(simulate(se1_reference_model(), 500, 5)));
}

TEST(Simulate, ReferenceModelEventRate) {
    const auto model = se1_reference_model();
    double total = 0.0;
    const int sims = 200;
    for (int i = 0; i < sims; ++i) {
        total += static_cast<double>(simulate(model, 2557, 1000 + static_cast<std::uint64_t>(i)).event_day_count());
    }
    const double mean = total / sims;
    EXPECT_GT(mean, 100.0);
    EXPECT_LT(mean, 230.0);
}

TEST(Simulate, WithoutCountModelCountsAreOne) {
    const auto s = simulate(se1_reference_model(), 1000, 3);
    for (long t = 1; t <= s.length(); ++t) {
        EXPECT_LE(s.count(t), 1);
    }
}

TEST(Simulate, ZetaCountsFollowTheExponent) {
    auto m = constant_model(0.5);
    m.count_spec = CountModelSpec{CountVariant::constant};
    m.count.s = 3.0;
    const auto s = simulate(m, 20000, 9);
    long ones = 0;
    long events = 0;
    for (long t = 1; t <= s.length(); ++t) {
        if (s.count(t) > 0) {
            ++events;
            ones += s.count(t) == 1 ? 1 : 0;
        }
    }
    const double expect = 1.0 / zeta_norm(3.0);
    const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(events));
    EXPECT_NEAR(static_cast<double>(ones) / static_cast<double>(events), expect, 4.0 * se);
}

TEST(Simulate, CountCap) {
    auto m = constant_model(0.5);
    m.count_spec = CountModelSpec{CountVariant::constant};
    m.count.s = 1.05;
    m.max_count = 50;
    const auto s = simulate(m, 2000, 2);
    for (long t = 1; t <= s.length(); ++t) {
        EXPECT_LE(s.count(t), 50);
    }
}

TEST(Simulate, ModelProbabilitiesMatchIntensity) {
    const auto model = se1_reference_model();
    const auto s = simulate(model, 800, 4);
    const auto p = model_probabilities(model, s);
    const auto h = to_history(s);
    ASSERT_EQ(p.size(), 800u);
    for (long t : {1L, 50L, 400L, 800L}) {
        EXPECT_NEAR(p[static_cast<std::size_t>(t - 1)], hurdle_prob(driving(t, 800, h, model.hurdle)), 1e-12);
    }
}

TEST(Simulate, RejectsBadLength) {
    EXPECT_THROW((void)simulate(se1_reference_model(), 0, 1), DomainError);
}
