#include "sehurdle/errors.hpp"
#include "sehurdle/forecast.hpp"
#include "sehurdle/simulate.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sehurdle;

namespace {

ForecastOptions bl1_options() {
    ForecastOptions o;
    o.hurdle = hurdle_spec_by_name("BL1");
    o.reference_hurdle = hurdle_spec_by_name("BL1");
    return o;
}

DailySeries short_fixture(long length) { return training_fixture(1).slice(1, length); }

} // namespace

TEST(GainTerms, SingleDay) {
    EXPECT_DOUBLE_EQ(hurdle_gain_term(1, 0.5, 0.25), std::numbers::ln2);
    EXPECT_DOUBLE_EQ(hurdle_gain_term(0, 0.5, 0.75), std::numbers::ln2);
    EXPECT_EQ(hurdle_gain_term(1, 0.3, 0.3), 0.0);
    EXPECT_THROW((void)hurdle_gain_term(1, 0.0, 0.5), DomainError);
    EXPECT_THROW((void)hurdle_gain_term(0, 0.5, 1.0), DomainError);
}

TEST(GainTerms, CountClosedForm) {
    for (long y : {1L, 2L, 7L, 100L}) {
        for (double s : {1.5, 2.86, 4.0}) {
            const double s_ref = 2.2;
            const double expect = -(s - s_ref) * std::log(static_cast<double>(y)) - std::log(boost::math::zeta(s)) +
                                  std::log(boost::math::zeta(s_ref));
            EXPECT_NEAR(count_gain_term(y, s, s_ref), expect, 1e-10);
        }
    }
    EXPECT_EQ(count_gain_term(3, 2.5, 2.5), 0.0);
    EXPECT_THROW((void)count_gain_term(0, 2.0, 3.0), DomainError);
}

TEST(Forecast, SameModelHasZeroGain) {
    const auto s = short_fixture(500);
    const auto r = rolling_forecast(s, 401L, bl1_options());
    EXPECT_EQ(r.g, 0.0);
    EXPECT_EQ(r.g_count, 0.0);
    EXPECT_EQ(r.records.size(), 100u);
}

// p_hat on day t is the event-day fraction over days 1..t-1.
TEST(Forecast, Bl1TracksRunningFraction) {
    const auto s = short_fixture(420);
    const auto r = rolling_forecast(s, 301L, bl1_options());
    long events = 0;
    for (long t = 1; t < 301; ++t) {
        events += s.is_event_day(t) ? 1 : 0;
    }
    for (const auto& rec : r.records) {
        EXPECT_NEAR(rec.p_hat, static_cast<double>(events) / static_cast<double>(rec.day - 1), 1e-12);
        events += rec.event;
    }
    EXPECT_EQ(r.refit_days.size(), 119u);
}

TEST(Forecast, TotalsAreSumsOfTerms) {
    ForecastOptions o;
    o.count = CountModelSpec{CountVariant::self_exciting};
    o.refit_every = 30;
    o.starts = 2;
    const auto s = short_fixture(1200);
    const auto r = rolling_forecast(s, 1001L, o);
    double g = 0.0;
    double gc = 0.0;
    for (const auto& rec : r.records) {
        g += rec.g_contrib;
        gc += rec.gc_contrib;
        EXPECT_GT(rec.p_hat, 0.0);
        EXPECT_LT(rec.p_hat, 1.0);
        if (rec.event == 0) {
            EXPECT_EQ(rec.gc_contrib, 0.0);
        }
    }
    EXPECT_NEAR(r.g, g, 1e-9);
    EXPECT_NEAR(r.g_count, gc, 1e-9);
    EXPECT_NEAR(log_gain_hurdle(r.records), r.g, 1e-9);
    EXPECT_NEAR(log_gain_count(r.records), r.g_count, 1e-9);
}

// Scrambling the future cannot change any forecast made before it.
TEST(Forecast, NoLookAhead) {
    const auto s = short_fixture(700);
    std::vector<int> counts(s.counts().begin(), s.counts().end());
    auto rng = make_rng(99);
    const long cut = 640;
    for (long i = static_cast<long>(counts.size()) - 1; i > cut; --i) {
        const auto j = cut + static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(i - cut + 1)));
        std::swap(counts[static_cast<std::size_t>(i)], counts[static_cast<std::size_t>(j)]);
    }
    counts.back() = counts.back() == 0 ? 3 : 0; // guarantee the tails differ
    const DailySeries scrambled(s.start_date(), counts);

    ForecastOptions o;
    o.refit_every = 10;
    o.starts = 2;
    const auto a = rolling_forecast(s, 601L, o);
    const auto b = rolling_forecast(scrambled, 601L, o);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].day > cut) {
            break;
        }
        EXPECT_EQ(a.records[i].p_hat, b.records[i].p_hat) << "day " << a.records[i].day;
        EXPECT_EQ(a.records[i].pi_hat, b.records[i].pi_hat);
        EXPECT_EQ(a.records[i].s_t, b.records[i].s_t);
    }
}

TEST(Forecast, NoRefitWhenIntervalCoversTestWindow) {
    const auto s = short_fixture(500);
    auto o = bl1_options();
    o.refit_every = 100;
    const auto r = rolling_forecast(s, 401L, o);
    EXPECT_TRUE(r.refit_days.empty());
    for (const auto& rec : r.records) {
        EXPECT_EQ(rec.p_hat, r.records.front().p_hat);
    }
}

TEST(Forecast, DateSplit) {
    const auto s = short_fixture(500);
    const auto r = rolling_forecast(s, s.date_of(451), bl1_options());
    EXPECT_EQ(r.training_days, 450);
    EXPECT_EQ(r.records.front().date, s.date_of(451));
}

TEST(Forecast, RejectsBadSplit) {
    const auto s = short_fixture(100);
    EXPECT_THROW((void)rolling_forecast(s, 1L, bl1_options()), DomainError);
    EXPECT_THROW((void)rolling_forecast(s, 101L, bl1_options()), DomainError);
    auto o = bl1_options();
    o.refit_every = 0;
    EXPECT_THROW((void)rolling_forecast(s, 50L, o), DomainError);
}
