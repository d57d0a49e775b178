#include "sehurdle/errors.hpp"
#include "sehurdle/rng.hpp"
#include "sehurdle/timeline.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

using namespace sehurdle;
using namespace std::chrono;

namespace {

Date d(int y, unsigned m, unsigned dd) { return year{y} / month{m} / day{dd}; }

} // namespace

TEST(Dates, ParseFormatRoundTrip) {
    EXPECT_EQ(parse_date("1994-01-01"), d(1994, 1, 1));
    EXPECT_EQ(format_date(d(2000, 2, 29)), "2000-02-29");
    EXPECT_EQ(days_between(d(1994, 1, 1), d(2001, 1, 1)), 2557);
    EXPECT_EQ(add_days(d(1999, 12, 31), 1), d(2000, 1, 1));
}

TEST(Dates, RejectsMalformed) {
    for (const char* bad : {"1994-1-01", "1994-02-30", "19940101", "", "1994-01-01x", "abcd-ef-gh"}) {
        EXPECT_THROW((void)parse_date(bad), ParseError) << bad;
    }
}

TEST(Ingest, SameDayRecordsAreSummed) {
    const DateRange window{d(2000, 1, 1), d(2000, 1, 5)};
    const std::vector<IncidentRecord> records{{d(2000, 1, 2), 1}, {d(2000, 1, 2), 1}, {d(2000, 1, 2), 1}};
    const auto s = ingest_incidents(records, window);
    EXPECT_EQ(std::vector<int>(s.counts().begin(), s.counts().end()), (std::vector<int>{0, 3, 0, 0, 0}));
}

TEST(Ingest, EmptyRecordsGiveZeros) {
    const auto s = ingest_incidents({}, DateRange{d(2000, 1, 1), d(2000, 1, 7)});
    EXPECT_EQ(s.length(), 7);
    EXPECT_EQ(s.total_events(), 0);
}

TEST(Ingest, OutOfWindowRecordNamesTheDate) {
    const std::vector<IncidentRecord> records{{d(2000, 2, 1), 1}};
    try {
        (void)ingest_incidents(records, DateRange{d(2000, 1, 1), d(2000, 1, 7)});
        FAIL() << "expected a rejection";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("2000-02-01"), std::string::npos);
    }
}

TEST(History, ScanOfSeries) {
    const DailySeries s(d(2000, 1, 1), {0, 3, 0, 1});
    const auto h = to_history(s);
    EXPECT_EQ(std::vector<long>(h.days().begin(), h.days().end()), (std::vector<long>{2, 4}));
    EXPECT_EQ(std::vector<int>(h.counts().begin(), h.counts().end()), (std::vector<int>{3, 1}));
    EXPECT_TRUE(to_history(DailySeries(d(2000, 1, 1), {0, 0, 0})).empty());
}

TEST(History, InvariantsEnforced) {
    EXPECT_THROW(EventHistory({2, 2}, {1, 1}), DomainError);
    EXPECT_THROW(EventHistory({3, 2}, {1, 1}), DomainError);
    EXPECT_THROW(EventHistory({1}, {0}), DomainError);
    EXPECT_THROW(DailySeries(d(2000, 1, 1), {}), DomainError);
    EXPECT_THROW(DailySeries(d(2000, 1, 1), {1, -1}), DomainError);
}

TEST(History, CountBeforeAndThrough) {
    const EventHistory h({2, 5, 9}, {1, 2, 1});
    EXPECT_EQ(h.count_before(2), 0u);
    EXPECT_EQ(h.count_before(3), 1u);
    EXPECT_EQ(h.count_before(100), 3u);
    EXPECT_EQ(h.through(5).size(), 2u);
}

TEST(Split, LengthsAndCounts) {
    std::vector<int> counts(14, 0);
    counts[3] = 2;
    counts[10] = 1;
    const DailySeries s(d(2000, 1, 1), counts);
    const auto [a, b] = split(s, d(2000, 1, 8));
    EXPECT_EQ(a.length(), 7);
    EXPECT_EQ(b.length(), 7);
    EXPECT_EQ(a.total_events() + b.total_events(), s.total_events());
    EXPECT_EQ(b.start_date(), d(2000, 1, 8));
}

TEST(Split, TrainingWindowLength) {
    const DailySeries s(d(1994, 1, 1), std::vector<int>(static_cast<std::size_t>(days_between(d(1994, 1, 1), d(2007, 12, 31)) + 1), 0));
    const auto [train, test] = split(s, d(2001, 1, 1));
    EXPECT_EQ(train.length(), 2557);
    EXPECT_EQ(train.length() + test.length(), s.length());
}

TEST(Split, DegenerateBoundariesRejected) {
    const DailySeries s(d(2000, 1, 1), std::vector<int>(10, 0));
    EXPECT_THROW((void)split(s, d(2000, 1, 1)), DomainError);
    EXPECT_THROW((void)split(s, d(2000, 1, 20)), DomainError);
    EXPECT_THROW((void)split(s, d(1999, 12, 1)), DomainError);
}

TEST(Fixture, Totals) {
    const auto multiset = training_count_multiset();
    EXPECT_EQ(multiset.size(), 158u);
    EXPECT_EQ(std::accumulate(multiset.begin(), multiset.end(), 0), 250);
    const auto s = training_fixture(3);
    EXPECT_EQ(s.length(), 2557);
    EXPECT_EQ(s.event_day_count(), 158);
    EXPECT_EQ(s.length() - s.event_day_count(), 2399);
    EXPECT_EQ(s.total_events(), 250);
    EXPECT_EQ(s.start_date(), d(1994, 1, 1));
    const auto h = to_history(s);
    EXPECT_EQ(std::accumulate(h.counts().begin(), h.counts().end(), 0), 250);
}

TEST(Fixture, SeedDeterminesPlacement) {
    EXPECT_EQ(training_fixture(5), training_fixture(5));
    EXPECT_FALSE(training_fixture(5) == training_fixture(6));
}

// Random series: ingest -> history -> series is the identity.
TEST(Property, IngestHistoryRoundTrip) {
    auto rng = make_rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const long len = 1 + static_cast<long>(uniform_below(rng, 60));
        std::vector<int> counts(static_cast<std::size_t>(len));
        std::vector<IncidentRecord> records;
        const Date start = d(2001, 3, 1);
        for (long t = 0; t < len; ++t) {
            const int c = uniform01(rng) < 0.3 ? 1 + static_cast<int>(uniform_below(rng, 4)) : 0;
            counts[static_cast<std::size_t>(t)] = c;
            for (int k = 0; k < c; ++k) {
                records.push_back({add_days(start, t), 1});
            }
        }
        const auto s = ingest_incidents(records, DateRange{start, add_days(start, len - 1)});
        EXPECT_EQ(std::vector<int>(s.counts().begin(), s.counts().end()), counts);
        EXPECT_EQ(to_series(to_history(s), start, len), s);
        if (len >= 2) {
            const long b = 2 + static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(len - 1)));
            const auto [x, y] = split(s, s.date_of(b));
            EXPECT_EQ(x.total_events() + y.total_events(), s.total_events());
        }
    }
}

TEST(Csv, IncidentParsing) {
    std::istringstream in("date,count\n# comment\n2000-01-02,2\n2000-01-03,\n\n2000-01-03\r\n");
    const auto records = read_incident_csv(in);
    ASSERT_EQ(records.size(), 3u);
    EXPECT_EQ(records[0].count, 2);
    EXPECT_EQ(records[1].count, 1);
    EXPECT_EQ(records[2].count, 1);

    std::istringstream only_dates("date\n2000-01-02\n");
    EXPECT_EQ(read_incident_csv(only_dates).size(), 1u);
}

TEST(Csv, IncidentErrorsCarryLineNumbers) {
    std::istringstream in("date,count\n2000-01-02,1\n2000-13-02,1\n");
    try {
        (void)read_incident_csv(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    std::istringstream zero("date,count\n2000-01-02,0\n");
    EXPECT_THROW((void)read_incident_csv(zero), ParseError);
    std::istringstream header("when,count\n");
    EXPECT_THROW((void)read_incident_csv(header), ParseError);
}

TEST(Csv, SeriesRoundTrip) {
    const auto s = training_fixture(2);
    std::stringstream buf;
    write_series_csv(buf, s, "format_version=1 seed=2");
    EXPECT_EQ(read_series_csv(buf), s);
}

TEST(Csv, SeriesRequiresConsecutiveDays) {
    std::istringstream gap("date,count\n2000-01-01,0\n2000-01-03,1\n");
    EXPECT_THROW((void)read_series_csv(gap), ParseError);
}
