#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sehurdle {

using Date = std::chrono::year_month_day;

[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(Date date);
[[nodiscard]] Date add_days(Date date, long days);
// Whole days from `from` to `to` (negative when `to` precedes `from`).
[[nodiscard]] long days_between(Date from, Date to);

// Inclusive calendar window [first, last].
struct DateRange {
    Date first;
    Date last;

    [[nodiscard]] long length() const { return days_between(first, last) + 1; }
    [[nodiscard]] bool contains(Date d) const {
        return days_between(first, d) >= 0 && days_between(d, last) >= 0;
    }
};

struct IncidentRecord {
    Date date;
    int count{1};
};

/// Daily event counts Y_1..Y_T starting at a calendar date. Day indices are
/// 1-based; dates only appear at the ingestion and output boundary.
class DailySeries {
public:
    DailySeries(Date start, std::vector<int> counts);

    [[nodiscard]] Date start_date() const noexcept { return start_; }
    [[nodiscard]] Date end_date() const { return date_of(length()); }
    [[nodiscard]] long length() const noexcept { return static_cast<long>(counts_.size()); }
    [[nodiscard]] std::span<const int> counts() const noexcept { return counts_; }

    [[nodiscard]] int count(long t) const { return counts_.at(static_cast<std::size_t>(t - 1)); }
    [[nodiscard]] bool is_event_day(long t) const { return count(t) >= 1; }
    [[nodiscard]] Date date_of(long t) const { return add_days(start_, t - 1); }
    [[nodiscard]] long day_of(Date d) const { return days_between(start_, d) + 1; }

    [[nodiscard]] long total_events() const noexcept;
    [[nodiscard]] long event_day_count() const noexcept;

    // Days first..last (1-based, inclusive) as a new series.
    [[nodiscard]] DailySeries slice(long first, long last) const;

    friend bool operator==(const DailySeries&, const DailySeries&) = default;

private:
    Date start_;
    std::vector<int> counts_;
};

/// Event days t_1 < t_2 < ... with their counts Y_i >= 1.
class EventHistory {
public:
    EventHistory() = default;
    EventHistory(std::vector<long> days, std::vector<int> counts);

    [[nodiscard]] std::size_t size() const noexcept { return days_.size(); }
    [[nodiscard]] bool empty() const noexcept { return days_.empty(); }
    [[nodiscard]] std::span<const long> days() const noexcept { return days_; }
    [[nodiscard]] std::span<const int> counts() const noexcept { return counts_; }

    // Number of events strictly before day t.
    [[nodiscard]] std::size_t count_before(long t) const;
    // Events on days <= t.
    [[nodiscard]] EventHistory through(long t) const;

    void append(long day, int count);

    friend bool operator==(const EventHistory&, const EventHistory&) = default;

private:
    std::vector<long> days_;
    std::vector<int> counts_;
};

[[nodiscard]] DailySeries ingest_incidents(std::span<const IncidentRecord> records, const DateRange& window);
[[nodiscard]] EventHistory to_history(const DailySeries& series);
[[nodiscard]] DailySeries to_series(const EventHistory& history, Date start, long length);

// Partition at `boundary`: the first part ends the day before it.
[[nodiscard]] std::pair<DailySeries, DailySeries> split(const DailySeries& series, Date boundary);

// CSV with header `date,count`; count may be omitted (defaults to 1).
[[nodiscard]] std::vector<IncidentRecord> read_incident_csv(std::istream& in);
// CSV with header `date,count`, one row per consecutive day.
[[nodiscard]] DailySeries read_series_csv(std::istream& in);
void write_series_csv(std::ostream& out, const DailySeries& series, std::string_view comment = {});

// Counts per event day for the 1994-2000 training window: 130 ones, 16 twos,
// 7 threes, one 4 and the extremes {6, 10, 11, 36}; 158 days, 250 attacks.
[[nodiscard]] std::vector<int> training_count_multiset();
// 2,557-day series from 1994-01-01 with the multiset above placed on
// uniformly shuffled days.
[[nodiscard]] DailySeries training_fixture(std::uint64_t seed = 1);

} // namespace sehurdle
