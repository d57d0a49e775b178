#include "sehurdle/timeline.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

namespace sehurdle {

namespace {

using std::chrono::sys_days;

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

// Reads lines, skipping blanks and '#' comments; checks the header.
template <class RowFn>
void read_csv(std::istream& in, RowFn&& on_row) {
    std::string line;
    bool header_seen = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        if (!header_seen) {
            const auto fields = split_fields(view);
            if (fields.empty() || fields[0] != "date" || fields.size() > 2 ||
                (fields.size() == 2 && fields[1] != "count")) {
                throw ParseError("line " + std::to_string(line_no) + ": expected header 'date,count'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(view);
        if (fields.size() > 2) {
            throw ParseError("line " + std::to_string(line_no) + ": too many fields");
        }
        try {
            on_row(fields);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header_seen) {
        throw ParseError("missing header 'date,count'");
    }
}

} // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const int y = parse_int(text.substr(0, 4), "year");
    const int m = parse_int(text.substr(5, 2), "month");
    const int d = parse_int(text.substr(8, 2), "day");
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw ParseError("invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(Date date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Date add_days(Date date, long days) {
    return Date{sys_days{date} + std::chrono::days{days}};
}

long days_between(Date from, Date to) {
    return static_cast<long>((sys_days{to} - sys_days{from}).count());
}

DailySeries::DailySeries(Date start, std::vector<int> counts) : start_(start), counts_(std::move(counts)) {
    if (!start_.ok()) {
        throw DomainError("series start date is not a valid calendar date");
    }
    if (counts_.empty()) {
        throw DomainError("a daily series needs at least one day");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 0) {
            throw DomainError("negative count on day " + std::to_string(i + 1));
        }
    }
}

long DailySeries::total_events() const noexcept {
    long total = 0;
    for (int c : counts_) {
        total += c;
    }
    return total;
}

long DailySeries::event_day_count() const noexcept {
    return static_cast<long>(std::count_if(counts_.begin(), counts_.end(), [](int c) { return c >= 1; }));
}

DailySeries DailySeries::slice(long first, long last) const {
    if (first < 1 || last > length() || first > last) {
        throw DomainError("slice [" + std::to_string(first) + ", " + std::to_string(last) + "] outside series");
    }
    return DailySeries(date_of(first), std::vector<int>(counts_.begin() + (first - 1), counts_.begin() + last));
}

EventHistory::EventHistory(std::vector<long> days, std::vector<int> counts)
    : days_(std::move(days)), counts_(std::move(counts)) {
    if (days_.size() != counts_.size()) {
        throw DomainError("event days and event counts differ in length");
    }
    for (std::size_t i = 0; i < days_.size(); ++i) {
        if (counts_[i] < 1) {
            throw DomainError("event counts must be >= 1");
        }
        if (i > 0 && days_[i] <= days_[i - 1]) {
            throw DomainError("event days must be strictly increasing");
        }
    }
}

std::size_t EventHistory::count_before(long t) const {
    return static_cast<std::size_t>(std::lower_bound(days_.begin(), days_.end(), t) - days_.begin());
}

EventHistory EventHistory::through(long t) const {
    const auto n = count_before(t + 1);
    EventHistory out;
    out.days_.assign(days_.begin(), days_.begin() + static_cast<std::ptrdiff_t>(n));
    out.counts_.assign(counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

void EventHistory::append(long day, int count) {
    if (count < 1) {
        throw DomainError("event counts must be >= 1");
    }
    if (!days_.empty() && day <= days_.back()) {
        throw DomainError("appended event day must follow the last event day");
    }
    days_.push_back(day);
    counts_.push_back(count);
}

DailySeries ingest_incidents(std::span<const IncidentRecord> records, const DateRange& window) {
    const long n = window.length();
    if (n < 1) {
        throw DomainError("ingestion window is empty");
    }
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (const auto& rec : records) {
        if (!window.contains(rec.date)) {
            throw DomainError("incident dated " + format_date(rec.date) + " lies outside the window " +
                              format_date(window.first) + ".." + format_date(window.last));
        }
        if (rec.count < 1) {
            throw DomainError("incident dated " + format_date(rec.date) + " has non-positive count");
        }
        counts[static_cast<std::size_t>(days_between(window.first, rec.date))] += rec.count;
    }
    return DailySeries(window.first, std::move(counts));
}

EventHistory to_history(const DailySeries& series) {
    std::vector<long> days;
    std::vector<int> counts;
    for (long t = 1; t <= series.length(); ++t) {
        if (const int c = series.count(t); c >= 1) {
            days.push_back(t);
            counts.push_back(c);
        }
    }
    return EventHistory(std::move(days), std::move(counts));
}

DailySeries to_series(const EventHistory& history, Date start, long length) {
    if (length < 1) {
        throw DomainError("series length must be >= 1");
    }
    std::vector<int> counts(static_cast<std::size_t>(length), 0);
    for (std::size_t i = 0; i < history.size(); ++i) {
        const long day = history.days()[i];
        if (day < 1 || day > length) {
            throw DomainError("event day " + std::to_string(day) + " outside series of length " +
                              std::to_string(length));
        }
        counts[static_cast<std::size_t>(day - 1)] = history.counts()[i];
    }
    return DailySeries(start, std::move(counts));
}

std::pair<DailySeries, DailySeries> split(const DailySeries& series, Date boundary) {
    const long day = series.day_of(boundary);
    if (day <= 1 || day > series.length()) {
        throw DomainError("split boundary " + format_date(boundary) + " must lie strictly inside " +
                          format_date(series.start_date()) + ".." + format_date(series.end_date()));
    }
    return {series.slice(1, day - 1), series.slice(day, series.length())};
}

std::vector<IncidentRecord> read_incident_csv(std::istream& in) {
    std::vector<IncidentRecord> records;
    read_csv(in, [&](const std::vector<std::string_view>& fields) {
        IncidentRecord rec{parse_date(fields[0]), 1};
        if (fields.size() == 2 && !fields[1].empty()) {
            rec.count = parse_int(fields[1], "count");
            if (rec.count < 1) {
                throw ParseError("incident count must be a positive integer");
            }
        }
        records.push_back(rec);
    });
    return records;
}

DailySeries read_series_csv(std::istream& in) {
    std::vector<int> counts;
    Date start{};
    Date previous{};
    read_csv(in, [&](const std::vector<std::string_view>& fields) {
        const Date d = parse_date(fields[0]);
        if (fields.size() != 2 || fields[1].empty()) {
            throw ParseError("series rows need a count");
        }
        const int c = parse_int(fields[1], "count");
        if (c < 0) {
            throw ParseError("series counts must be non-negative");
        }
        if (counts.empty()) {
            start = d;
        } else if (days_between(previous, d) != 1) {
            throw ParseError("series dates must be consecutive; gap after " + format_date(previous));
        }
        previous = d;
        counts.push_back(c);
    });
    if (counts.empty()) {
        throw ParseError("series CSV has no rows");
    }
    return DailySeries(start, std::move(counts));
}

void write_series_csv(std::ostream& out, const DailySeries& series, std::string_view comment) {
    if (!comment.empty()) {
        out << "# " << comment << '\n';
    }
    out << "date,count\n";
    for (long t = 1; t <= series.length(); ++t) {
        out << format_date(series.date_of(t)) << ',' << series.count(t) << '\n';
    }
}

std::vector<int> training_count_multiset() {
    std::vector<int> counts;
    counts.insert(counts.end(), 130, 1);
    counts.insert(counts.end(), 16, 2);
    counts.insert(counts.end(), 7, 3);
    counts.push_back(4);
    for (int extreme : {6, 10, 11, 36}) {
        counts.push_back(extreme);
    }
    return counts;
}

DailySeries training_fixture(std::uint64_t seed) {
    constexpr long kDays = 2557;
    const Date start = parse_date("1994-01-01");
    auto rng = make_rng(seed, 0x7ab1e1);

    std::vector<long> positions(kDays);
    for (long i = 0; i < kDays; ++i) {
        positions[static_cast<std::size_t>(i)] = i;
    }
    // Fisher-Yates
    for (std::size_t i = positions.size() - 1; i > 0; --i) {
        std::swap(positions[i], positions[uniform_below(rng, i + 1)]);
    }
    const auto multiset = training_count_multiset();
    std::vector<int> counts(kDays, 0);
    for (std::size_t k = 0; k < multiset.size(); ++k) {
        counts[static_cast<std::size_t>(positions[k])] = multiset[k];
    }
    return DailySeries(start, std::move(counts));
}

} // namespace sehurdle
