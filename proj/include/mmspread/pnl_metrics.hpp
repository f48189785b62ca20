#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

#include "mmspread/market_data.hpp"
#include "mmspread/spread_engine.hpp"

namespace mmspread {

// Monetary counters are held in integer cents so that per-day and per-hour
// buckets sum to the overall counters exactly, independent of accumulation
// order.
struct MetricCounters {
    std::int64_t intervals_quoted = 0;
    std::int64_t increases = 0;
    std::int64_t decreases = 0;
    std::int64_t unchanged = 0;
    std::int64_t upper_bound_hits = 0;
    std::int64_t lower_bound_hits = 0;
    std::int64_t volume_on_increase_cents = 0;
    std::int64_t volume_on_decrease_cents = 0;
    std::int64_t pnl_increase_cents = 0;

    void merge(const MetricCounters& o) {
        intervals_quoted += o.intervals_quoted;
        increases += o.increases;
        decreases += o.decreases;
        unchanged += o.unchanged;
        upper_bound_hits += o.upper_bound_hits;
        lower_bound_hits += o.lower_bound_hits;
        volume_on_increase_cents += o.volume_on_increase_cents;
        volume_on_decrease_cents += o.volume_on_decrease_cents;
        pnl_increase_cents += o.pnl_increase_cents;
    }

    bool operator==(const MetricCounters&) const = default;
};

struct BacktestReport {
    MetricCounters overall;
    std::map<std::int64_t, MetricCounters> by_day;  // UTC day index
    std::map<int, MetricCounters> by_hour;          // 0..23 UTC
};

// Each unit of volume executes on one side of the quote and captures half
// the spread change relative to the mid.
inline double pnl_increment(double spread_delta, double interval_volume) {
    return spread_delta * interval_volume / 2.0;
}

inline void accumulate(BacktestReport& report, const FactorSnapshot& snapshot) {
    MetricCounters delta;
    delta.intervals_quoted = 1;
    std::int64_t volume_cents = std::llround(snapshot.interval_volume * 100.0);
    switch (snapshot.classification) {
        case Classification::increased:
            delta.increases = 1;
            delta.volume_on_increase_cents = volume_cents;
            break;
        case Classification::decreased:
            delta.decreases = 1;
            delta.volume_on_decrease_cents = volume_cents;
            break;
        case Classification::unchanged:
            delta.unchanged = 1;
            break;
    }
    if (snapshot.upper_bound_hit) delta.upper_bound_hits = 1;
    if (snapshot.lower_bound_hit) delta.lower_bound_hits = 1;
    delta.pnl_increase_cents = std::llround(
        pnl_increment(snapshot.spread_delta, snapshot.interval_volume) * 100.0);

    report.overall.merge(delta);
    report.by_day[utc_day(snapshot.timestamp)].merge(delta);
    report.by_hour[utc_hour(snapshot.timestamp)].merge(delta);
}

namespace detail {
inline void write_counter_row(std::ostream& out, const std::string& key,
                              const MetricCounters& c) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%s,%lld,%lld,%lld,%lld,%lld,%lld,%.2f,%.2f,%.2f",
                  key.c_str(), static_cast<long long>(c.intervals_quoted),
                  static_cast<long long>(c.increases),
                  static_cast<long long>(c.decreases),
                  static_cast<long long>(c.unchanged),
                  static_cast<long long>(c.upper_bound_hits),
                  static_cast<long long>(c.lower_bound_hits),
                  static_cast<double>(c.volume_on_increase_cents) / 100.0,
                  static_cast<double>(c.volume_on_decrease_cents) / 100.0,
                  static_cast<double>(c.pnl_increase_cents) / 100.0);
    out << buf << '\n';
}
}  // namespace detail

inline constexpr const char* kDayTableColumns =
    "intervals,increases,decreases,unchanged,upper_hits,lower_hits,"
    "volume_increase_usd,volume_decrease_usd,pnl_usd";

// Day table: one row per trading day, ascending, plus a totals row equal to
// the overall counters.
inline void render_day_table(std::ostream& out, const BacktestReport& report) {
    out << "date," << kDayTableColumns << '\n';
    for (const auto& [day, counters] : report.by_day)
        detail::write_counter_row(out, format_utc_date(day), counters);
    detail::write_counter_row(out, "total", report.overall);
}

// Hour table: exactly 24 rows (0-23), zeros for empty buckets, plus totals.
inline void render_hour_table(std::ostream& out, const BacktestReport& report) {
    out << "hour," << kDayTableColumns << '\n';
    for (int h = 0; h < 24; ++h) {
        auto it = report.by_hour.find(h);
        detail::write_counter_row(out, std::to_string(h),
                                  it != report.by_hour.end() ? it->second
                                                             : MetricCounters{});
    }
    detail::write_counter_row(out, "total", report.overall);
}

}  // namespace mmspread
