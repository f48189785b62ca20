#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmspread/errors.hpp"

namespace mmspread {

// Timestamps are UTC epoch seconds throughout; minute bars land on whole
// minutes.
using EpochSeconds = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's civil-date algorithms; valid far beyond any bar feed.
constexpr std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

// UTC day index (days since epoch); day boundaries are UTC midnight.
constexpr std::int64_t utc_day(EpochSeconds ts) {
    return ts >= 0 ? ts / kSecondsPerDay : (ts - kSecondsPerDay + 1) / kSecondsPerDay;
}

constexpr int utc_hour(EpochSeconds ts) {
    std::int64_t sec_of_day = ts - utc_day(ts) * kSecondsPerDay;
    return static_cast<int>(sec_of_day / 3600);
}

// "2013-07-24T00:01:00Z" -> epoch seconds; returns false on any format issue.
inline bool parse_iso8601_utc(const std::string& s, EpochSeconds& out) {
    int y, mo, d, h, mi, se;
    char z;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi,
                    &se, &z) != 7 ||
        z != 'Z')
        return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
        mi > 59 || se < 0 || se > 59)
        return false;
    out = days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + se;
    return true;
}

inline std::string format_iso8601_utc(EpochSeconds ts) {
    int y, mo, d;
    civil_from_days(utc_day(ts), y, mo, d);
    std::int64_t sec = ts - utc_day(ts) * kSecondsPerDay;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                  static_cast<int>(sec / 3600), static_cast<int>(sec / 60 % 60),
                  static_cast<int>(sec % 60));
    return buf;
}

// "2013-07-24" for report rows.
inline std::string format_utc_date(std::int64_t day_index) {
    int y, mo, d;
    civil_from_days(day_index, y, mo, d);
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, d);
    return buf;
}

struct MinuteBar {
    EpochSeconds timestamp = 0;
    double open = 0, high = 0, low = 0, close = 0;

    bool valid() const {
        return open > 0 && high > 0 && low > 0 && close > 0 && low <= open &&
               open <= high && low <= close && close <= high;
    }
};

struct ProxyPrice {
    EpochSeconds timestamp = 0;
    double rate = 0;
};

struct TradingCalendar {
    std::int64_t interval_seconds = 60;
    std::int64_t minutes_per_day = 1440;

    bool valid() const {
        return interval_seconds > 0 && kSecondsPerDay % interval_seconds == 0;
    }
    std::int64_t intervals_per_day() const { return kSecondsPerDay / interval_seconds; }
};

inline constexpr const char* kBarCsvHeader = "timestamp_utc,open,high,low,close";

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline bool parse_price(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && !s.empty() && std::isfinite(out);
}
}  // namespace detail

// Strict whole-stream parse: any malformed row rejects everything, so bad
// feeds never leak into the rolling statistics.
inline std::vector<MinuteBar> parse_minute_bars(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kBarCsvHeader)
        throw MalformedRow(0, "expected header '" + std::string(kBarCsvHeader) + "'");

    std::vector<MinuteBar> bars;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != 5) throw MalformedRow(row, "expected 5 fields");
        MinuteBar bar;
        if (!parse_iso8601_utc(fields[0], bar.timestamp))
            throw MalformedRow(row, "bad timestamp '" + fields[0] + "'");
        if (!detail::parse_price(fields[1], bar.open) ||
            !detail::parse_price(fields[2], bar.high) ||
            !detail::parse_price(fields[3], bar.low) ||
            !detail::parse_price(fields[4], bar.close))
            throw MalformedRow(row, "bad price field");
        if (!bar.valid()) throw MalformedRow(row, "OHLC invariant violated");
        if (!bars.empty() && bar.timestamp <= bars.back().timestamp)
            throw NonMonotonicTimestamp(row);
        bars.push_back(bar);
    }
    if (bars.empty()) throw EmptyInput();
    return bars;
}

inline void write_minute_bars(std::ostream& out, const std::vector<MinuteBar>& bars) {
    out << kBarCsvHeader << '\n';
    char buf[128];
    for (const auto& b : bars) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f",
                      format_iso8601_utc(b.timestamp).c_str(), b.open, b.high,
                      b.low, b.close);
        out << buf << '\n';
    }
}

inline ProxyPrice proxy_price(const MinuteBar& bar) {
    return {bar.timestamp, (bar.open + bar.high + bar.low + bar.close) / 4.0};
}

// The innovation for the volatility recursion: ln(r_curr / r_prev).
inline double log_return(double r_prev, double r_curr) {
    if (r_prev <= 0 || r_curr <= 0) throw NonPositiveRate();
    return std::log(r_curr / r_prev);
}

}  // namespace mmspread
