#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mmspread/errors.hpp"
#include "mmspread/market_data.hpp"
#include "mmspread/rng.hpp"

namespace mmspread {

struct LogNormalParams {
    double mu = 0;     // location, log-space
    double sigma = 0;  // scale, log-space

    double mean() const { return std::exp(mu + sigma * sigma / 2.0); }
};

struct SimulationConfig {
    double mean_trades_per_interval = 60.0;
    double target_monthly_volume = 3.0e11;  // USD; public disclosures are coarse
    double cv_count = 0.5;
    double cv_size = 0.5;
    std::uint64_t seed = 42;
};

struct IntervalActivity {
    EpochSeconds timestamp = 0;
    std::int64_t trade_count = 0;
    double avg_trade_size = 0;  // USD per trade
    double volume = 0;          // USD; always trade_count * avg_trade_size
};

// Closed-form moment match: the implied distribution mean equals target_mean
// exactly.
inline LogNormalParams calibrate_lognormal(double target_mean, double cv) {
    if (!(target_mean > 0)) throw NonPositiveParameter("target_mean");
    if (!(cv > 0)) throw NonPositiveParameter("cv");
    LogNormalParams p;
    double sigma_sq = std::log(1.0 + cv * cv);
    p.sigma = std::sqrt(sigma_sq);
    p.mu = std::log(target_mean) - sigma_sq / 2.0;
    return p;
}

// Each interval owns a fixed block of four uniform draws (two normals), so
// activity at interval k is independent of how many intervals precede it.
inline constexpr std::uint64_t kDrawsPerInterval = 4;

inline IntervalActivity sample_interval_activity(const LogNormalParams& count_params,
                                                 const LogNormalParams& size_params,
                                                 const CounterRng& rng,
                                                 std::uint64_t interval_index) {
    std::uint64_t base = interval_index * kDrawsPerInterval;
    double count_draw =
        std::exp(count_params.mu + count_params.sigma * rng.normal(base));
    double size_draw =
        std::exp(size_params.mu + size_params.sigma * rng.normal(base + 2));

    IntervalActivity a;
    std::int64_t count = static_cast<std::int64_t>(std::llround(count_draw));
    a.trade_count = count < 1 ? 1 : count;
    a.avg_trade_size = size_draw;
    a.volume = static_cast<double>(a.trade_count) * a.avg_trade_size;
    return a;
}

// Mean trade size is backed out so that a full month at the configured
// count rate hits the target monthly volume.
inline double implied_mean_trade_size(const SimulationConfig& config,
                                      const TradingCalendar& calendar) {
    double trades_per_month = config.mean_trades_per_interval * 30.0 *
                              static_cast<double>(calendar.intervals_per_day());
    return config.target_monthly_volume / trades_per_month;
}

inline std::vector<IntervalActivity> simulate_period(
    const TradingCalendar& calendar, const std::vector<MinuteBar>& bars,
    const SimulationConfig& config) {
    if (bars.empty()) throw EmptyInput();
    if (!(config.mean_trades_per_interval > 0))
        throw NonPositiveParameter("mean_trades_per_interval");
    if (!(config.target_monthly_volume > 0))
        throw NonPositiveParameter("target_monthly_volume");

    LogNormalParams count_params =
        calibrate_lognormal(config.mean_trades_per_interval, config.cv_count);
    LogNormalParams size_params = calibrate_lognormal(
        implied_mean_trade_size(config, calendar), config.cv_size);

    CounterRng rng{config.seed};
    std::vector<IntervalActivity> out;
    out.reserve(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        IntervalActivity a =
            sample_interval_activity(count_params, size_params, rng, i);
        a.timestamp = bars[i].timestamp;
        out.push_back(a);
    }
    return out;
}

inline constexpr const char* kActivityCsvHeader =
    "timestamp_utc,trade_count,volume_usd";

// Real desk data can replace the simulation; avg_trade_size is implied.
inline std::vector<IntervalActivity> parse_interval_activity(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kActivityCsvHeader)
        throw MalformedRow(0, "expected header '" + std::string(kActivityCsvHeader) + "'");

    std::vector<IntervalActivity> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != 3) throw MalformedRow(row, "expected 3 fields");
        IntervalActivity a;
        if (!parse_iso8601_utc(fields[0], a.timestamp))
            throw MalformedRow(row, "bad timestamp '" + fields[0] + "'");
        char* end = nullptr;
        long long count = std::strtoll(fields[1].c_str(), &end, 10);
        if (!end || *end != '\0' || count < 0)
            throw MalformedRow(row, "bad trade_count");
        double vol;
        if (!detail::parse_price(fields[2], vol) || vol < 0)
            throw MalformedRow(row, "bad volume_usd");
        a.trade_count = count;
        a.volume = vol;
        a.avg_trade_size = count > 0 ? vol / static_cast<double>(count) : 0.0;
        if (!rows.empty() && a.timestamp <= rows.back().timestamp)
            throw NonMonotonicTimestamp(row);
        rows.push_back(a);
    }
    if (rows.empty()) throw EmptyInput();
    return rows;
}

}  // namespace mmspread
