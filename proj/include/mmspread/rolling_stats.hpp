#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <utility>

#include "mmspread/errors.hpp"
#include "mmspread/kahan.hpp"

namespace mmspread {

// One trading day's contribution to the 30-day feedback windows. Carrying
// sums and sums of squares keeps eviction O(1) and exact.
struct DailyAggregate {
    std::int64_t day = 0;  // UTC day index
    double total_trades = 0;
    double total_volume = 0;  // USD
    std::int64_t trading_minutes = 0;
    double sum_price_factor = 0;
    double sum_spread_factor = 0;
    double sum_spread_factor_sq = 0;
    std::int64_t interval_count = 0;
};

enum class RateSeries { trades, volume };
enum class FactorSeries { spread_factor, price_factor };

// Trailing window of trading days with data; capacity counts days with
// aggregates, not calendar days, matching a per-trading-day denominator.
class RollingWindow {
  public:
    explicit RollingWindow(std::size_t capacity_days = 30)
        : capacity_(capacity_days) {}

    void push_day(const DailyAggregate& aggregate) {
        if (!days_.empty() && aggregate.day <= days_.back().day)
            throw OutOfOrderDay();
        days_.push_back(aggregate);
        if (days_.size() > capacity_) days_.pop_front();
    }

    std::size_t size() const { return days_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool full() const { return days_.size() == capacity_; }
    const std::deque<DailyAggregate>& days() const { return days_; }

    // TC_avg or V_avg: window totals over window trading minutes.
    double rate_average(RateSeries which) const {
        if (days_.empty()) throw EmptyWindow();
        KahanSum total;
        std::int64_t minutes = 0;
        for (const auto& d : days_) {
            total += (which == RateSeries::trades) ? d.total_trades : d.total_volume;
            minutes += d.trading_minutes;
        }
        if (minutes <= 0) throw EmptyWindow();
        return total.value() / static_cast<double>(minutes);
    }

    // Grand mean over every interval in the window (interval-count weighted).
    double mean(FactorSeries series) const {
        auto [sum, n] = sums(series).first;
        if (n < 1) throw InsufficientData("mean");
        return sum / static_cast<double>(n);
    }

    // Sample (n-1) standard deviation from (sum, sum of squares, n).
    std::pair<double, double> stats(FactorSeries series) const {
        auto [first, sum_sq] = sums(series);
        auto [sum, n] = first;
        if (n < 2) throw InsufficientData("standard deviation");
        double dn = static_cast<double>(n);
        double m = sum / dn;
        double var = (sum_sq - dn * m * m) / (dn - 1.0);
        if (var < 0) var = 0;  // rounding guard
        return {m, std::sqrt(var)};
    }

  private:
    std::pair<std::pair<double, std::int64_t>, double> sums(FactorSeries series) const {
        if (days_.empty()) throw EmptyWindow();
        KahanSum sum, sum_sq;
        std::int64_t n = 0;
        for (const auto& d : days_) {
            if (series == FactorSeries::spread_factor) {
                sum += d.sum_spread_factor;
                sum_sq += d.sum_spread_factor_sq;
            } else {
                sum += d.sum_price_factor;
            }
            n += d.interval_count;
        }
        return {{sum.value(), n}, sum_sq.value()};
    }

    std::size_t capacity_;
    std::deque<DailyAggregate> days_;
};

}  // namespace mmspread
