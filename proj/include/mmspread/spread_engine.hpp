#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>

#include "mmspread/errors.hpp"
#include "mmspread/factors.hpp"
#include "mmspread/market_data.hpp"
#include "mmspread/rolling_stats.hpp"
#include "mmspread/simulation.hpp"

namespace mmspread {

struct ConsolidationWeights {
    double w_price = 1.0 / 3.0;
    double w_trade_count = 1.0 / 3.0;
    double w_volume = 1.0 / 3.0;

    bool valid() const {
        return w_price >= 0 && w_trade_count >= 0 && w_volume >= 0 &&
               std::abs(w_price + w_trade_count + w_volume - 1.0) <= 1e-12;
    }
};

struct ClampParams {
    double m = 2.0;  // upper bound at mu + sigma/m
    double n = 3.0;  // lower bound at mu - sigma/n

    bool valid() const { return m > 0 && n > 0; }
};

struct SpreadConfig {
    double base_spread = 0.0002;  // 2 pips resting spread
    double min_spread = 0.00001;  // crossed-market floor

    bool valid() const { return min_spread > 0 && min_spread < base_spread; }
};

enum class Classification { increased, decreased, unchanged };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::increased: return "increased";
        case Classification::decreased: return "decreased";
        default: return "unchanged";
    }
}

// Full audit record for one quoted interval.
struct FactorSnapshot {
    EpochSeconds timestamp = 0;
    FactorValues factors;
    double raw_spread_factor = 0;   // S_rf
    double mu_srf = 0;              // rolling stats in force
    double sigma_srf = 0;
    double clamped_spread_factor = 0;  // S_f
    double spread_delta = 0;        // quoted - base, after the floor
    double quoted_spread = 0;
    Classification classification = Classification::unchanged;
    bool upper_bound_hit = false;
    bool lower_bound_hit = false;
    double interval_volume = 0;  // USD
};

struct Quote {
    double bid = 0;
    double offer = 0;
    double mid = 0;
};

inline double consolidate(const FactorValues& factors,
                          const ConsolidationWeights& weights) {
    return weights.w_price * factors.price_factor +
           weights.w_trade_count * factors.trade_count_factor +
           weights.w_volume * factors.volume_factor;
}

struct ClampResult {
    double value = 0;
    bool upper_hit = false;
    bool lower_hit = false;
};

inline ClampResult clamp_spread_factor(double raw, double mu, double sigma,
                                       const ClampParams& params) {
    double upper = mu + sigma / params.m;
    double lower = mu - sigma / params.n;
    ClampResult r;
    r.upper_hit = raw > upper;
    r.lower_hit = raw < lower;
    r.value = r.upper_hit ? upper : (r.lower_hit ? lower : raw);
    return r;
}

struct SpreadDecision {
    double spread_delta = 0;
    double quoted_spread = 0;
    Classification classification = Classification::unchanged;
};

// The adjustment is the clamped factor's deviation from its rolling mean;
// the minimum-spread floor shrinks the effective delta when the raw change
// would cross the market.
inline SpreadDecision apply_spread(double clamped, double mu,
                                   const SpreadConfig& config) {
    SpreadDecision d;
    double raw_delta = clamped - mu;
    d.quoted_spread = config.base_spread + raw_delta;
    if (d.quoted_spread < config.min_spread) d.quoted_spread = config.min_spread;
    d.spread_delta = d.quoted_spread - config.base_spread;
    d.classification = d.spread_delta > 0   ? Classification::increased
                       : d.spread_delta < 0 ? Classification::decreased
                                            : Classification::unchanged;
    return d;
}

inline Quote make_quote(double mid, double quoted_spread) {
    Quote q;
    q.mid = mid;
    q.bid = mid - quoted_spread / 2.0;
    q.offer = mid + quoted_spread / 2.0;
    if (q.bid <= 0) throw NonPositiveBid();
    return q;
}

// The feedback loop's memory: volatility state, gamma, the 30-day window,
// the stats frozen at the last day boundary, and the day under construction.
struct EngineState {
    VolatilityState volatility;
    GammaState gamma_state;
    RollingWindow window{30};
    ConsolidationWeights weights;
    ClampParams clamp;
    SpreadConfig spread;

    // Stats in force for the current day, refreshed by daily_refresh.
    double mu_srf = 0;
    double sigma_srf = 0;
    double trade_count_avg = 0;
    double volume_avg = 0;

    DailyAggregate current_day;
    double prev_proxy_rate = 0;
    EpochSeconds last_timestamp = 0;
    bool warmed_up = false;

    // gamma falls back to a floor when the price-factor window is all zero
    // (flat prices); the log-ratio factors then contribute ~nothing, which
    // is the right degenerate behaviour.
    static constexpr double kGammaFloor = 1e-12;

    void refresh_derived() {
        auto [mu, sd] = window.stats(FactorSeries::spread_factor);
        mu_srf = mu;
        sigma_srf = sd;
        trade_count_avg = window.rate_average(RateSeries::trades);
        volume_avg = window.rate_average(RateSeries::volume);
        try {
            gamma_state.gamma = update_gamma(window);
        } catch (const ZeroGamma&) {
            gamma_state.gamma = kGammaFloor;
        }
    }
};

struct StepResult {
    Quote quote;
    FactorSnapshot snapshot;
};

// One interval of the feedback loop. Factor order follows the model:
// proxy price -> innovation -> volatility -> activity factors -> weighted
// consolidation -> clamp against last boundary's stats -> spread -> quote.
// The interval's raw factor joins the day under construction only after the
// clamp, so no interval ever sees statistics that include itself.
inline StepResult step(EngineState& state, const MinuteBar& bar,
                       const IntervalActivity& activity) {
    if (!state.warmed_up) throw NotWarmedUp();
    if (activity.timestamp != bar.timestamp) throw TimestampMismatch();

    ProxyPrice proxy = proxy_price(bar);
    double epsilon = log_return(state.prev_proxy_rate, proxy.rate);
    state.volatility.sigma = update_volatility(state.volatility, epsilon);

    FactorValues factors;
    factors.price_factor = state.volatility.sigma;
    if (activity.trade_count < 1) {
        factors.trade_count_factor = kSaturatedFactor;
        factors.volume_factor = kSaturatedFactor;
    } else {
        factors.trade_count_factor =
            trade_count_factor(static_cast<double>(activity.trade_count),
                               state.trade_count_avg, state.gamma_state.gamma);
        factors.volume_factor = volume_factor(activity.volume, state.volume_avg,
                                              state.gamma_state.gamma);
    }

    double raw = consolidate(factors, state.weights);
    ClampResult clamped =
        clamp_spread_factor(raw, state.mu_srf, state.sigma_srf, state.clamp);
    SpreadDecision decision =
        apply_spread(clamped.value, state.mu_srf, state.spread);
    Quote quote = make_quote(proxy.rate, decision.quoted_spread);

    StepResult result;
    result.quote = quote;
    result.snapshot = {bar.timestamp,
                       factors,
                       raw,
                       state.mu_srf,
                       state.sigma_srf,
                       clamped.value,
                       decision.spread_delta,
                       decision.quoted_spread,
                       decision.classification,
                       clamped.upper_hit,
                       clamped.lower_hit,
                       activity.volume};

    state.current_day.day = utc_day(bar.timestamp);
    state.current_day.total_trades += static_cast<double>(activity.trade_count);
    state.current_day.total_volume += activity.volume;
    state.current_day.trading_minutes += 1;
    state.current_day.sum_price_factor += factors.price_factor;
    state.current_day.sum_spread_factor += raw;
    state.current_day.sum_spread_factor_sq += raw * raw;
    state.current_day.interval_count += 1;

    state.prev_proxy_rate = proxy.rate;
    state.last_timestamp = bar.timestamp;
    return result;
}

// Day-boundary refresh: the completed day enters every window and all five
// derived quantities take effect for the next day's intervals.
inline void daily_refresh(EngineState& state, const DailyAggregate& completed_day) {
    state.window.push_day(completed_day);
    state.refresh_derived();
    state.current_day = DailyAggregate{};
}

}  // namespace mmspread
