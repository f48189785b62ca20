#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmspread/config.hpp"
#include "mmspread/errors.hpp"
#include "mmspread/factors.hpp"
#include "mmspread/market_data.hpp"
#include "mmspread/pnl_metrics.hpp"
#include "mmspread/rng.hpp"
#include "mmspread/rolling_stats.hpp"
#include "mmspread/simulation.hpp"
#include "mmspread/spread_engine.hpp"

namespace mmspread {

struct BacktestResult {
    BacktestReport report;
    std::vector<FactorSnapshot> snapshots;
    std::vector<Quote> quotes;  // aligned with snapshots
    EngineState final_state;
};

namespace detail {

// Warmup replay over the first window_days of data: sigma_0 from the
// period's returns, then the recursion re-run from the start to generate
// the price-factor series that seeds gamma and the spread-factor window.
// Activity averages over the whole warmup stand in for the rolling averages
// that do not exist yet.
struct WarmupSeed {
    EngineState state;
    std::size_t bars_consumed = 0;
};

inline WarmupSeed seed_from_warmup(const RunConfig& config,
                                   const std::vector<MinuteBar>& bars,
                                   const std::vector<IntervalActivity>& activity,
                                   std::size_t warmup_end) {
    std::vector<double> proxies(warmup_end);
    for (std::size_t i = 0; i < warmup_end; ++i)
        proxies[i] = proxy_price(bars[i]).rate;

    std::vector<double> returns;
    returns.reserve(warmup_end);
    for (std::size_t i = 1; i < warmup_end; ++i)
        returns.push_back(log_return(proxies[i - 1], proxies[i]));
    double sigma0 = init_volatility(returns);

    EngineState state;
    state.volatility = {sigma0, config.alpha, config.beta, config.volatility_mode};
    state.window = RollingWindow(static_cast<std::size_t>(config.window_days));
    state.weights = config.weights;
    state.clamp = config.clamp;
    state.spread = config.spread;

    std::vector<double> price_factors(warmup_end);
    price_factors[0] = sigma0;
    VolatilityState vol = state.volatility;
    for (std::size_t i = 1; i < warmup_end; ++i) {
        vol.sigma = update_volatility(vol, returns[i - 1]);
        price_factors[i] = vol.sigma;
    }
    state.volatility.sigma = vol.sigma;

    double total_trades = 0, total_volume = 0, sum_pf = 0;
    for (std::size_t i = 0; i < warmup_end; ++i) {
        total_trades += static_cast<double>(activity[i].trade_count);
        total_volume += activity[i].volume;
        sum_pf += price_factors[i];
    }
    double dn = static_cast<double>(warmup_end);
    double tc_avg = total_trades / dn;
    double v_avg = total_volume / dn;
    double gamma = sum_pf / dn;
    if (!(gamma > 0)) gamma = EngineState::kGammaFloor;

    DailyAggregate agg;
    agg.day = utc_day(bars[0].timestamp);
    for (std::size_t i = 0; i < warmup_end; ++i) {
        std::int64_t day = utc_day(bars[i].timestamp);
        if (day != agg.day) {
            state.window.push_day(agg);
            agg = DailyAggregate{};
            agg.day = day;
        }
        double tc_f = activity[i].trade_count < 1
                          ? kSaturatedFactor
                          : std::log(static_cast<double>(activity[i].trade_count) /
                                     tc_avg) * gamma;
        double v_f = activity[i].trade_count < 1
                         ? kSaturatedFactor
                         : std::log(activity[i].volume / v_avg) * gamma;
        double s_rf = consolidate({price_factors[i], tc_f, v_f}, state.weights);
        agg.total_trades += static_cast<double>(activity[i].trade_count);
        agg.total_volume += activity[i].volume;
        agg.trading_minutes += 1;
        agg.sum_price_factor += price_factors[i];
        agg.sum_spread_factor += s_rf;
        agg.sum_spread_factor_sq += s_rf * s_rf;
        agg.interval_count += 1;
    }
    state.window.push_day(agg);

    state.refresh_derived();
    state.prev_proxy_rate = proxies[warmup_end - 1];
    state.last_timestamp = bars[warmup_end - 1].timestamp;
    state.warmed_up = true;
    return {std::move(state), warmup_end};
}

inline std::size_t count_trading_days(const std::vector<MinuteBar>& bars) {
    std::size_t n = 0;
    std::int64_t prev = -1;
    for (const auto& b : bars) {
        std::int64_t d = utc_day(b.timestamp);
        if (d != prev) ++n;
        prev = d;
    }
    return n;
}

// Index of the first bar past the first `warmup_days` distinct UTC dates.
inline std::size_t warmup_boundary(const std::vector<MinuteBar>& bars,
                                   std::size_t warmup_days) {
    std::size_t days_seen = 0;
    std::int64_t prev = -1;
    for (std::size_t i = 0; i < bars.size(); ++i) {
        std::int64_t d = utc_day(bars[i].timestamp);
        if (d != prev) {
            ++days_seen;
            prev = d;
        }
        if (days_seen > warmup_days) return i;
    }
    return bars.size();
}

}  // namespace detail

// Full pipeline: warmup seeding, then one engine step per interval with a
// daily refresh at each UTC day boundary. Bit-exact reproducible from
// (bars, activity-or-seed, config).
inline BacktestResult run_backtest(const RunConfig& config,
                                   const std::vector<MinuteBar>& bars,
                                   const std::vector<IntervalActivity>* supplied_activity = nullptr) {
    if (bars.empty()) throw EmptyInput();

    std::size_t warmup_days = static_cast<std::size_t>(config.window_days);
    std::size_t trading_days = detail::count_trading_days(bars);
    if (trading_days < warmup_days + 1)
        throw InsufficientHistory(trading_days, warmup_days + 1);

    std::vector<IntervalActivity> activity;
    if (supplied_activity) {
        if (supplied_activity->size() != bars.size()) throw TimestampMismatch();
        for (std::size_t i = 0; i < bars.size(); ++i)
            if ((*supplied_activity)[i].timestamp != bars[i].timestamp)
                throw TimestampMismatch();
        activity = *supplied_activity;
    } else {
        activity = simulate_period(config.calendar(), bars, config.simulation);
    }

    std::size_t start = detail::warmup_boundary(bars, warmup_days);
    detail::WarmupSeed seed =
        detail::seed_from_warmup(config, bars, activity, start);

    BacktestResult result;
    result.final_state = std::move(seed.state);
    EngineState& state = result.final_state;
    result.snapshots.reserve(bars.size() - start);
    result.quotes.reserve(bars.size() - start);

    std::int64_t active_day = -1;
    for (std::size_t i = start; i < bars.size(); ++i) {
        std::int64_t day = utc_day(bars[i].timestamp);
        if (active_day >= 0 && day != active_day)
            daily_refresh(state, state.current_day);
        active_day = day;
        StepResult step_result = step(state, bars[i], activity[i]);
        accumulate(result.report, step_result.snapshot);
        result.snapshots.push_back(step_result.snapshot);
        result.quotes.push_back(step_result.quote);
    }
    return result;
}

inline constexpr const char* kSnapshotCsvHeader =
    "timestamp_utc,price_factor,trade_count_factor,volume_factor,"
    "raw_spread_factor,mu_srf,sigma_srf,clamped_spread_factor,spread_delta,"
    "quoted_spread,classification,upper_hit,lower_hit,volume_usd";

inline void write_snapshots(std::ostream& out,
                            const std::vector<FactorSnapshot>& snapshots) {
    out << kSnapshotCsvHeader << '\n';
    char buf[512];
    for (const auto& s : snapshots) {
        std::snprintf(
            buf, sizeof(buf),
            "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s,%d,%d,%.2f",
            format_iso8601_utc(s.timestamp).c_str(), s.factors.price_factor,
            s.factors.trade_count_factor, s.factors.volume_factor,
            s.raw_spread_factor, s.mu_srf, s.sigma_srf, s.clamped_spread_factor,
            s.spread_delta, s.quoted_spread, to_string(s.classification),
            s.upper_bound_hit ? 1 : 0, s.lower_bound_hit ? 1 : 0,
            s.interval_volume);
        out << buf << '\n';
    }
}

// One line per interval for quote-stream mode.
inline void write_quote_line(std::ostream& out, const FactorSnapshot& snapshot,
                             const Quote& quote) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%s",
                  format_iso8601_utc(snapshot.timestamp).c_str(), quote.bid,
                  quote.offer, snapshot.spread_delta,
                  to_string(snapshot.classification));
    out << buf << '\n';
}

inline nlohmann::ordered_json summary_json(const BacktestReport& report,
                                           const RunConfig& config) {
    nlohmann::ordered_json j;
    const MetricCounters& o = report.overall;
    j["overall"] = {
        {"intervals_quoted", o.intervals_quoted},
        {"increases", o.increases},
        {"decreases", o.decreases},
        {"unchanged", o.unchanged},
        {"upper_bound_hits", o.upper_bound_hits},
        {"lower_bound_hits", o.lower_bound_hits},
        {"volume_on_increase_usd",
         static_cast<double>(o.volume_on_increase_cents) / 100.0},
        {"volume_on_decrease_usd",
         static_cast<double>(o.volume_on_decrease_cents) / 100.0},
        {"pnl_increase_usd", static_cast<double>(o.pnl_increase_cents) / 100.0},
    };
    j["config"] = {
        {"alpha", config.alpha},
        {"beta", config.beta},
        {"volatility_mode",
         config.volatility_mode == VolatilityMode::absolute ? "absolute" : "signed"},
        {"w_p", config.weights.w_price},
        {"w_tc", config.weights.w_trade_count},
        {"w_v", config.weights.w_volume},
        {"m", config.clamp.m},
        {"n", config.clamp.n},
        {"base_spread", config.spread.base_spread},
        {"min_spread", config.spread.min_spread},
        {"interval_seconds", config.interval_seconds},
        {"window_days", config.window_days},
        {"mean_trades_per_interval", config.simulation.mean_trades_per_interval},
        {"target_monthly_volume", config.simulation.target_monthly_volume},
        {"cv_count", config.simulation.cv_count},
        {"cv_size", config.simulation.cv_size},
    };
    j["seed"] = config.simulation.seed;
    j["rng_algorithm"] = kRngAlgorithm;
    // Accounting rule for the P&L column: each unit of affected volume
    // captures half the spread delta versus a static base-spread quote.
    j["pnl_accounting"] = "half-spread capture vs base-spread counterfactual";
    return j;
}

// Writes summary JSON, day/hour tables, and the per-interval audit trail;
// returns the paths written. Byte-identical for identical inputs.
inline std::vector<std::string> emit_report(const BacktestResult& result,
                                            const RunConfig& config,
                                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    auto open = [&](const std::string& name) {
        std::string path = (fs::path(out_dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path);
        return std::pair<std::string, std::ofstream>(path, std::move(out));
    };

    std::vector<std::string> files;
    {
        auto [path, out] = open("summary.json");
        out << summary_json(result.report, config).dump(2) << '\n';
        files.push_back(path);
    }
    {
        auto [path, out] = open("report_by_day.csv");
        render_day_table(out, result.report);
        files.push_back(path);
    }
    {
        auto [path, out] = open("report_by_hour.csv");
        render_hour_table(out, result.report);
        files.push_back(path);
    }
    {
        auto [path, out] = open("snapshots.csv");
        write_snapshots(out, result.snapshots);
        files.push_back(path);
    }
    return files;
}

}  // namespace mmspread
