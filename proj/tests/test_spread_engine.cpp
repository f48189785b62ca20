#include <doctest.h>

#include <cmath>
#include <random>

#include "mmspread/spread_engine.hpp"

using namespace mmspread;

TEST_CASE("consolidate weighted sum") {
    ConsolidationWeights equal;
    CHECK(consolidate({0, 0, 0}, equal) == 0.0);

    ConsolidationWeights price_only{1.0, 0.0, 0.0};
    CHECK(consolidate({0.00042, 1.0, -1.0}, price_only) == 0.00042);

    CHECK(consolidate({0.0003, 0.0, 0.0}, equal) ==
          doctest::Approx(0.0001).epsilon(1e-12));
}

TEST_CASE("clamp against rolling band") {
    ClampParams params;  // m = 2, n = 3
    auto in_band = clamp_spread_factor(0.0001, 0.0, 0.0003, params);
    CHECK(in_band.value == 0.0001);
    CHECK_FALSE(in_band.upper_hit);
    CHECK_FALSE(in_band.lower_hit);

    auto above = clamp_spread_factor(0.0005, 0.0, 0.0003, params);
    CHECK(above.value == doctest::Approx(0.00015).epsilon(1e-12));
    CHECK(above.upper_hit);
    CHECK_FALSE(above.lower_hit);

    auto below = clamp_spread_factor(-0.0002, 0.0, 0.0003, params);
    CHECK(below.value == doctest::Approx(-0.0001).epsilon(1e-12));
    CHECK(below.lower_hit);
    CHECK_FALSE(below.upper_hit);
}

TEST_CASE("clamp containment property") {
    ClampParams params;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mu(-1e-3, 1e-3), sd(0.0, 1e-3),
        raw(-1e-2, 1e-2);
    for (int i = 0; i < 100000; ++i) {
        double m = mu(rng), s = sd(rng);
        auto r = clamp_spread_factor(raw(rng), m, s, params);
        CHECK(r.value >= m - s / 3.0);
        CHECK(r.value <= m + s / 2.0);
    }
}

TEST_CASE("apply_spread delta from rolling mean with min-spread floor") {
    SpreadConfig config;  // base 0.0002, min 0.00001
    auto same = apply_spread(0.0001, 0.0001, config);
    CHECK(same.spread_delta == 0.0);
    CHECK(same.quoted_spread == config.base_spread);
    CHECK(same.classification == Classification::unchanged);

    auto widened = apply_spread(0.00025, 0.0001, config);
    CHECK(widened.spread_delta == doctest::Approx(0.00015).epsilon(1e-12));
    CHECK(widened.quoted_spread == doctest::Approx(0.00035).epsilon(1e-12));
    CHECK(widened.classification == Classification::increased);

    // Raw delta -0.0002 would cross; floored at min_spread.
    auto floored = apply_spread(0.0001, 0.0003, config);
    CHECK(floored.quoted_spread == doctest::Approx(0.00001).epsilon(1e-12));
    CHECK(floored.spread_delta == doctest::Approx(-0.00019).epsilon(1e-12));
    CHECK(floored.classification == Classification::decreased);
}

TEST_CASE("apply_spread monotone in the clamped factor") {
    SpreadConfig config;
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> value(-1e-3, 1e-3);
    for (int i = 0; i < 1000; ++i) {
        double mu = value(rng);
        double a = value(rng), b = value(rng);
        if (a > b) std::swap(a, b);
        CHECK(apply_spread(a, mu, config).quoted_spread <=
              apply_spread(b, mu, config).quoted_spread);
    }
}

TEST_CASE("make_quote symmetric split") {
    auto q = make_quote(1.3000, 0.0002);
    CHECK(q.bid == doctest::Approx(1.2999).epsilon(1e-12));
    CHECK(q.offer == doctest::Approx(1.3001).epsilon(1e-12));
    CHECK((q.bid + q.offer) / 2.0 == doctest::Approx(q.mid).epsilon(1e-12));

    auto tight = make_quote(1.0, 0.00001);
    CHECK(tight.offer - tight.bid == doctest::Approx(0.00001).epsilon(1e-12));

    CHECK_THROWS_AS(make_quote(0.000001, 0.0002), NonPositiveBid);
}

namespace {
// A hand-warmed engine: constant window, averages pinned at the given
// activity levels.
EngineState warmed_state(double trades_avg = 60.0, double volume_avg = 9e6) {
    EngineState state;
    state.volatility = {0.0003, 0.9, 0.1, VolatilityMode::absolute};
    // Dyadic constant (2^-13) so the constant-window variance cancels to
    // exactly zero.
    const double srf = 0.0001220703125;
    for (std::int64_t d = 1; d <= 30; ++d) {
        DailyAggregate a;
        a.day = d;
        a.trading_minutes = 1440;
        a.interval_count = 1440;
        a.total_trades = trades_avg * 1440;
        a.total_volume = volume_avg * 1440;
        a.sum_price_factor = 0.0003 * 1440;
        a.sum_spread_factor = srf * 1440;
        a.sum_spread_factor_sq = srf * srf * 1440;
        state.window.push_day(a);
    }
    state.refresh_derived();
    state.prev_proxy_rate = 1.3;
    state.last_timestamp = 0;
    state.warmed_up = true;
    return state;
}
}  // namespace

TEST_CASE("step composes the per-interval pipeline") {
    EngineState state = warmed_state();
    MinuteBar bar{60, 1.3, 1.3, 1.3, 1.3};
    IntervalActivity activity{60, 60, 150000.0, 9e6};

    auto result = step(state, bar, activity);
    const auto& s = result.snapshot;
    // Flat price, activity pinned at the averages: innovation 0, TC_f = V_f = 0,
    // S_rf = w_p * sigma_t with sigma_t = alpha * sigma.
    CHECK(s.factors.trade_count_factor == 0.0);
    CHECK(s.factors.volume_factor == 0.0);
    CHECK(s.factors.price_factor == doctest::Approx(0.9 * 0.0003).epsilon(1e-12));
    CHECK(s.raw_spread_factor ==
          doctest::Approx(state.weights.w_price * 0.9 * 0.0003).epsilon(1e-12));
    CHECK(result.quote.bid < result.quote.offer);

    // Pure replay from an identical state yields an identical snapshot.
    EngineState replay = warmed_state();
    auto again = step(replay, bar, activity);
    CHECK(again.snapshot.raw_spread_factor == s.raw_spread_factor);
    CHECK(again.snapshot.clamped_spread_factor == s.clamped_spread_factor);
    CHECK(again.snapshot.spread_delta == s.spread_delta);
    CHECK(again.quote.bid == result.quote.bid);
}

TEST_CASE("step rejects mismatched activity and cold engines") {
    EngineState state = warmed_state();
    MinuteBar bar{60, 1.3, 1.3, 1.3, 1.3};
    IntervalActivity wrong{120, 60, 150000.0, 9e6};
    CHECK_THROWS_AS(step(state, bar, wrong), TimestampMismatch);

    EngineState cold;
    IntervalActivity activity{60, 60, 150000.0, 9e6};
    CHECK_THROWS_AS(step(cold, bar, activity), NotWarmedUp);
}

TEST_CASE("zero trade count saturates to the lower clamp bound") {
    EngineState state = warmed_state();
    MinuteBar bar{60, 1.3, 1.3, 1.3, 1.3};
    IntervalActivity quiet{60, 0, 0.0, 0.0};
    auto result = step(state, bar, quiet);
    CHECK(result.snapshot.lower_bound_hit);
    CHECK(result.snapshot.clamped_spread_factor ==
          doctest::Approx(state.mu_srf - state.sigma_srf / 3.0));
}

TEST_CASE("daily_refresh fixed point and eviction") {
    EngineState state = warmed_state();
    double mu_before = state.mu_srf, sigma_before = state.sigma_srf;
    double gamma_before = state.gamma_state.gamma;
    double tc_before = state.trade_count_avg;

    // A day identical to every day in the window changes nothing.
    DailyAggregate clone = state.window.days().back();
    clone.day += 1;
    daily_refresh(state, clone);
    CHECK(state.mu_srf == doctest::Approx(mu_before).epsilon(1e-12));
    CHECK(state.sigma_srf == doctest::Approx(sigma_before).epsilon(1e-9));
    CHECK(state.gamma_state.gamma == doctest::Approx(gamma_before).epsilon(1e-12));
    CHECK(state.trade_count_avg == doctest::Approx(tc_before).epsilon(1e-12));
    CHECK(state.window.days().front().day == 2);  // day 1 evicted

    DailyAggregate stale = clone;
    CHECK_THROWS_AS(daily_refresh(state, stale), OutOfOrderDay);
}

TEST_CASE("collapsed band when the window is constant") {
    // sigma_srf = 0 pins S_f to mu: delta 0, unchanged.
    EngineState state = warmed_state();
    CHECK(state.sigma_srf == 0.0);
    MinuteBar bar{60, 1.3, 1.3, 1.3, 1.3};
    IntervalActivity activity{60, 90, 150000.0, 13.5e6};
    auto result = step(state, bar, activity);
    CHECK(result.snapshot.clamped_spread_factor == state.mu_srf);
    CHECK(result.snapshot.spread_delta == 0.0);
    CHECK(result.snapshot.classification == Classification::unchanged);
}
