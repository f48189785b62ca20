#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "mmspread/errors.hpp"
#include "mmspread/kahan.hpp"
#include "mmspread/rolling_stats.hpp"

namespace mmspread {

enum class VolatilityMode {
    absolute,  // sigma_t = alpha*sigma_{t-1} + beta*|eps|; sigma stays >= 0
    signed_innovation,  // literal recursion, floored at 0
};

struct VolatilityState {
    double sigma = 0;
    double alpha = 0.9;
    double beta = 0.1;
    VolatilityMode mode = VolatilityMode::absolute;

    bool valid() const {
        return alpha > 0 && alpha < 1 && beta > 0 && beta < 1 &&
               alpha + beta <= 1.0 && sigma >= 0;
    }
};

struct GammaState {
    double gamma = 0;  // > 0 once seeded; refreshed at day boundaries only
};

struct FactorValues {
    double price_factor = 0;
    double trade_count_factor = 0;
    double volume_factor = 0;
};

// Zero-activity intervals in supplied real data saturate the narrowing
// signal; large enough that the downstream clamp always lands on its lower
// bound, small enough that weighted sums stay finite.
inline constexpr double kSaturatedFactor = -1.0e30;

// sigma_0 from the sample standard deviation of the warmup log-returns.
inline double init_volatility(std::span<const double> returns) {
    if (returns.size() < 2) throw InsufficientData("initial volatility");
    KahanSum sum;
    for (double r : returns) sum += r;
    double mean = sum.value() / static_cast<double>(returns.size());
    KahanSum sq;
    for (double r : returns) sq += (r - mean) * (r - mean);
    return std::sqrt(sq.value() / static_cast<double>(returns.size() - 1));
}

// One recursion step; the returned sigma is the interval's price factor.
inline double update_volatility(const VolatilityState& state, double epsilon) {
    double next;
    if (state.mode == VolatilityMode::absolute)
        next = state.alpha * state.sigma + state.beta * std::abs(epsilon);
    else
        next = state.alpha * state.sigma + state.beta * epsilon;
    return next < 0 ? 0 : next;
}

inline double trade_count_factor(double tc_i, double tc_avg, double gamma) {
    if (!(tc_avg > 0)) throw NonPositiveAverage("trade count");
    if (!(gamma > 0)) throw NonPositiveParameter("gamma");
    if (tc_i < 1) return kSaturatedFactor;
    return std::log(tc_i / tc_avg) * gamma;
}

inline double volume_factor(double v_i, double v_avg, double gamma) {
    if (!(v_avg > 0)) throw NonPositiveAverage("volume");
    if (!(gamma > 0)) throw NonPositiveParameter("gamma");
    if (!(v_i > 0)) throw NonPositiveVolume();
    return std::log(v_i / v_avg) * gamma;
}

// gamma = grand mean of the price factor over the 30-day window.
inline double update_gamma(const RollingWindow& window) {
    double g = window.mean(FactorSeries::price_factor);
    if (!(g > 0)) throw ZeroGamma();
    return g;
}

}  // namespace mmspread
