#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mmspread/errors.hpp"
#include "mmspread/factors.hpp"
#include "mmspread/simulation.hpp"
#include "mmspread/spread_engine.hpp"

namespace mmspread {

// Flat `key = value` config with `#` comments; every constraint from the
// owning modules is re-validated here so a bad file fails with the full
// list of violations.
struct RunConfig {
    double alpha = 0.9;
    double beta = 0.1;
    VolatilityMode volatility_mode = VolatilityMode::absolute;
    ConsolidationWeights weights;
    ClampParams clamp;
    SpreadConfig spread;
    std::int64_t interval_seconds = 60;
    std::int64_t window_days = 30;
    SimulationConfig simulation;
    std::string bars_path;
    std::string activity_path;  // optional: real desk data replaces simulation
    std::string out_dir = ".";

    TradingCalendar calendar() const {
        return {interval_seconds, kSecondsPerDay / interval_seconds};
    }
};

namespace detail {
inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && !s.empty();
}

inline bool parse_int(const std::string& s, std::int64_t& out) {
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end && *end == '\0' && !s.empty();
}

inline bool parse_uint(const std::string& s, std::uint64_t& out) {
    char* end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end && *end == '\0' && !s.empty();
}
}  // namespace detail

inline void validate_config(const RunConfig& c, std::vector<std::string>& errors) {
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    check(c.alpha > 0 && c.alpha < 1, "0 < alpha < 1");
    check(c.beta > 0 && c.beta < 1, "0 < beta < 1");
    check(c.alpha + c.beta <= 1.0, "alpha + beta <= 1");
    check(c.weights.w_price >= 0 && c.weights.w_trade_count >= 0 &&
              c.weights.w_volume >= 0,
          "weights must be non-negative");
    check(std::abs(c.weights.w_price + c.weights.w_trade_count +
                   c.weights.w_volume - 1.0) <= 1e-12,
          "weights must sum to 1");
    check(c.clamp.m > 0, "m > 0");
    check(c.clamp.n > 0, "n > 0");
    check(c.spread.min_spread > 0 && c.spread.min_spread < c.spread.base_spread,
          "0 < min_spread < base_spread");
    check(c.interval_seconds > 0 && kSecondsPerDay % c.interval_seconds == 0,
          "interval_seconds must divide 86400");
    check(c.window_days >= 1, "window_days >= 1");
    check(c.simulation.mean_trades_per_interval > 0,
          "mean_trades_per_interval > 0");
    check(c.simulation.target_monthly_volume > 0, "target_monthly_volume > 0");
    check(c.simulation.cv_count > 0, "cv_count > 0");
    check(c.simulation.cv_size > 0, "cv_size > 0");
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig config;
    std::vector<std::string> errors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) +
                             ": expected 'key = value'");
            continue;
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        bool ok = true;
        if (key == "alpha") ok = detail::parse_double(value, config.alpha);
        else if (key == "beta") ok = detail::parse_double(value, config.beta);
        else if (key == "volatility_mode") {
            if (value == "absolute")
                config.volatility_mode = VolatilityMode::absolute;
            else if (value == "signed")
                config.volatility_mode = VolatilityMode::signed_innovation;
            else ok = false;
        }
        else if (key == "w_p") ok = detail::parse_double(value, config.weights.w_price);
        else if (key == "w_tc") ok = detail::parse_double(value, config.weights.w_trade_count);
        else if (key == "w_v") ok = detail::parse_double(value, config.weights.w_volume);
        else if (key == "m") ok = detail::parse_double(value, config.clamp.m);
        else if (key == "n") ok = detail::parse_double(value, config.clamp.n);
        else if (key == "base_spread") ok = detail::parse_double(value, config.spread.base_spread);
        else if (key == "min_spread") ok = detail::parse_double(value, config.spread.min_spread);
        else if (key == "interval_seconds") ok = detail::parse_int(value, config.interval_seconds);
        else if (key == "window_days") ok = detail::parse_int(value, config.window_days);
        else if (key == "seed") ok = detail::parse_uint(value, config.simulation.seed);
        else if (key == "mean_trades_per_interval")
            ok = detail::parse_double(value, config.simulation.mean_trades_per_interval);
        else if (key == "target_monthly_volume")
            ok = detail::parse_double(value, config.simulation.target_monthly_volume);
        else if (key == "cv_count") ok = detail::parse_double(value, config.simulation.cv_count);
        else if (key == "cv_size") ok = detail::parse_double(value, config.simulation.cv_size);
        else if (key == "bars") config.bars_path = value;
        else if (key == "activity") config.activity_path = value;
        else if (key == "out") config.out_dir = value;
        else {
            errors.push_back("line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
            continue;
        }
        if (!ok)
            errors.push_back("line " + std::to_string(line_no) +
                             ": bad value for '" + key + "'");
    }
    validate_config(config, errors);
    if (!errors.empty()) throw ValidationErrors(std::move(errors));
    return config;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    return parse_config(in);
}

}  // namespace mmspread
