// Command-line face of the spread engine: backtest, calibrate, quote-stream.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmspread/backtest.hpp"
#include "mmspread/config.hpp"
#include "mmspread/errors.hpp"
#include "mmspread/simulation.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

std::vector<mmspread::MinuteBar> load_bars(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mmspread::FileNotFound(path);
    return mmspread::parse_minute_bars(in);
}

std::vector<mmspread::IntervalActivity> load_activity(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mmspread::FileNotFound(path);
    return mmspread::parse_interval_activity(in);
}

int run_backtest_command(const std::string& config_path,
                         const std::string& bars_override,
                         const std::string& activity_override,
                         const std::string& out_override) {
    mmspread::RunConfig config = mmspread::load_config(config_path);
    if (!bars_override.empty()) config.bars_path = bars_override;
    if (!activity_override.empty()) config.activity_path = activity_override;
    if (!out_override.empty()) config.out_dir = out_override;
    if (config.bars_path.empty())
        throw mmspread::ValidationErrors({"bars path is required"});

    auto bars = load_bars(config.bars_path);
    std::optional<std::vector<mmspread::IntervalActivity>> activity;
    if (!config.activity_path.empty())
        activity = load_activity(config.activity_path);

    auto result = mmspread::run_backtest(config, bars,
                                         activity ? &*activity : nullptr);
    auto files = mmspread::emit_report(result, config, config.out_dir);

    const auto& o = result.report.overall;
    std::printf("intervals quoted: %lld\n",
                static_cast<long long>(o.intervals_quoted));
    std::printf("increases: %lld  decreases: %lld  unchanged: %lld\n",
                static_cast<long long>(o.increases),
                static_cast<long long>(o.decreases),
                static_cast<long long>(o.unchanged));
    std::printf("upper bound hits: %lld  lower bound hits: %lld\n",
                static_cast<long long>(o.upper_bound_hits),
                static_cast<long long>(o.lower_bound_hits));
    std::printf("pnl increase: %.2f USD\n",
                static_cast<double>(o.pnl_increase_cents) / 100.0);
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

int run_quote_stream_command(const std::string& config_path) {
    mmspread::RunConfig config = mmspread::load_config(config_path);
    auto bars = mmspread::parse_minute_bars(std::cin);
    std::optional<std::vector<mmspread::IntervalActivity>> activity;
    if (!config.activity_path.empty())
        activity = load_activity(config.activity_path);
    auto result = mmspread::run_backtest(config, bars,
                                         activity ? &*activity : nullptr);
    std::cout << "timestamp,bid,offer,spread_delta,classification\n";
    for (std::size_t i = 0; i < result.snapshots.size(); ++i)
        mmspread::write_quote_line(std::cout, result.snapshots[i],
                                   result.quotes[i]);
    return 0;
}

int run_calibrate_command(double mean, double cv) {
    auto params = mmspread::calibrate_lognormal(mean, cv);
    std::printf("mu = %.12g\nsigma = %.12g\nimplied_mean = %.12g\n", params.mu,
                params.sigma, params.mean());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic multi-factor bid-offer spread engine"};
    app.require_subcommand(1);

    std::string config_path, bars_path, activity_path, out_dir;
    auto* backtest = app.add_subcommand("backtest", "Run warmup + backtest and write reports");
    backtest->add_option("--config", config_path, "Config file")->required();
    backtest->add_option("--bars", bars_path, "Bar CSV (overrides config)");
    backtest->add_option("--activity", activity_path, "Activity CSV (overrides config)");
    backtest->add_option("--out", out_dir, "Output directory (overrides config)");

    double mean = 0, cv = 0;
    auto* calibrate = app.add_subcommand("calibrate", "Print lognormal parameters for a target mean and CV");
    calibrate->add_option("--mean", mean, "Target distribution mean")->required();
    calibrate->add_option("--cv", cv, "Coefficient of variation")->required();

    std::string stream_config;
    auto* quote_stream = app.add_subcommand("quote-stream", "Read bars on stdin, emit quote lines");
    quote_stream->add_option("--config", stream_config, "Config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (backtest->parsed())
            return run_backtest_command(config_path, bars_path, activity_path, out_dir);
        if (calibrate->parsed()) return run_calibrate_command(mean, cv);
        if (quote_stream->parsed()) return run_quote_stream_command(stream_config);
    } catch (const mmspread::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const mmspread::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const mmspread::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    }
    return 0;
}
