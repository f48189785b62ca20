#include <doctest.h>

#include <random>
#include <sstream>
#include <vector>

#include "mmspread/pnl_metrics.hpp"

using namespace mmspread;

namespace {
FactorSnapshot snapshot_at(EpochSeconds ts, Classification cls, double delta,
                           double volume, bool upper = false, bool lower = false) {
    FactorSnapshot s;
    s.timestamp = ts;
    s.classification = cls;
    s.spread_delta = delta;
    s.interval_volume = volume;
    s.upper_bound_hit = upper;
    s.lower_bound_hit = lower;
    return s;
}
}  // namespace

TEST_CASE("pnl_increment half-spread capture") {
    CHECK(pnl_increment(0.0, 5e6) == 0.0);
    CHECK(pnl_increment(0.0001, 10000000.0) == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(pnl_increment(-0.00005, 20000000.0) == doctest::Approx(-500.0).epsilon(1e-12));
}

TEST_CASE("accumulate buckets by classification, day, and hour") {
    BacktestReport report;
    accumulate(report, snapshot_at(0, Classification::unchanged, 0.0, 1e6));
    CHECK(report.overall.unchanged == 1);
    CHECK(report.overall.pnl_increase_cents == 0);

    accumulate(report, snapshot_at(60, Classification::increased, 0.0001, 5e6));
    accumulate(report, snapshot_at(120, Classification::decreased, -0.0001, 3e6));
    CHECK(report.overall.increases == 1);
    CHECK(report.overall.decreases == 1);
    CHECK(report.overall.volume_on_increase_cents == 500000000LL);  // 5M USD
    CHECK(report.overall.volume_on_decrease_cents == 300000000LL);  // 3M USD
    CHECK(report.overall.intervals_quoted == 3);
}

TEST_CASE("by-day and by-hour sums equal overall for every counter") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> delta(-2e-4, 2e-4), volume(1e5, 2e7);
    std::uniform_int_distribution<int> coin(0, 1);
    BacktestReport report;
    EpochSeconds ts = 1374624000;  // 2013-07-24
    for (int i = 0; i < 5000; ++i) {
        double d = delta(rng);
        auto cls = d > 0 ? Classification::increased
                         : (d < 0 ? Classification::decreased
                                  : Classification::unchanged);
        accumulate(report,
                   snapshot_at(ts, cls, d, volume(rng), coin(rng), coin(rng)));
        ts += 60 * (1 + (i % 90));  // spread across days and hours
    }

    MetricCounters day_sum, hour_sum;
    for (const auto& [day, c] : report.by_day) day_sum.merge(c);
    for (const auto& [hour, c] : report.by_hour) hour_sum.merge(c);
    CHECK(day_sum == report.overall);
    CHECK(hour_sum == report.overall);
    CHECK(report.overall.increases + report.overall.decreases +
              report.overall.unchanged ==
          report.overall.intervals_quoted);
    CHECK(report.overall.upper_bound_hits + report.overall.lower_bound_hits <=
          2 * report.overall.intervals_quoted);
}

namespace {
std::vector<std::vector<std::string>> parse_table(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}
}  // namespace

TEST_CASE("hour table always has 24 rows plus totals") {
    BacktestReport empty;
    std::ostringstream out;
    render_hour_table(out, empty);
    auto rows = parse_table(out.str());
    REQUIRE(rows.size() == 26);  // header + 24 hours + totals
    for (std::size_t r = 1; r <= 24; ++r) {
        CHECK(rows[r][0] == std::to_string(r - 1));
        CHECK(rows[r][1] == "0");
    }
    CHECK(rows[25][0] == "total");

    std::ostringstream day_out;
    render_day_table(day_out, empty);
    auto day_rows = parse_table(day_out.str());
    REQUIRE(day_rows.size() == 2);  // header + totals only
}

TEST_CASE("single snapshot lands in its hour bucket") {
    BacktestReport report;
    EpochSeconds ts;
    REQUIRE(parse_iso8601_utc("2013-07-24T13:05:00Z", ts));
    accumulate(report, snapshot_at(ts, Classification::increased, 0.0001, 5e6));
    std::ostringstream out;
    render_hour_table(out, report);
    auto rows = parse_table(out.str());
    CHECK(rows[14][0] == "13");
    CHECK(rows[14][1] == "1");  // intervals
    CHECK(rows[14][2] == "1");  // increases
    CHECK(rows[13][1] == "0");
}

TEST_CASE("totals row equals independent column sums") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> delta(-2e-4, 2e-4), volume(1e5, 2e7);
    BacktestReport report;
    EpochSeconds ts = 1374624000;
    for (int i = 0; i < 2000; ++i) {
        double d = delta(rng);
        auto cls = d > 0 ? Classification::increased : Classification::decreased;
        accumulate(report, snapshot_at(ts, cls, d, volume(rng)));
        ts += 61 * 60;
    }
    std::ostringstream out;
    render_day_table(out, report);
    auto rows = parse_table(out.str());
    REQUIRE(rows.size() >= 3);
    const auto& totals = rows.back();
    for (std::size_t col = 1; col < totals.size(); ++col) {
        double sum = 0;
        for (std::size_t r = 1; r + 1 < rows.size(); ++r)
            sum += std::stod(rows[r][col]);
        CHECK(std::stod(totals[col]) == doctest::Approx(sum).epsilon(1e-9));
    }
}
