#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmspread {

// Error categories map to CLI exit codes: ConfigError -> 2, DataError -> 3,
// IoError -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRow : DataError {
    std::size_t row;
    MalformedRow(std::size_t row_index, const std::string& reason)
        : DataError("malformed row " + std::to_string(row_index) + ": " + reason),
          row(row_index) {}
};

struct NonMonotonicTimestamp : DataError {
    explicit NonMonotonicTimestamp(std::size_t row_index)
        : DataError("non-monotonic timestamp at row " + std::to_string(row_index)) {}
};

struct EmptyInput : DataError {
    EmptyInput() : DataError("empty input") {}
};

struct NonPositiveRate : DataError {
    NonPositiveRate() : DataError("rate must be strictly positive") {}
};

struct NonPositiveParameter : ConfigError {
    explicit NonPositiveParameter(const std::string& name)
        : ConfigError(name + " must be strictly positive") {}
};

struct OutOfOrderDay : DataError {
    OutOfOrderDay() : DataError("day pushed out of order") {}
};

struct EmptyWindow : DataError {
    EmptyWindow() : DataError("rolling window is empty") {}
};

struct InsufficientData : DataError {
    explicit InsufficientData(const std::string& what_for)
        : DataError("insufficient data for " + what_for) {}
};

struct NonPositiveAverage : DataError {
    explicit NonPositiveAverage(const std::string& which)
        : DataError(which + " rolling average is not positive") {}
};

struct NonPositiveVolume : DataError {
    NonPositiveVolume() : DataError("interval volume must be strictly positive") {}
};

struct ZeroGamma : DataError {
    ZeroGamma() : DataError("price factor window is all zero, gamma undefined") {}
};

struct NotWarmedUp : DataError {
    NotWarmedUp() : DataError("engine stepped before warmup completed") {}
};

struct TimestampMismatch : DataError {
    TimestampMismatch() : DataError("activity timestamp does not match bar timestamp") {}
};

struct InsufficientHistory : DataError {
    InsufficientHistory(std::size_t have, std::size_t need)
        : DataError("need at least " + std::to_string(need) +
                    " trading days of bars, got " + std::to_string(have)) {}
};

struct NonPositiveBid : DataError {
    NonPositiveBid() : DataError("bid would be non-positive; mid too small for spread") {}
};

struct FileNotFound : IoError {
    explicit FileNotFound(const std::string& path)
        : IoError("file not found: " + path) {}
};

// Aggregated config validation failures; carries every violation, not just
// the first.
struct ValidationErrors : ConfigError {
    std::vector<std::string> violations;
    explicit ValidationErrors(std::vector<std::string> v)
        : ConfigError(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "config validation failed:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
};

}  // namespace mmspread
