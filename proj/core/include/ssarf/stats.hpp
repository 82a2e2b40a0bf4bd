#pragma once

#include <span>

namespace ssarf {

// Descriptive statistics of one column. The standard deviation uses the
// sample (n - 1) denominator; a single value has zero spread.
struct ColumnStats {
    double maximum{};
    double minimum{};
    double mean{};
    double std_dev{};
    double median{};
    double variance{};
};

// Throws std::invalid_argument on an empty input.
[[nodiscard]] auto summarize(std::span<const double> values) -> ColumnStats;

// Median with the mean-of-middle-pair convention for even lengths.
[[nodiscard]] auto median(std::span<const double> values) -> double;

[[nodiscard]] auto mean(std::span<const double> values) -> double;

// Sample standard deviation (n - 1); 0 for fewer than two values.
[[nodiscard]] auto sample_std_dev(std::span<const double> values) -> double;

} // namespace ssarf
