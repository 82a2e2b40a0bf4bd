#include "ssarf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ssarf {

auto mean(std::span<const double> values) -> double
{
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty column");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {
    auto sample_variance(std::span<const double> values, double mu) -> double
    {
        if (values.size() < 2) {
            return 0.0;
        }
        double ss = 0.0;
        for (double v : values) {
            ss += (v - mu) * (v - mu);
        }
        return ss / static_cast<double>(values.size() - 1);
    }
} // namespace

auto sample_std_dev(std::span<const double> values) -> double
{
    if (values.empty()) {
        throw std::invalid_argument("standard deviation of an empty column");
    }
    return std::sqrt(sample_variance(values, mean(values)));
}

auto median(std::span<const double> values) -> double
{
    if (values.empty()) {
        throw std::invalid_argument("median of an empty column");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto const n = sorted.size();
    if (n % 2 == 1) {
        return sorted[n / 2];
    }
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

auto summarize(std::span<const double> values) -> ColumnStats
{
    if (values.empty()) {
        throw std::invalid_argument("cannot summarize an empty column");
    }
    ColumnStats s;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.minimum = *lo;
    s.maximum = *hi;
    s.mean = mean(values);
    s.variance = sample_variance(values, s.mean);
    s.std_dev = std::sqrt(s.variance);
    s.median = median(values);
    return s;
}

} // namespace ssarf
