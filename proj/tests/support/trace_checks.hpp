#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ssarf/sparrow.hpp"

namespace ssarf::testing {

inline auto is_monotone(const OptimizationTrace& trace) -> bool
{
    for (std::size_t i = 1; i < trace.best_so_far.size(); ++i) {
        if (trace.best_so_far[i] > trace.best_so_far[i - 1]) {
            return false;
        }
    }
    return true;
}

// Wraps a fitness function and counts evaluations outside the box.
struct BoundsProbe {
    const SearchSpace* space;
    std::function<double(std::span<const double>)> inner;
    std::size_t* violations;

    auto operator()(std::span<const double> x) const -> double
    {
        if (!space->contains(x)) {
            ++*violations;
        }
        return inner(x);
    }
};

} // namespace ssarf::testing
