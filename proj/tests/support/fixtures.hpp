#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "ssarf/dataset.hpp"

namespace ssarf::testing {

inline auto random_record(std::mt19937_64& rng) -> Record
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Record r;
    r.age = pick(18, 70);
    r.gender = static_cast<Gender>(pick(1, 3));
    r.headset = static_cast<Headset>(pick(1, 3));
    r.duration = pick(300, 6000) / 100.0;
    r.motion_sickness = pick(1, 10);
    r.immersion = pick(1, 2);
    return r;
}

inline auto random_dataset(std::size_t rows, std::uint64_t seed) -> Dataset
{
    std::mt19937_64 rng(seed);
    Dataset d;
    d.column_names = canonical_columns();
    for (std::size_t i = 0; i < rows; ++i) {
        d.records.push_back(random_record(rng));
    }
    return d;
}

inline auto to_csv_text(const Dataset& d) -> std::string
{
    std::ostringstream out;
    write_csv(out, d);
    return out.str();
}

} // namespace ssarf::testing
