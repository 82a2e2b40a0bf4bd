#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssarf/stats.hpp"

namespace ssarf {

// Categorical codes follow the alphabetical order of the category names.
enum class Gender : int { Female = 1, Male = 2, Other = 3 };
enum class Headset : int { HtcVive = 1, OculusRift = 2, PlayStationVr = 3 };

[[nodiscard]] auto parse_gender(std::string_view text) -> Gender;
[[nodiscard]] auto parse_headset(std::string_view text) -> Headset;
[[nodiscard]] auto to_string(Gender g) -> std::string_view;
[[nodiscard]] auto to_string(Headset h) -> std::string_view;

// One row of the VR-experience table. Immersion 1 means the user could not
// immerse, 2 means the user was well immersed.
struct Record {
    int age{};
    Gender gender{Gender::Female};
    Headset headset{Headset::HtcVive};
    double duration{};
    int motion_sickness{1};
    int immersion{1};

    auto operator<=>(const Record&) const = default;
};

// Throws std::invalid_argument naming the violated field.
void validate(const Record& r);

struct Dataset {
    std::vector<Record> records;
    std::vector<std::string> column_names;

    [[nodiscard]] auto size() const noexcept -> std::size_t { return records.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return records.empty(); }
};

// Canonical column order: Age, Gender, VRHeadset, Duration, MotionSickness, ImmersionLevel.
[[nodiscard]] auto canonical_columns() -> const std::vector<std::string>&;

// The five predictor columns, in encoded feature order.
[[nodiscard]] auto feature_columns() -> const std::vector<std::string>&;

// Value of a named column as a real number (categoricals as their codes).
[[nodiscard]] auto column_value(const Record& r, std::string_view column) -> double;

using WarningSink = std::function<void(std::string_view)>;

// Header matching is case-insensitive and ignores spaces and underscores.
// Extra columns are reported through `warn` and otherwise ignored.
[[nodiscard]] auto load_csv(const std::filesystem::path& path, const WarningSink& warn = {}) -> Dataset;
[[nodiscard]] auto parse_csv(std::istream& in, const WarningSink& warn = {}) -> Dataset;

void write_csv(std::ostream& out, const Dataset& d);
void write_csv(const std::filesystem::path& path, const Dataset& d);

// Removes exact full-row duplicates, keeping first occurrences in order.
[[nodiscard]] auto deduplicate(const Dataset& d) -> Dataset;

// Single pass: thresholds come from the input's mean and sample standard
// deviation per column; a row is dropped if any listed column deviates by more
// than 3 sigma. Zero-spread columns never drop anything.
[[nodiscard]] auto remove_outliers_3sigma(const Dataset& d, std::span<const std::string> columns) -> Dataset;

// Per-column statistics for every canonical column (categoricals encoded).
// Throws std::invalid_argument on an empty dataset.
[[nodiscard]] auto describe(const Dataset& d) -> std::map<std::string, ColumnStats>;

// `describe` output as JSON; every statistic rounded to 6 significant digits.
[[nodiscard]] auto stats_to_json(const std::map<std::string, ColumnStats>& stats) -> nlohmann::ordered_json;

// Rounds to `digits` significant decimal digits.
[[nodiscard]] auto round_significant(double value, int digits) -> double;

// Dense row-major matrix of feature values.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows)
        , cols_(cols)
        , values_(rows * cols)
    {
    }

    [[nodiscard]] auto rows() const noexcept -> std::size_t { return rows_; }
    [[nodiscard]] auto cols() const noexcept -> std::size_t { return cols_; }

    [[nodiscard]] auto operator()(std::size_t r, std::size_t c) const -> double { return values_[r * cols_ + c]; }
    [[nodiscard]] auto operator()(std::size_t r, std::size_t c) -> double& { return values_[r * cols_ + c]; }

    [[nodiscard]] auto row(std::size_t r) const -> std::span<const double>
    {
        return {values_.data() + r * cols_, cols_};
    }
    [[nodiscard]] auto row(std::size_t r) -> std::span<double> { return {values_.data() + r * cols_, cols_}; }

    void append_row(std::span<const double> values);

    [[nodiscard]] auto take(std::span<const std::size_t> indices) const -> FeatureMatrix;

    auto operator==(const FeatureMatrix&) const -> bool = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> values_;
};

// Encoded features plus labels. `source_rows` keeps the row index each sample
// had in the dataset it was encoded from, so subsets stay traceable.
struct LabeledData {
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<std::size_t> source_rows;
    std::vector<std::string> feature_names;

    [[nodiscard]] auto size() const noexcept -> std::size_t { return labels.size(); }
    [[nodiscard]] auto take(std::span<const std::size_t> indices) const -> LabeledData;
};

[[nodiscard]] auto encode(const Record& r) -> std::vector<double>;
[[nodiscard]] auto encode(const Dataset& d) -> LabeledData;

struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Per-class shuffle and split; index lists come back in ascending order.
// Training rows total round(fraction * n); each class gets floor(fraction *
// count) and the remainder goes to the classes with the largest fractional
// parts. Every class keeps at least one row on each side. Throws std::invalid_argument when a class
// has fewer than two members or when only one class is present.
[[nodiscard]] auto stratified_partition(std::span<const int> labels, double train_fraction, std::uint64_t seed)
    -> Partition;

// Stratified k-fold assignment: returns the validation indices of each fold.
[[nodiscard]] auto stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed)
    -> std::vector<std::vector<std::size_t>>;

[[nodiscard]] auto stratified_split(const Dataset& d, double train_fraction, std::uint64_t seed)
    -> std::pair<Dataset, Dataset>;

[[nodiscard]] auto subset(const Dataset& d, std::span<const std::size_t> indices) -> Dataset;

// Synthetic table with the VR schema: immersion is 2 iff
// (duration > 30) xor (motion_sickness > 7), then a `label_noise` fraction of
// labels is flipped.
[[nodiscard]] auto make_synthetic_dataset(std::size_t rows, double label_noise, std::uint64_t seed) -> Dataset;

} // namespace ssarf
