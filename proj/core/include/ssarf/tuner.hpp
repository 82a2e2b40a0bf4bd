#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssarf/dataset.hpp"
#include "ssarf/forest.hpp"
#include "ssarf/issa.hpp"
#include "ssarf/sparrow.hpp"

namespace ssarf {

enum class Method { Rf, SsaRf, IssaRf };

// "RF", "SSA-RF", "ISSA-RF"
[[nodiscard]] auto to_string(Method m) -> std::string_view;
// "rf", "ssa-rf", "issa-rf"
[[nodiscard]] auto method_slug(Method m) -> std::string_view;
// Accepts either spelling, case-insensitively. Throws ConfigError.
[[nodiscard]] auto parse_method(std::string_view text) -> Method;

// Search vector layout: [max_depth, criterion, min_leaf, mtry_fraction, mask_1 .. mask_p].
inline constexpr std::size_t kSearchHeader = 4;
inline constexpr double kMaxDepthLow = 1.0;
inline constexpr double kMaxDepthHigh = 20.0;
inline constexpr double kMinLeafLow = 1.0;
inline constexpr double kMinLeafHigh = 10.0;

[[nodiscard]] auto search_space(std::size_t n_features) -> SearchSpace;

// Total map from the search box onto valid hyperparameters. An all-false mask
// is repaired by switching on the largest raw mask entry.
[[nodiscard]] auto decode(std::span<const double> v, std::size_t n_features, std::size_t n_trees = 100)
    -> HyperParams;

// A vector that decodes back to `p` (bin centres); n_trees and bootstrap are
// not part of the search vector. mtry is recovered only up to rounding.
[[nodiscard]] auto encode_search_vector(const HyperParams& p) -> std::vector<double>;

// Receives the source-row indices of every sample a fitness call reads.
using RowAccessHook = std::function<void(std::span<const std::size_t>)>;

// 1 - mean stratified k-fold validation accuracy over `train` only. Folds whose
// training part lacks a class are skipped; if every fold is skipped the
// result is 1. Deterministic in (v, train, folds, seed, n_trees).
[[nodiscard]] auto cv_fitness(std::span<const double> v, const LabeledData& train, std::size_t folds,
                              std::uint64_t seed, std::size_t n_trees = 100, const RowAccessHook& hook = {})
    -> double;

struct ExperimentConfig {
    std::uint64_t seed{0};
    double train_fraction{0.7};
    std::size_t folds{5};
    std::size_t threads{1};
    // Plain RF configuration. An empty feature mask means "all features,
    // mtry = floor(sqrt(p))".
    HyperParams forest;
    // Trees per forest while searching and in the final tuned model.
    std::size_t search_trees{100};
    // SSA-RF uses `optimizer.base`; ISSA-RF uses all of it.
    IssaConfig optimizer;
    // Raise SSA-RF's iteration count until its evaluations match ISSA-RF's.
    bool equal_budget{false};
    // Recorded in report metadata only; a random forest has no learning rate.
    double learning_rate{0.001};
};

// Throws ConfigError.
void validate(const ExperimentConfig& c);

struct ExperimentHooks {
    RowAccessHook on_fitness_rows;
};

struct MethodReport {
    Method method{Method::Rf};
    std::uint64_t seed{};
    Partition partition;
    Evaluation train;
    Evaluation test;
    HyperParams params;
    std::optional<OptimizationResult> optimization;
    Forest model;
    double wall_time_seconds{};
};

// Splits 7:3 (by default), tunes if the method asks for it, retrains on the
// full training part and scores both parts. The test part is only used for
// the final score.
[[nodiscard]] auto run_experiment(const Dataset& cleaned, Method method, const ExperimentConfig& config,
                                  const ExperimentHooks& hooks = {}) -> MethodReport;

// Wall-clock fields live under the single key "timing".
[[nodiscard]] auto to_json(const MethodReport& r, const ExperimentConfig& config, std::string_view trace_file = {})
    -> nlohmann::ordered_json;

struct AccuracyGrid {
    std::vector<std::string> methods;
    std::vector<double> train;
    std::vector<double> test;
};

struct Comparison {
    std::vector<nlohmann::ordered_json> entries;
    AccuracyGrid grid;
};

// Merges method reports (JSON produced by to_json) into a train/test by
// method accuracy grid. Values are copied, never recomputed.
[[nodiscard]] auto compare(std::span<const nlohmann::ordered_json> reports) -> Comparison;

[[nodiscard]] auto to_json(const Comparison& c) -> nlohmann::ordered_json;

// Plain-text table: header row of methods, then "Train" and "Test" rows.
[[nodiscard]] auto format_table(const AccuracyGrid& grid) -> std::string;

} // namespace ssarf
