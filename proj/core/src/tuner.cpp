#include "ssarf/tuner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ssarf/error.hpp"
#include "ssarf/random.hpp"

namespace ssarf {

namespace {
    // Substream ids derived from the experiment seed.
    enum Stream : std::uint64_t { kSplit = 1, kModel = 2, kFolds = 3, kSearch = 4 };
} // namespace

auto to_string(Method m) -> std::string_view
{
    switch (m) {
    case Method::Rf:
        return "RF";
    case Method::SsaRf:
        return "SSA-RF";
    case Method::IssaRf:
        return "ISSA-RF";
    }
    return "?";
}

auto method_slug(Method m) -> std::string_view
{
    switch (m) {
    case Method::Rf:
        return "rf";
    case Method::SsaRf:
        return "ssa-rf";
    case Method::IssaRf:
        return "issa-rf";
    }
    return "?";
}

auto parse_method(std::string_view text) -> Method
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto m : {Method::Rf, Method::SsaRf, Method::IssaRf}) {
        if (lower == method_slug(m)) {
            return m;
        }
    }
    throw ConfigError("unknown method '" + std::string(text) + "' (expected rf, ssa-rf or issa-rf)");
}

auto search_space(std::size_t n_features) -> SearchSpace
{
    std::vector<double> lower{kMaxDepthLow, 0.0, kMinLeafLow, 0.0};
    std::vector<double> upper{kMaxDepthHigh, 1.0, kMinLeafHigh, 1.0};
    lower.resize(kSearchHeader + n_features, 0.0);
    upper.resize(kSearchHeader + n_features, 1.0);
    return {std::move(lower), std::move(upper)};
}

auto decode(std::span<const double> v, std::size_t n_features, std::size_t n_trees) -> HyperParams
{
    if (v.size() != kSearchHeader + n_features) {
        throw std::invalid_argument("search vector has " + std::to_string(v.size()) + " entries, expected "
                                    + std::to_string(kSearchHeader + n_features));
    }
    if (n_features == 0) {
        throw std::invalid_argument("cannot decode a search vector without features");
    }
    auto rounded = [](double x, double lo, double hi) {
        return static_cast<std::size_t>(std::llround(std::clamp(x, lo, hi)));
    };

    HyperParams p;
    p.n_trees = n_trees;
    p.max_depth = rounded(v[0], kMaxDepthLow, kMaxDepthHigh);
    p.criterion = v[1] < 0.5 ? Criterion::Gini : Criterion::Entropy;
    p.min_samples_leaf = rounded(v[2], kMinLeafLow, kMinLeafHigh);

    auto const mask_raw = v.subspan(kSearchHeader);
    p.feature_mask.resize(n_features);
    std::size_t active = 0;
    for (std::size_t i = 0; i < n_features; ++i) {
        p.feature_mask[i] = mask_raw[i] >= 0.5;
        active += p.feature_mask[i] ? 1 : 0;
    }
    if (active == 0) {
        auto const best = std::max_element(mask_raw.begin(), mask_raw.end()) - mask_raw.begin();
        p.feature_mask[static_cast<std::size_t>(best)] = true;
        active = 1;
    }
    auto const fraction = std::clamp(v[3], 0.0, 1.0);
    auto const mtry = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(active)));
    p.mtry = std::clamp<std::size_t>(mtry, 1, active);
    return p;
}

auto encode_search_vector(const HyperParams& p) -> std::vector<double>
{
    std::vector<double> v(kSearchHeader + p.feature_mask.size());
    v[0] = std::clamp(static_cast<double>(std::min<std::size_t>(p.max_depth, 20)), kMaxDepthLow, kMaxDepthHigh);
    v[1] = p.criterion == Criterion::Gini ? 0.25 : 0.75;
    v[2] = std::clamp(static_cast<double>(p.min_samples_leaf), kMinLeafLow, kMinLeafHigh);
    auto const active = std::max<std::size_t>(1, p.active_features().size());
    v[3] = std::clamp(static_cast<double>(p.mtry) / static_cast<double>(active), 0.0, 1.0);
    for (std::size_t i = 0; i < p.feature_mask.size(); ++i) {
        v[kSearchHeader + i] = p.feature_mask[i] ? 0.75 : 0.25;
    }
    return v;
}

auto cv_fitness(std::span<const double> v, const LabeledData& train, std::size_t folds, std::uint64_t seed,
                std::size_t n_trees, const RowAccessHook& hook) -> double
{
    auto const params = decode(v, train.features.cols(), n_trees);
    auto const assignment = stratified_folds(train.labels, folds, seed);

    std::vector<unsigned char> in_fold(train.size());
    double accuracy_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < assignment.size(); ++k) {
        auto const& validation = assignment[k];
        if (validation.empty()) {
            continue;
        }
        std::fill(in_fold.begin(), in_fold.end(), 0);
        for (auto i : validation) {
            in_fold[i] = 1;
        }
        std::vector<std::size_t> training;
        training.reserve(train.size() - validation.size());
        std::array<bool, 2> seen{false, false};
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (in_fold[i] == 0) {
                training.push_back(i);
                seen[static_cast<std::size_t>(train.labels[i] - 1)] = true;
            }
        }
        if (!seen[0] || !seen[1]) {
            continue;
        }
        auto const fold_train = train.take(training);
        auto const fold_validation = train.take(validation);
        if (hook) {
            hook(fold_train.source_rows);
            hook(fold_validation.source_rows);
        }
        auto const forest = fit(fold_train.features, fold_train.labels, params, derive_seed(seed, 100 + k), 1);
        accuracy_sum += evaluate(forest, fold_validation.features, fold_validation.labels).accuracy;
        ++used;
    }
    if (used == 0) {
        return 1.0;
    }
    return 1.0 - accuracy_sum / static_cast<double>(used);
}

void validate(const ExperimentConfig& c)
{
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    if (c.folds < 2) {
        throw ConfigError("folds must be at least 2");
    }
    if (c.search_trees == 0) {
        throw ConfigError("search_trees must be positive");
    }
    validate(c.optimizer);
}

namespace {
    auto resolve_forest_params(HyperParams p, std::size_t n_features) -> HyperParams
    {
        if (p.feature_mask.empty()) {
            auto const defaults = default_params(n_features);
            p.feature_mask = defaults.feature_mask;
            p.mtry = defaults.mtry;
        }
        validate(p, n_features);
        return p;
    }
} // namespace

auto run_experiment(const Dataset& cleaned, Method method, const ExperimentConfig& config,
                    const ExperimentHooks& hooks) -> MethodReport
{
    validate(config);
    auto const started = std::chrono::steady_clock::now();

    auto const data = encode(cleaned);
    auto const p = data.features.cols();

    MethodReport report;
    report.method = method;
    report.seed = config.seed;
    report.partition = stratified_partition(data.labels, config.train_fraction, derive_seed(config.seed, kSplit));
    auto const train = data.take(report.partition.train);
    auto const test = data.take(report.partition.test);

    if (method == Method::Rf) {
        report.params = resolve_forest_params(config.forest, p);
    } else {
        auto fitness = [&](std::span<const double> v) {
            return cv_fitness(v, train, config.folds, derive_seed(config.seed, kFolds), config.search_trees,
                              hooks.on_fitness_rows);
        };
        auto const space = search_space(p);
        auto issa = config.optimizer;
        issa.base.seed = derive_seed(config.seed, kSearch);
        issa.base.threads = config.threads;
        if (method == Method::SsaRf) {
            auto ssa = issa.base;
            if (config.equal_budget) {
                ssa.max_iterations = iterations_for_budget(ssa, planned_evaluations(issa));
            }
            report.optimization = optimize(fitness, space, ssa);
        } else {
            report.optimization = ils_optimize(fitness, space, issa);
        }
        report.params = decode(report.optimization->best_position, p, config.search_trees);
    }

    report.model = fit(train.features, train.labels, report.params, derive_seed(config.seed, kModel), config.threads);
    report.train = evaluate(report.model, train.features, train.labels);
    report.test = evaluate(report.model, test.features, test.labels);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace ssarf
