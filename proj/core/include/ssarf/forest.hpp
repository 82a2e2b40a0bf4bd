#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssarf/dataset.hpp"
#include "ssarf/random.hpp"

namespace ssarf {

enum class Criterion { Gini, Entropy };

[[nodiscard]] auto to_string(Criterion c) -> std::string_view;
[[nodiscard]] auto parse_criterion(std::string_view text) -> Criterion;

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

// Smallest impurity decrease that counts as a useful split. Candidates whose
// gains differ by less than this are treated as tied.
inline constexpr double kMinSplitGain = 1e-12;

struct HyperParams {
    std::size_t n_trees{100};
    std::size_t max_depth{kUnlimitedDepth};
    Criterion criterion{Criterion::Gini};
    std::size_t min_samples_leaf{1};
    std::size_t mtry{1};
    std::vector<bool> feature_mask;
    // Test hook: train every tree on the full training set.
    bool bootstrap{true};

    [[nodiscard]] auto active_features() const -> std::vector<std::size_t>;

    auto operator==(const HyperParams&) const -> bool = default;
};

// Library defaults for `n_features` columns: 100 trees, unlimited depth, Gini,
// leaf size 1, all features, mtry = floor(sqrt(active)).
[[nodiscard]] auto default_params(std::size_t n_features) -> HyperParams;

// Throws ConfigError describing the first violated constraint.
void validate(const HyperParams& p, std::size_t n_features);

// Impurity of a label multiset; labels may be any integers.
// Throws std::invalid_argument on an empty input.
[[nodiscard]] auto impurity(std::span<const int> labels, Criterion c) -> double;

// Impurity from per-class counts (weights allowed).
[[nodiscard]] auto impurity_from_counts(std::span<const double> counts, Criterion c) -> double;

struct SplitCandidate {
    std::size_t feature{};
    double threshold{};
    double gain{};
};

// Exhaustive search over midpoints between consecutive distinct values of each
// candidate feature, restricted to `rows` (duplicates count with multiplicity).
// Samples with value <= threshold go left. Returns nothing when no split gains
// more than kMinSplitGain; ties go to the lower feature, then lower threshold.
[[nodiscard]] auto best_split(const FeatureMatrix& x, std::span<const int> labels, std::span<const std::size_t> rows,
                              std::span<const std::size_t> candidate_features, Criterion c,
                              std::size_t min_samples_leaf = 1) -> std::optional<SplitCandidate>;

// n draws with replacement from [0, n).
[[nodiscard]] auto bootstrap_sample(std::size_t n, Rng& rng) -> std::vector<std::size_t>;

struct Leaf {
    std::array<double, 2> class_counts{};
    int label{1};

    auto operator==(const Leaf&) const -> bool = default;
};

struct Split {
    std::size_t feature{};
    double threshold{};
    std::size_t left{};
    std::size_t right{};

    auto operator==(const Split&) const -> bool = default;
};

using TreeNode = std::variant<Leaf, Split>;

// Binary decision tree stored as a node array; node 0 is the root.
class Tree {
public:
    Tree() = default;
    explicit Tree(std::vector<TreeNode> nodes)
        : nodes_(std::move(nodes))
    {
    }

    [[nodiscard]] auto nodes() const noexcept -> const std::vector<TreeNode>& { return nodes_; }
    [[nodiscard]] auto predict(std::span<const double> row) const -> int;
    // Longest root-to-leaf path, counted in edges.
    [[nodiscard]] auto depth() const -> std::size_t;

    auto operator==(const Tree&) const -> bool = default;

private:
    std::vector<TreeNode> nodes_;
};

struct Forest {
    std::vector<Tree> trees;
    HyperParams params;
    std::uint64_t training_seed{};
    std::size_t n_features{};

    auto operator==(const Forest&) const -> bool = default;
};

// Trains params.n_trees CART trees, each on its own bootstrap sample drawn from
// a per-tree random substream of `seed`. The result does not depend on `threads`.
// Labels must be 1 or 2.
[[nodiscard]] auto fit(const FeatureMatrix& x, std::span<const int> labels, const HyperParams& params,
                       std::uint64_t seed, std::size_t threads = 1) -> Forest;

// Majority vote; a tie goes to label 1. Throws SchemaError on arity mismatch.
[[nodiscard]] auto predict(const Forest& f, std::span<const double> row) -> int;

struct ConfusionMatrix {
    // counts[actual - 1][predicted - 1]
    std::array<std::array<std::size_t, 2>, 2> counts{};

    void add(int actual, int predicted);
    [[nodiscard]] auto total() const noexcept -> std::size_t;
    [[nodiscard]] auto correct() const noexcept -> std::size_t;
    [[nodiscard]] auto accuracy() const -> double;

    auto operator==(const ConfusionMatrix&) const -> bool = default;
};

struct Evaluation {
    ConfusionMatrix confusion;
    double accuracy{};
};

// Throws std::invalid_argument on empty data.
[[nodiscard]] auto evaluate(const Forest& f, const FeatureMatrix& x, std::span<const int> labels) -> Evaluation;

// JSON persistence. Round trips are lossless.
[[nodiscard]] auto to_json(const HyperParams& p) -> nlohmann::ordered_json;
[[nodiscard]] auto params_from_json(const nlohmann::json& j) -> HyperParams;
[[nodiscard]] auto to_json(const Forest& f) -> nlohmann::ordered_json;
[[nodiscard]] auto forest_from_json(const nlohmann::json& j) -> Forest;
[[nodiscard]] auto to_json(const ConfusionMatrix& m) -> nlohmann::ordered_json;

} // namespace ssarf
