#include "ssarf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/parallel.hpp"

namespace ssarf {

auto to_string(Criterion c) -> std::string_view
{
    return c == Criterion::Gini ? "gini" : "entropy";
}

auto parse_criterion(std::string_view text) -> Criterion
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "gini") {
        return Criterion::Gini;
    }
    if (lower == "entropy") {
        return Criterion::Entropy;
    }
    throw ConfigError("unknown split criterion '" + std::string(text) + "'");
}

auto HyperParams::active_features() const -> std::vector<std::size_t>
{
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < feature_mask.size(); ++i) {
        if (feature_mask[i]) {
            active.push_back(i);
        }
    }
    return active;
}

auto default_params(std::size_t n_features) -> HyperParams
{
    HyperParams p;
    p.feature_mask.assign(n_features, true);
    p.mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features)))));
    return p;
}

void validate(const HyperParams& p, std::size_t n_features)
{
    if (p.n_trees == 0) {
        throw ConfigError("n_trees must be positive");
    }
    if (p.max_depth == 0) {
        throw ConfigError("max_depth must be positive");
    }
    if (p.min_samples_leaf == 0) {
        throw ConfigError("min_samples_leaf must be positive");
    }
    if (p.feature_mask.size() != n_features) {
        throw ConfigError("feature mask has " + std::to_string(p.feature_mask.size()) + " entries, data has "
                          + std::to_string(n_features) + " features");
    }
    auto const active = p.active_features().size();
    if (active == 0) {
        throw ConfigError("feature mask selects no feature");
    }
    if (p.mtry == 0 || p.mtry > active) {
        throw ConfigError("mtry " + std::to_string(p.mtry) + " must lie in [1, " + std::to_string(active) + "]");
    }
}

auto impurity_from_counts(std::span<const double> counts, Criterion c) -> double
{
    double const n = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (!(n > 0.0)) {
        throw std::invalid_argument("impurity of an empty node");
    }
    double result = c == Criterion::Gini ? 1.0 : 0.0;
    for (double k : counts) {
        if (k <= 0.0) {
            continue;
        }
        double const p = k / n;
        if (c == Criterion::Gini) {
            result -= p * p;
        } else {
            result -= p * std::log2(p);
        }
    }
    return std::clamp(result, 0.0, 1.0);
}

auto impurity(std::span<const int> labels, Criterion c) -> double
{
    if (labels.empty()) {
        throw std::invalid_argument("impurity of an empty label set");
    }
    std::vector<int> sorted(labels.begin(), labels.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> counts;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        counts.push_back(static_cast<double>(j - i));
        i = j;
    }
    return impurity_from_counts(counts, c);
}

namespace {

    auto binary_impurity(double c1, double c2, Criterion c) -> double
    {
        std::array<double, 2> const counts{c1, c2};
        return impurity_from_counts(counts, c);
    }

    struct Best {
        bool found{false};
        std::size_t feature{};
        double threshold{};
        double gain{};

        void offer(std::size_t f, double t, double g)
        {
            if (found ? g > gain + kMinSplitGain : g > kMinSplitGain) {
                found = true;
                feature = f;
                threshold = t;
                gain = g;
            }
        }
    };

    // Sweeps `sorted` (rows ordered by value of `feature`) left to right and
    // offers every admissible midpoint threshold to `best`.
    template <typename WeightFn>
    void sweep_feature(const FeatureMatrix& x, std::span<const int> labels, std::span<const std::size_t> sorted,
                       std::size_t feature, std::array<double, 2> totals, Criterion c, double min_leaf,
                       WeightFn&& weight, Best& best)
    {
        double const n = totals[0] + totals[1];
        double const parent = binary_impurity(totals[0], totals[1], c);
        std::array<double, 2> left{};
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            auto const r = sorted[i];
            left[static_cast<std::size_t>(labels[r] - 1)] += weight(r);
            double const v = x(r, feature);
            double const next = x(sorted[i + 1], feature);
            if (!(v < next)) {
                continue;
            }
            double const n_left = left[0] + left[1];
            double const n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) {
                continue;
            }
            double const imp_left = binary_impurity(left[0], left[1], c);
            double const imp_right = binary_impurity(totals[0] - left[0], totals[1] - left[1], c);
            double const gain = parent - (n_left * imp_left + n_right * imp_right) / n;
            double threshold = 0.5 * (v + next);
            if (!(threshold < next)) {
                threshold = v;
            }
            best.offer(feature, threshold, gain);
        }
    }

    void check_labels(std::span<const int> labels)
    {
        for (int y : labels) {
            if (y != 1 && y != 2) {
                throw std::invalid_argument("class labels must be 1 or 2, got " + std::to_string(y));
            }
        }
    }

    class TreeBuilder {
    public:
        TreeBuilder(const FeatureMatrix& x, std::span<const int> labels, const HyperParams& params,
                    std::span<const std::size_t> active, std::vector<std::vector<std::size_t>> order,
                    std::vector<double> weight, Rng& rng)
            : x_(x)
            , labels_(labels)
            , params_(params)
            , active_(active)
            , order_(std::move(order))
            , weight_(std::move(weight))
            , goes_left_(x.rows(), 0)
            , rng_(rng)
        {
        }

        auto build() -> Tree
        {
            grow(0, order_.front().size(), 0);
            return Tree(std::move(nodes_));
        }

    private:
        auto grow(std::size_t begin, std::size_t end, std::size_t depth) -> std::size_t
        {
            std::array<double, 2> totals{};
            for (std::size_t i = begin; i < end; ++i) {
                auto const r = order_.front()[i];
                totals[static_cast<std::size_t>(labels_[r] - 1)] += weight_[r];
            }
            auto const index = nodes_.size();
            nodes_.emplace_back(make_leaf(totals));

            double const n = totals[0] + totals[1];
            auto const min_leaf = static_cast<double>(params_.min_samples_leaf);
            if (depth >= params_.max_depth || totals[0] == 0.0 || totals[1] == 0.0 || n < 2.0 * min_leaf) {
                return index;
            }

            Best best;
            for (auto a : sample_candidates()) {
                auto const range = std::span<const std::size_t>(order_[a]).subspan(begin, end - begin);
                sweep_feature(x_, labels_, range, active_[a], totals, params_.criterion, min_leaf,
                              [this](std::size_t r) { return weight_[r]; }, best);
            }
            if (!best.found) {
                return index;
            }

            auto const mid = partition(begin, end, best.feature, best.threshold);
            auto const left = grow(begin, mid, depth + 1);
            auto const right = grow(mid, end, depth + 1);
            nodes_[index] = Split{best.feature, best.threshold, left, right};
            return index;
        }

        static auto make_leaf(std::array<double, 2> totals) -> Leaf
        {
            return Leaf{totals, totals[1] > totals[0] ? 2 : 1};
        }

        // Positions into active_, ascending.
        auto sample_candidates() -> std::vector<std::size_t>
        {
            std::vector<std::size_t> pool(active_.size());
            std::iota(pool.begin(), pool.end(), 0);
            if (params_.mtry < pool.size()) {
                for (std::size_t i = 0; i < params_.mtry; ++i) {
                    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
                    std::swap(pool[i], pool[pick(rng_)]);
                }
                pool.resize(params_.mtry);
                std::sort(pool.begin(), pool.end());
            }
            return pool;
        }

        // Stable-partitions every per-feature order range; returns the split point.
        auto partition(std::size_t begin, std::size_t end, std::size_t feature, double threshold) -> std::size_t
        {
            std::size_t n_left = 0;
            for (std::size_t i = begin; i < end; ++i) {
                auto const r = order_.front()[i];
                goes_left_[r] = x_(r, feature) <= threshold ? 1 : 0;
                n_left += goes_left_[r];
            }
            scratch_.resize(end - begin);
            for (auto& ord : order_) {
                std::size_t l = begin;
                std::size_t s = 0;
                for (std::size_t i = begin; i < end; ++i) {
                    auto const r = ord[i];
                    if (goes_left_[r] != 0) {
                        ord[l++] = r;
                    } else {
                        scratch_[s++] = r;
                    }
                }
                std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(s),
                          ord.begin() + static_cast<std::ptrdiff_t>(l));
            }
            return begin + n_left;
        }

        const FeatureMatrix& x_;
        std::span<const int> labels_;
        const HyperParams& params_;
        std::span<const std::size_t> active_;
        std::vector<std::vector<std::size_t>> order_;
        std::vector<double> weight_;
        std::vector<unsigned char> goes_left_;
        std::vector<std::size_t> scratch_;
        std::vector<TreeNode> nodes_;
        Rng& rng_;
    };

    auto sorted_by_feature(const FeatureMatrix& x, std::span<const std::size_t> rows, std::size_t feature)
        -> std::vector<std::size_t>
    {
        std::vector<std::size_t> sorted(rows.begin(), rows.end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](std::size_t a, std::size_t b) { return x(a, feature) < x(b, feature); });
        return sorted;
    }

} // namespace

auto best_split(const FeatureMatrix& x, std::span<const int> labels, std::span<const std::size_t> rows,
                std::span<const std::size_t> candidate_features, Criterion c, std::size_t min_samples_leaf)
    -> std::optional<SplitCandidate>
{
    if (candidate_features.empty()) {
        throw std::invalid_argument("best_split needs at least one candidate feature");
    }
    if (rows.empty()) {
        return std::nullopt;
    }
    check_labels(labels);
    std::array<double, 2> totals{};
    for (auto r : rows) {
        totals[static_cast<std::size_t>(labels[r] - 1)] += 1.0;
    }
    std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
    std::sort(features.begin(), features.end());

    Best best;
    for (auto f : features) {
        if (f >= x.cols()) {
            throw std::invalid_argument("candidate feature " + std::to_string(f) + " out of range");
        }
        auto const sorted = sorted_by_feature(x, rows, f);
        sweep_feature(x, labels, sorted, f, totals, c, static_cast<double>(min_samples_leaf),
                      [](std::size_t) { return 1.0; }, best);
    }
    if (!best.found) {
        return std::nullopt;
    }
    return SplitCandidate{best.feature, best.threshold, best.gain};
}

auto bootstrap_sample(std::size_t n, Rng& rng) -> std::vector<std::size_t>
{
    std::vector<std::size_t> sample(n);
    if (n == 0) {
        return sample;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (auto& s : sample) {
        s = pick(rng);
    }
    return sample;
}

auto Tree::predict(std::span<const double> row) const -> int
{
    std::size_t i = 0;
    while (true) {
        auto const& node = nodes_.at(i);
        if (auto const* leaf = std::get_if<Leaf>(&node)) {
            return leaf->label;
        }
        auto const& split = std::get<Split>(node);
        i = row[split.feature] <= split.threshold ? split.left : split.right;
    }
}

auto Tree::depth() const -> std::size_t
{
    if (nodes_.empty()) {
        return 0;
    }
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (auto const* split = std::get_if<Split>(&nodes_[i])) {
            stack.emplace_back(split->left, d + 1);
            stack.emplace_back(split->right, d + 1);
        }
    }
    return deepest;
}

auto fit(const FeatureMatrix& x, std::span<const int> labels, const HyperParams& params, std::uint64_t seed,
         std::size_t threads) -> Forest
{
    validate(params, x.cols());
    if (x.rows() == 0) {
        throw std::invalid_argument("cannot fit a forest on an empty training set");
    }
    if (x.rows() != labels.size()) {
        throw std::invalid_argument("feature rows and label count differ");
    }
    check_labels(labels);

    auto const active = params.active_features();
    std::vector<std::size_t> all_rows(x.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    std::vector<std::vector<std::size_t>> presorted;
    presorted.reserve(active.size());
    for (auto f : active) {
        presorted.push_back(sorted_by_feature(x, all_rows, f));
    }

    Forest forest;
    forest.params = params;
    forest.training_seed = seed;
    forest.n_features = x.cols();
    forest.trees.resize(params.n_trees);

    parallel_for(params.n_trees, threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        std::vector<double> weight(x.rows(), 1.0);
        if (params.bootstrap) {
            std::fill(weight.begin(), weight.end(), 0.0);
            for (auto i : bootstrap_sample(x.rows(), rng)) {
                weight[i] += 1.0;
            }
        }
        std::vector<std::vector<std::size_t>> order;
        order.reserve(active.size());
        for (auto const& sorted : presorted) {
            auto& o = order.emplace_back();
            o.reserve(sorted.size());
            for (auto r : sorted) {
                if (weight[r] > 0.0) {
                    o.push_back(r);
                }
            }
        }
        TreeBuilder builder(x, labels, params, active, std::move(order), std::move(weight), rng);
        forest.trees[t] = builder.build();
    });
    return forest;
}

auto predict(const Forest& f, std::span<const double> row) -> int
{
    if (row.size() != f.n_features) {
        throw SchemaError("row has " + std::to_string(row.size()) + " features, model expects "
                          + std::to_string(f.n_features));
    }
    std::size_t votes_for_two = 0;
    for (auto const& tree : f.trees) {
        votes_for_two += tree.predict(row) == 2 ? 1 : 0;
    }
    return 2 * votes_for_two > f.trees.size() ? 2 : 1;
}

void ConfusionMatrix::add(int actual, int predicted)
{
    if ((actual != 1 && actual != 2) || (predicted != 1 && predicted != 2)) {
        throw std::invalid_argument("confusion matrix labels must be 1 or 2");
    }
    ++counts[static_cast<std::size_t>(actual - 1)][static_cast<std::size_t>(predicted - 1)];
}

auto ConfusionMatrix::total() const noexcept -> std::size_t
{
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

auto ConfusionMatrix::correct() const noexcept -> std::size_t
{
    return counts[0][0] + counts[1][1];
}

auto ConfusionMatrix::accuracy() const -> double
{
    auto const n = total();
    if (n == 0) {
        throw std::invalid_argument("accuracy of an empty confusion matrix");
    }
    return static_cast<double>(correct()) / static_cast<double>(n);
}

auto evaluate(const Forest& f, const FeatureMatrix& x, std::span<const int> labels) -> Evaluation
{
    if (x.rows() == 0 || labels.empty()) {
        throw std::invalid_argument("cannot evaluate on empty data");
    }
    if (x.rows() != labels.size()) {
        throw std::invalid_argument("feature rows and label count differ");
    }
    Evaluation e;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        e.confusion.add(labels[i], predict(f, x.row(i)));
    }
    e.accuracy = e.confusion.accuracy();
    return e;
}

} // namespace ssarf
