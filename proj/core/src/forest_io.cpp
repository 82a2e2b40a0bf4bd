#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/forest.hpp"

namespace ssarf {

namespace {

    auto node_to_json(const Tree& tree, std::size_t index) -> nlohmann::ordered_json
    {
        auto const& node = tree.nodes().at(index);
        if (auto const* leaf = std::get_if<Leaf>(&node)) {
            return {{"leaf", true}, {"counts", leaf->class_counts}, {"label", leaf->label}};
        }
        auto const& split = std::get<Split>(node);
        return {{"feature", split.feature},
                {"threshold", split.threshold},
                {"left", node_to_json(tree, split.left)},
                {"right", node_to_json(tree, split.right)}};
    }

    // Rebuilds nodes in pre-order, left subtree first, which is also the order
    // the trainer emits them in.
    auto node_from_json(const nlohmann::json& j, std::vector<TreeNode>& nodes, std::size_t n_features) -> std::size_t
    {
        auto const index = nodes.size();
        if (j.value("leaf", false)) {
            Leaf leaf;
            leaf.class_counts = j.at("counts").get<std::array<double, 2>>();
            leaf.label = j.at("label").get<int>();
            if (leaf.label != 1 && leaf.label != 2) {
                throw SchemaError("leaf label must be 1 or 2");
            }
            nodes.emplace_back(leaf);
            return index;
        }
        Split split;
        split.feature = j.at("feature").get<std::size_t>();
        if (split.feature >= n_features) {
            throw SchemaError("split feature " + std::to_string(split.feature) + " out of range");
        }
        split.threshold = j.at("threshold").get<double>();
        nodes.emplace_back(split);
        split.left = node_from_json(j.at("left"), nodes, n_features);
        split.right = node_from_json(j.at("right"), nodes, n_features);
        nodes[index] = split;
        return index;
    }

} // namespace

auto to_json(const HyperParams& p) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["n_trees"] = p.n_trees;
    j["max_depth"] = p.max_depth == kUnlimitedDepth ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(p.max_depth);
    j["criterion"] = std::string(to_string(p.criterion));
    j["min_samples_leaf"] = p.min_samples_leaf;
    j["mtry"] = p.mtry;
    j["feature_mask"] = p.feature_mask;
    j["bootstrap"] = p.bootstrap;
    return j;
}

auto params_from_json(const nlohmann::json& j) -> HyperParams
{
    try {
        HyperParams p;
        p.n_trees = j.value("n_trees", p.n_trees);
        if (j.contains("max_depth") && !j.at("max_depth").is_null()) {
            p.max_depth = j.at("max_depth").get<std::size_t>();
        }
        p.criterion = parse_criterion(j.value("criterion", std::string("gini")));
        p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
        if (j.contains("feature_mask")) {
            p.feature_mask = j.at("feature_mask").get<std::vector<bool>>();
        }
        p.mtry = j.value("mtry", p.mtry);
        p.bootstrap = j.value("bootstrap", true);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed hyperparameters: ") + e.what());
    }
}

auto to_json(const Forest& f) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["format"] = "ssarf-forest";
    j["version"] = 1;
    j["n_features"] = f.n_features;
    j["training_seed"] = f.training_seed;
    j["params"] = to_json(f.params);
    auto trees = nlohmann::ordered_json::array();
    for (auto const& tree : f.trees) {
        trees.push_back(node_to_json(tree, 0));
    }
    j["trees"] = std::move(trees);
    return j;
}

auto forest_from_json(const nlohmann::json& j) -> Forest
{
    try {
        if (j.value("format", std::string()) != "ssarf-forest") {
            throw SchemaError("not a serialized forest");
        }
        Forest f;
        f.n_features = j.at("n_features").get<std::size_t>();
        f.training_seed = j.at("training_seed").get<std::uint64_t>();
        f.params = params_from_json(j.at("params"));
        validate(f.params, f.n_features);
        for (auto const& t : j.at("trees")) {
            std::vector<TreeNode> nodes;
            node_from_json(t, nodes, f.n_features);
            f.trees.emplace_back(std::move(nodes));
        }
        if (f.trees.size() != f.params.n_trees) {
            throw SchemaError("tree count does not match n_trees");
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed forest: ") + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError(std::string("malformed forest: ") + e.what());
    }
}

auto to_json(const ConfusionMatrix& m) -> nlohmann::ordered_json
{
    return {{"labels", {1, 2}}, {"counts", m.counts}};
}

} // namespace ssarf
