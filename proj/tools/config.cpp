#include <fstream>
#include <set>

#include "cli.hpp"
#include "ssarf/error.hpp"

namespace ssarf::cli {

namespace {

    void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where)
    {
        for (auto const& [key, value] : j.items()) {
            if (!known.contains(key)) {
                throw ConfigError("unknown key '" + key + "' in " + where);
            }
        }
    }

    template <typename T>
    void read(const nlohmann::json& j, const char* key, T& target)
    {
        if (j.contains(key)) {
            target = j.at(key).get<T>();
        }
    }

} // namespace

auto parse_run_config(const nlohmann::json& j) -> RunConfig
{
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    RunConfig c;
    auto& e = c.experiment;
    try {
        reject_unknown(j,
                       {"input_csv", "output_dir", "method", "seed", "train_fraction", "folds", "threads", "clean",
                        "search_trees", "equal_budget", "learning_rate", "forest", "optimizer"},
                       "config");
        if (j.contains("input_csv")) {
            c.input_csv = j.at("input_csv").get<std::string>();
        }
        if (j.contains("output_dir")) {
            c.output_dir = j.at("output_dir").get<std::string>();
        }
        if (j.contains("method")) {
            c.method = parse_method(j.at("method").get<std::string>());
        }
        read(j, "clean", c.clean);
        read(j, "seed", e.seed);
        read(j, "train_fraction", e.train_fraction);
        read(j, "folds", e.folds);
        read(j, "threads", e.threads);
        read(j, "search_trees", e.search_trees);
        read(j, "equal_budget", e.equal_budget);
        read(j, "learning_rate", e.learning_rate);

        if (j.contains("forest")) {
            auto const& f = j.at("forest");
            reject_unknown(f, {"n_trees", "max_depth", "criterion", "min_samples_leaf", "mtry", "feature_mask"},
                           "forest");
            read(f, "n_trees", e.forest.n_trees);
            if (f.contains("max_depth") && !f.at("max_depth").is_null()) {
                e.forest.max_depth = f.at("max_depth").get<std::size_t>();
            }
            if (f.contains("criterion")) {
                e.forest.criterion = parse_criterion(f.at("criterion").get<std::string>());
            }
            read(f, "min_samples_leaf", e.forest.min_samples_leaf);
            read(f, "feature_mask", e.forest.feature_mask);
            read(f, "mtry", e.forest.mtry);
        }
        if (j.contains("optimizer")) {
            auto const& o = j.at("optimizer");
            reject_unknown(o,
                           {"population_size", "max_iterations", "producer_fraction", "scout_fraction",
                            "safety_threshold", "chaos_seed", "weight_max", "weight_min", "cauchy_scale",
                            "ils_restarts", "acceptance_temperature"},
                           "optimizer");
            auto& opt = e.optimizer;
            read(o, "population_size", opt.base.population_size);
            read(o, "max_iterations", opt.base.max_iterations);
            read(o, "producer_fraction", opt.base.producer_fraction);
            read(o, "scout_fraction", opt.base.scout_fraction);
            read(o, "safety_threshold", opt.base.safety_threshold);
            read(o, "chaos_seed", opt.chaos_seed);
            read(o, "weight_max", opt.weight_max);
            read(o, "weight_min", opt.weight_min);
            read(o, "cauchy_scale", opt.cauchy_scale);
            read(o, "ils_restarts", opt.ils_restarts);
            read(o, "acceptance_temperature", opt.acceptance_temperature);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("invalid config value: ") + ex.what());
    }
    return c;
}

auto load_run_config(const std::filesystem::path& path) -> RunConfig
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + ex.what());
    }
    return parse_run_config(j);
}

} // namespace ssarf::cli
