#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/tuner.hpp"

namespace ssarf {

namespace {

    auto evaluation_json(const Evaluation& e, std::size_t rows) -> nlohmann::ordered_json
    {
        return {{"rows", rows}, {"accuracy", e.accuracy}, {"confusion", to_json(e.confusion)}};
    }

    auto utc_timestamp() -> std::string
    {
        auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::array<char, 32> buf{};
        std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf.data();
    }

    auto method_rank(const std::string& name) -> int
    {
        for (auto m : {Method::Rf, Method::SsaRf, Method::IssaRf}) {
            if (name == to_string(m)) {
                return static_cast<int>(m);
            }
        }
        return 100;
    }

} // namespace

auto to_json(const MethodReport& r, const ExperimentConfig& config, std::string_view trace_file)
    -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(r.method));
    j["seed"] = r.seed;
    j["split"] = {{"train_fraction", config.train_fraction},
                  {"train_rows", r.partition.train.size()},
                  {"test_rows", r.partition.test.size()}};
    j["train"] = evaluation_json(r.train, r.partition.train.size());
    j["test"] = evaluation_json(r.test, r.partition.test.size());
    j["params"] = to_json(r.params);
    if (r.optimization) {
        auto const& opt = *r.optimization;
        j["optimizer"] = {
            {"best_cv_fitness", opt.best_fitness},
            {"evaluations", opt.trace.evaluations},
            {"iterations", opt.trace.best_so_far.empty() ? 0 : opt.trace.best_so_far.size() - 1},
            {"best_position", opt.best_position},
            {"folds", config.folds},
            {"search_trees", config.search_trees},
            {"trace_file", std::string(trace_file)},
        };
    } else {
        j["optimizer"] = nullptr;
    }
    j["metadata"] = {
        {"learning_rate", config.learning_rate},
        {"learning_rate_note", "recorded for reference only; the random forest has no learning rate"},
        {"test_set_used_for_fitness", false},
    };
    j["timing"] = {{"wall_time_seconds", r.wall_time_seconds}, {"timestamp", utc_timestamp()}};
    return j;
}

auto compare(std::span<const nlohmann::ordered_json> reports) -> Comparison
{
    if (reports.empty()) {
        throw ConfigError("nothing to compare: no method reports");
    }
    Comparison c;
    c.entries.assign(reports.begin(), reports.end());
    std::stable_sort(c.entries.begin(), c.entries.end(), [](const auto& a, const auto& b) {
        return method_rank(a.at("method").template get<std::string>())
            < method_rank(b.at("method").template get<std::string>());
    });
    try {
        for (auto const& e : c.entries) {
            c.grid.methods.push_back(e.at("method").get<std::string>());
            c.grid.train.push_back(e.at("train").at("accuracy").get<double>());
            c.grid.test.push_back(e.at("test").at("accuracy").get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed method report: ") + e.what());
    }
    return c;
}

auto to_json(const Comparison& c) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["methods"] = c.grid.methods;
    j["train"] = c.grid.train;
    j["test"] = c.grid.test;
    auto evaluations = nlohmann::ordered_json::array();
    for (auto const& e : c.entries) {
        auto const& opt = e.contains("optimizer") ? e.at("optimizer") : nlohmann::ordered_json(nullptr);
        evaluations.push_back(opt.is_null() ? nlohmann::ordered_json(0) : opt.at("evaluations"));
    }
    j["evaluations"] = std::move(evaluations);
    j["entries"] = c.entries;
    return j;
}

auto format_table(const AccuracyGrid& grid) -> std::string
{
    auto cell = [](double v) {
        std::array<char, 32> buf{};
        std::snprintf(buf.data(), buf.size(), "%.1f%%", 100.0 * v);
        return std::string(buf.data());
    };
    std::size_t width = 8;
    for (auto const& m : grid.methods) {
        width = std::max(width, m.size() + 2);
    }
    auto pad = [width](std::string s) {
        s.resize(std::max(width, s.size()), ' ');
        return s;
    };
    std::ostringstream out;
    out << pad("");
    for (auto const& m : grid.methods) {
        out << pad(m);
    }
    out << '\n' << pad("Train");
    for (double v : grid.train) {
        out << pad(cell(v));
    }
    out << '\n' << pad("Test");
    for (double v : grid.test) {
        out << pad(cell(v));
    }
    out << '\n';
    auto text = out.str();
    // strip trailing blanks on each line
    std::string cleaned;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        line.erase(line.find_last_not_of(' ') + 1);
        cleaned += line + '\n';
    }
    return cleaned;
}

} // namespace ssarf
