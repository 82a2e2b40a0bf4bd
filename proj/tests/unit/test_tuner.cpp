#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "ssarf/dataset.hpp"
#include "ssarf/error.hpp"
#include "ssarf/tuner.hpp"
#include "trace_checks.hpp"

namespace {

using namespace ssarf;
using ssarf::testing::is_monotone;

auto vector_of(double depth, double crit, double leaf, double frac, std::vector<double> mask) -> std::vector<double>
{
    std::vector<double> v{depth, crit, leaf, frac};
    v.insert(v.end(), mask.begin(), mask.end());
    return v;
}

TEST(Decode, CriterionThreshold)
{
    auto const gini = decode(vector_of(5, 0.49, 1, 0.5, {1, 1, 1, 1, 1}), 5);
    auto const entropy = decode(vector_of(5, 0.5, 1, 0.5, {1, 1, 1, 1, 1}), 5);
    EXPECT_EQ(gini.criterion, Criterion::Gini);
    EXPECT_EQ(entropy.criterion, Criterion::Entropy);
    EXPECT_EQ(gini.n_trees, 100U);
}

TEST(Decode, RepairTurnsOnLargestMaskEntry)
{
    auto const p = decode(vector_of(5, 0.2, 1, 1.0, {0.1, 0.3, 0.2, 0.45, 0.0}), 5);
    EXPECT_EQ(p.feature_mask, (std::vector<bool>{false, false, false, true, false}));
    EXPECT_EQ(p.mtry, 1U);
}

TEST(Decode, RoundingAndMtry)
{
    auto const p = decode(vector_of(7.6, 0.9, 2.4, 0.5, {0.9, 0.6, 0.1, 0.5, 0.7}), 5);
    EXPECT_EQ(p.max_depth, 8U);
    EXPECT_EQ(p.min_samples_leaf, 2U);
    EXPECT_EQ(p.feature_mask, (std::vector<bool>{true, true, false, true, true}));
    EXPECT_EQ(p.mtry, 2U);
    auto const tiny = decode(vector_of(1, 0, 1, 0.0, {1, 0, 0, 0, 0}), 5);
    EXPECT_EQ(tiny.mtry, 1U);
}

TEST(Decode, WrongLengthThrows)
{
    EXPECT_THROW((void)decode(std::vector<double>{1, 0, 1, 0.5}, 5), std::invalid_argument);
}

TEST(DecodeProperty, TotalOnTheSearchBox)
{
    auto const space = search_space(5);
    Rng rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> v(space.dimension());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = space.lower()[i] + uniform01(rng) * space.width(i);
        }
        auto const p = decode(v, 5);
        EXPECT_NO_THROW(validate(p, 5));
        EXPECT_GE(p.max_depth, 1U);
        EXPECT_LE(p.max_depth, 20U);
        EXPECT_GE(p.min_samples_leaf, 1U);
        EXPECT_LE(p.min_samples_leaf, 10U);
    }
}

TEST(DecodeProperty, EncodeDecodeRoundTripOnBinCentres)
{
    Rng rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        HyperParams p;
        p.max_depth = 1 + static_cast<std::size_t>(uniform01(rng) * 20);
        p.criterion = uniform01(rng) < 0.5 ? Criterion::Gini : Criterion::Entropy;
        p.min_samples_leaf = 1 + static_cast<std::size_t>(uniform01(rng) * 10);
        p.feature_mask.resize(5);
        std::size_t active = 0;
        for (std::size_t i = 0; i < 5; ++i) {
            p.feature_mask[i] = uniform01(rng) < 0.6;
            active += p.feature_mask[i] ? 1 : 0;
        }
        if (active == 0) {
            p.feature_mask[2] = true;
            active = 1;
        }
        p.mtry = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(active));
        auto const back = decode(encode_search_vector(p), 5, p.n_trees);
        EXPECT_EQ(back.max_depth, p.max_depth);
        EXPECT_EQ(back.criterion, p.criterion);
        EXPECT_EQ(back.min_samples_leaf, p.min_samples_leaf);
        EXPECT_EQ(back.feature_mask, p.feature_mask);
        EXPECT_EQ(back.mtry, p.mtry);
    }
}

auto train_part(const Dataset& d, std::uint64_t seed) -> LabeledData
{
    auto const data = encode(d);
    auto const p = stratified_partition(data.labels, 0.7, seed);
    return data.take(p.train);
}

TEST(CvFitness, SeparableDataGivesNearZero)
{
    auto const train = train_part(make_synthetic_dataset(400, 0.0, 1), 1);
    auto const v = vector_of(10, 0.2, 1, 1.0, {1, 1, 1, 1, 1});
    EXPECT_LT(cv_fitness(v, train, 5, 3, 30), 0.05);
}

TEST(CvFitness, RandomLabelsGiveChance)
{
    auto d = make_synthetic_dataset(600, 0.0, 2);
    std::mt19937_64 rng(5);
    for (auto& r : d.records) {
        r.immersion = std::uniform_int_distribution<int>(1, 2)(rng);
    }
    auto const train = train_part(d, 2);
    auto const v = vector_of(6, 0.2, 3, 0.5, {1, 1, 1, 1, 1});
    EXPECT_NEAR(cv_fitness(v, train, 5, 4, 30), 0.5, 0.1);
}

TEST(CvFitness, Deterministic)
{
    auto const train = train_part(make_synthetic_dataset(300, 0.1, 3), 3);
    auto const v = vector_of(4.2, 0.7, 3.3, 0.6, {0.8, 0.2, 0.9, 0.6, 0.7});
    EXPECT_EQ(cv_fitness(v, train, 5, 9, 20), cv_fitness(v, train, 5, 9, 20));
}

TEST(CvFitness, OnlyTouchesTheTrainingRows)
{
    auto const train = train_part(make_synthetic_dataset(200, 0.1, 4), 4);
    std::set<std::size_t> allowed(train.source_rows.begin(), train.source_rows.end());
    std::size_t outside = 0;
    auto const v = vector_of(5, 0.3, 2, 0.5, {1, 1, 1, 1, 1});
    (void)cv_fitness(v, train, 5, 1, 5, [&](std::span<const std::size_t> rows) {
        for (auto r : rows) {
            outside += allowed.count(r) == 0 ? 1 : 0;
        }
    });
    EXPECT_EQ(outside, 0U);
}

auto small_config(std::uint64_t seed) -> ExperimentConfig
{
    ExperimentConfig c;
    c.seed = seed;
    c.search_trees = 8;
    c.forest.n_trees = 30;
    c.optimizer.base.population_size = 6;
    c.optimizer.base.max_iterations = 4;
    c.optimizer.ils_restarts = 2;
    return c;
}

TEST(RunExperiment, TestRowsNeverReachFitness)
{
    auto const d = make_synthetic_dataset(300, 0.1, 5);
    for (auto method : {Method::SsaRf, Method::IssaRf}) {
        std::vector<std::size_t> touched;
        ExperimentHooks hooks;
        hooks.on_fitness_rows = [&](std::span<const std::size_t> rows) {
            touched.insert(touched.end(), rows.begin(), rows.end());
        };
        auto const report = run_experiment(d, method, small_config(6), hooks);
        std::set<std::size_t> const test(report.partition.test.begin(), report.partition.test.end());
        std::size_t hits = 0;
        for (auto r : touched) {
            hits += test.count(r);
        }
        EXPECT_FALSE(touched.empty());
        EXPECT_EQ(hits, 0U);
    }
}

TEST(RunExperiment, RepeatableAcrossThreadCounts)
{
    auto const d = make_synthetic_dataset(300, 0.1, 6);
    auto config = small_config(7);
    auto const a = run_experiment(d, Method::IssaRf, config);
    config.threads = 4;
    auto const b = run_experiment(d, Method::IssaRf, config);
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.optimization->trace.best_so_far, b.optimization->trace.best_so_far);
    EXPECT_EQ(a.test.accuracy, b.test.accuracy);
    EXPECT_TRUE(is_monotone(a.optimization->trace));
    auto ja = to_json(a, config);
    auto jb = to_json(b, config);
    ja.erase("timing");
    jb.erase("timing");
    EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(RunExperiment, EqualBudgetMatchesEvaluations)
{
    auto const d = make_synthetic_dataset(200, 0.1, 7);
    auto config = small_config(8);
    config.equal_budget = true;
    auto const ssa = run_experiment(d, Method::SsaRf, config);
    auto const issa = run_experiment(d, Method::IssaRf, config);
    auto const a = static_cast<double>(ssa.optimization->trace.evaluations);
    auto const b = static_cast<double>(issa.optimization->trace.evaluations);
    EXPECT_LE(std::abs(a - b), 0.1 * b);
    EXPECT_TRUE(is_monotone(ssa.optimization->trace));
}

TEST(RunExperiment, PlainForestUsesDefaults)
{
    auto const d = make_synthetic_dataset(200, 0.1, 8);
    auto const r = run_experiment(d, Method::Rf, small_config(9));
    EXPECT_FALSE(r.optimization.has_value());
    EXPECT_EQ(r.params.mtry, 2U);
    EXPECT_EQ(r.partition.train.size() + r.partition.test.size(), 200U);
    auto const j = to_json(r, small_config(9));
    EXPECT_TRUE(j["optimizer"].is_null());
    EXPECT_EQ(j["metadata"]["test_set_used_for_fitness"], false);
}

TEST(RunExperiment, TooSmallToStratify)
{
    auto d = make_synthetic_dataset(20, 0.0, 9);
    for (auto& r : d.records) {
        r.immersion = 1;
    }
    d.records[0].immersion = 2;
    EXPECT_THROW((void)run_experiment(d, Method::Rf, small_config(1)), std::invalid_argument);
}

auto fake_report(const std::string& method, double train, double test) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["method"] = method;
    j["train"] = {{"accuracy", train}};
    j["test"] = {{"accuracy", test}};
    j["optimizer"] = nullptr;
    return j;
}

TEST(Compare, ThreeEntriesGiveGrid)
{
    std::vector<nlohmann::ordered_json> reports{fake_report("ISSA-RF", 0.99, 0.95), fake_report("RF", 0.93, 0.733),
                                                fake_report("SSA-RF", 0.975, 0.94)};
    auto const c = compare(reports);
    EXPECT_EQ(c.grid.methods, (std::vector<std::string>{"RF", "SSA-RF", "ISSA-RF"}));
    EXPECT_EQ(c.grid.train, (std::vector<double>{0.93, 0.975, 0.99}));
    EXPECT_EQ(c.grid.test, (std::vector<double>{0.733, 0.94, 0.95}));
    auto const table = format_table(c.grid);
    EXPECT_NE(table.find("Train"), std::string::npos);
    EXPECT_NE(table.find("Test"), std::string::npos);
    EXPECT_NE(table.find("73.3%"), std::string::npos);
    EXPECT_LT(table.find("RF"), table.find("SSA-RF"));
}

TEST(Compare, SingleEntryPassesThrough)
{
    std::vector<nlohmann::ordered_json> reports{fake_report("SSA-RF", 0.8, 0.7)};
    auto const c = compare(reports);
    ASSERT_EQ(c.entries.size(), 1U);
    EXPECT_EQ(c.entries[0], reports[0]);
    EXPECT_EQ(c.grid.train, (std::vector<double>{0.8}));
    EXPECT_THROW((void)compare(std::span<const nlohmann::ordered_json>{}), ConfigError);
}

TEST(Methods, Names)
{
    EXPECT_EQ(parse_method("ISSA-RF"), Method::IssaRf);
    EXPECT_EQ(parse_method("ssa-rf"), Method::SsaRf);
    EXPECT_EQ(to_string(Method::Rf), "RF");
    EXPECT_THROW((void)parse_method("xgboost"), ConfigError);
}

} // namespace
