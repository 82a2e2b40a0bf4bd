#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>
#include <vector>

#include "ssarf/benchfns.hpp"
#include "ssarf/error.hpp"
#include "temp_dir.hpp"
#include "trace_checks.hpp"

namespace {

using namespace ssarf;
using namespace ssarf::bench;
using ssarf::testing::is_monotone;

TEST(Objectives, KnownMinima)
{
    for (auto const& name : {"sphere", "rastrigin", "ackley", "rosenbrock"}) {
        for (std::size_t d : {1U, 2U, 3U, 10U}) {
            if (std::string(name) == "rosenbrock" && d < 2) {
                continue;
            }
            auto const obj = make_objective(name, d);
            EXPECT_NEAR(obj(obj.known_argmin), obj.known_minimum, 1e-12) << name << " d=" << d;
            EXPECT_TRUE(obj.bounds.contains(obj.known_argmin));
        }
    }
    EXPECT_EQ(sphere(std::vector<double>(4, 0.0)), 0.0);
    EXPECT_EQ(rastrigin(std::vector<double>(4, 0.0)), 0.0);
    EXPECT_EQ(rosenbrock(std::vector<double>{1, 1, 1}), 0.0);
}

TEST(Objectives, ClosedFormValues)
{
    EXPECT_DOUBLE_EQ(sphere(std::vector<double>{1, 2, 3}), 14.0);
    // cos(2 pi k) = 1 at integers, so rastrigin(1, 2) = 1 + 4.
    EXPECT_NEAR(rastrigin(std::vector<double>{1, 2}), 5.0, 1e-12);
    EXPECT_DOUBLE_EQ(rosenbrock(std::vector<double>{0, 0}), 1.0);
}

TEST(Objectives, DimensionMismatchThrows)
{
    auto const obj = make_sphere(3);
    EXPECT_THROW((void)obj(std::vector<double>{1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW((void)make_objective("griewank", 3), ConfigError);
}

TEST(RandomSearch, SpendsBudgetAndStaysMonotone)
{
    auto const obj = make_rastrigin(3);
    auto const r = random_search(obj.function, obj.bounds, 250, 4);
    EXPECT_EQ(r.trace.evaluations, 250U);
    EXPECT_TRUE(is_monotone(r.trace));
    EXPECT_TRUE(obj.bounds.contains(r.best_position));
}

TEST(Suite, SingleCellSingleRow)
{
    std::vector<SuiteOptimizer> opts{random_search_optimizer(100)};
    std::vector<Objective> objs{make_sphere(2)};
    std::vector<std::uint64_t> seeds{1};
    auto const result = run_suite(opts, objs, seeds, 100);
    ASSERT_EQ(result.runs.size(), 1U);
    ASSERT_EQ(result.summary.size(), 1U);
    EXPECT_EQ(result.summary[0].median, result.runs[0].final_best);
    std::ostringstream csv;
    write_results_csv(csv, result);
    auto const text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Suite, BudgetMismatchIsConfigError)
{
    SsaConfig ssa;
    std::vector<SuiteOptimizer> opts{ssa_optimizer(ssa, 3000), random_search_optimizer(2000)};
    std::vector<Objective> objs{make_sphere(2)};
    std::vector<std::uint64_t> seeds{1};
    EXPECT_THROW((void)run_suite(opts, objs, seeds, 3000), ConfigError);
}

TEST(Suite, OptimizersHitTheBudget)
{
    for (std::size_t budget : {6630U, 12345U, 20000U}) {
        SsaConfig ssa;
        IssaConfig issa;
        auto const a = ssa_optimizer(ssa, budget);
        auto const b = issa_optimizer(issa, budget);
        EXPECT_LE(std::abs(static_cast<double>(a.planned_evaluations) - budget), kBudgetTolerance * budget);
        EXPECT_LE(std::abs(static_cast<double>(b.planned_evaluations) - budget), kBudgetTolerance * budget);
    }
}

TEST(Suite, SsaAndIssaBeatRandomSearchOnSphere)
{
    std::size_t const budget = 30 + 200 * 33;
    SsaConfig ssa;
    IssaConfig issa;
    std::vector<SuiteOptimizer> opts{ssa_optimizer(ssa, budget), issa_optimizer(issa, budget),
                                     random_search_optimizer(budget)};
    std::vector<Objective> objs{make_sphere(10)};
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 20; ++s) {
        seeds.push_back(s);
    }
    auto const result = run_suite(opts, objs, seeds, budget);
    for (auto const& run : result.runs) {
        EXPECT_TRUE(is_monotone(run.trace));
    }
    auto const random = result.find("random", "sphere").median;
    EXPECT_TRUE(std::isfinite(result.find("ssa", "sphere").median));
    EXPECT_TRUE(std::isfinite(result.find("issa", "sphere").median));
    EXPECT_LE(result.find("ssa", "sphere").median, random);
    EXPECT_LE(result.find("issa", "sphere").median, random);
}

TEST(Suite, WritesOneTraceFilePerRun)
{
    ssarf::testing::TempDir dir;
    std::vector<SuiteOptimizer> opts{random_search_optimizer(50)};
    std::vector<Objective> objs{make_sphere(2), make_ackley(2)};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    auto const result = run_suite(opts, objs, seeds, 50, 2);
    write_trace_files(dir.path() / "traces", result);
    std::size_t files = 0;
    for ([[maybe_unused]] auto const& e : std::filesystem::directory_iterator(dir.path() / "traces")) {
        ++files;
    }
    EXPECT_EQ(files, 6U);
    auto const text = ssarf::testing::read_file(dir.path() / "traces" / "random_sphere_2.csv");
    EXPECT_EQ(text.rfind("iteration,best_fitness\n", 0), 0U);
}

} // namespace
