#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ssarf/benchfns.hpp"
#include "ssarf/error.hpp"
#include "ssarf/sparrow.hpp"
#include "ssarf/stats.hpp"
#include "trace_checks.hpp"

namespace {

using namespace ssarf;
using ssarf::testing::BoundsProbe;
using ssarf::testing::is_monotone;

TEST(SearchSpace, RejectsEmptyWidth)
{
    EXPECT_THROW(SearchSpace({0.0, 1.0}, {1.0, 1.0}), ConfigError);
    EXPECT_THROW(SearchSpace({0.0}, {1.0, 2.0}), ConfigError);
}

TEST(SearchSpace, ClampHandlesNan)
{
    auto const space = SearchSpace::cube(3, -1.0, 3.0);
    std::vector<double> x{-5.0, std::numeric_limits<double>::quiet_NaN(), 9.0};
    space.clamp(x);
    EXPECT_EQ(x, (std::vector<double>{-1.0, 1.0, 3.0}));
}

TEST(InitPopulation, UnitSquare)
{
    auto const space = SearchSpace::cube(2, 0.0, 1.0);
    Rng rng(1);
    FitnessEvaluator eval(bench::sphere);
    auto const pop = init_population(space, 4, rng, eval);
    ASSERT_EQ(pop.members.size(), 4U);
    for (auto const& s : pop.members) {
        EXPECT_TRUE(space.contains(s.position));
    }
    EXPECT_EQ(eval.count(), 4U);
}

TEST(InitPopulation, SameSeedSamePopulation)
{
    auto const space = SearchSpace::cube(5, -2.0, 2.0);
    Rng a(8);
    Rng b(8);
    FitnessEvaluator ea(bench::sphere);
    FitnessEvaluator eb(bench::sphere);
    auto const pa = init_population(space, 10, a, ea);
    auto const pb = init_population(space, 10, b, eb);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(pa.members[i].position, pb.members[i].position);
    }
}

TEST(SsaStep, OptimumIsKept)
{
    auto const space = SearchSpace::cube(3, -5.0, 5.0);
    FitnessEvaluator eval(bench::sphere);
    std::vector<std::vector<double>> at_optimum(6, std::vector<double>(3, 0.0));
    auto pop = make_population(at_optimum, eval);
    SsaConfig config;
    config.population_size = 6;
    Rng rng(4);
    for (std::size_t t = 0; t < 5; ++t) {
        ssa_step(pop, space, config, eval, t, rng);
        EXPECT_EQ(pop.best.fitness, 0.0);
    }
}

TEST(SsaStep, NonFiniteFitnessBecomesWorst)
{
    auto const space = SearchSpace::cube(2, -1.0, 1.0);
    FitnessEvaluator eval([](std::span<const double> x) {
        return x[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : bench::sphere(x);
    });
    Rng rng(2);
    SsaConfig config;
    config.population_size = 12;
    auto pop = init_population(space, 12, rng, eval);
    for (std::size_t t = 0; t < 10; ++t) {
        ssa_step(pop, space, config, eval, t, rng);
        for (auto const& s : pop.members) {
            EXPECT_FALSE(std::isnan(s.fitness));
        }
        EXPECT_TRUE(std::isfinite(pop.best.fitness));
    }
}

TEST(SsaStepProperty, BestSoFarNeverIncreasesAndStaysInBounds)
{
    for (auto const& objective : {bench::make_sphere(4), bench::make_rastrigin(6), bench::make_ackley(3),
                                  bench::make_rosenbrock(5)}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            std::size_t violations = 0;
            FitnessEvaluator eval(BoundsProbe{&objective.bounds, objective.function, &violations});
            SsaConfig config;
            config.population_size = 15;
            Rng rng(seed);
            auto pop = init_population(objective.bounds, 15, rng, eval);
            double previous = pop.best.fitness;
            for (std::size_t t = 0; t < 30; ++t) {
                ssa_step(pop, objective.bounds, config, eval, t, rng);
                EXPECT_LE(pop.best.fitness, previous);
                previous = pop.best.fitness;
                for (auto const& s : pop.members) {
                    EXPECT_TRUE(objective.bounds.contains(s.position));
                }
            }
            EXPECT_EQ(violations, 0U);
        }
    }
}

TEST(Optimize, OneDimensionalSphereImprovesOrHolds)
{
    auto const space = SearchSpace::cube(1, -5.0, 5.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SsaConfig config;
        config.population_size = 8;
        config.max_iterations = 20;
        config.seed = seed;
        auto const r = optimize(bench::sphere, space, config);
        EXPECT_LE(r.best_fitness, r.trace.best_so_far.front());
        EXPECT_EQ(r.trace.best_so_far.size(), 21U);
        EXPECT_EQ(r.best_fitness, r.trace.best_so_far.back());
        EXPECT_EQ(bench::sphere(r.best_position), r.best_fitness);
        EXPECT_TRUE(is_monotone(r.trace));
        EXPECT_EQ(r.trace.evaluations, planned_evaluations(config));
    }
}

TEST(Optimize, ConstantFunctionGivesFlatTrace)
{
    auto const space = SearchSpace::cube(3, 0.0, 1.0);
    SsaConfig config;
    config.population_size = 10;
    config.max_iterations = 15;
    auto const r = optimize([](std::span<const double>) { return 7.0; }, space, config);
    EXPECT_EQ(r.best_fitness, 7.0);
    for (double v : r.trace.best_so_far) {
        EXPECT_EQ(v, 7.0);
    }
}

TEST(Optimize, RepeatableForFixedSeed)
{
    auto const objective = bench::make_rastrigin(5);
    SsaConfig config;
    config.seed = 31;
    auto const a = optimize(objective.function, objective.bounds, config);
    auto const b = optimize(objective.function, objective.bounds, config);
    EXPECT_EQ(a.trace.best_so_far, b.trace.best_so_far);
    EXPECT_EQ(a.best_position, b.best_position);
}

TEST(Optimize, ThreadCountDoesNotChangeTrace)
{
    auto const objective = bench::make_ackley(6);
    SsaConfig config;
    config.seed = 5;
    config.threads = 1;
    auto const a = optimize(objective.function, objective.bounds, config);
    config.threads = 4;
    auto const b = optimize(objective.function, objective.bounds, config);
    EXPECT_EQ(a.trace.best_so_far, b.trace.best_so_far);
    EXPECT_EQ(a.best_position, b.best_position);
}

TEST(Optimize, ThrowingFitnessIsWrapped)
{
    auto const space = SearchSpace::cube(2, 0.0, 1.0);
    int calls = 0;
    SsaConfig config;
    config.population_size = 5;
    try {
        (void)optimize(
            [&](std::span<const double>) -> double {
                if (++calls == 3) {
                    throw std::runtime_error("boom");
                }
                return 1.0;
            },
            space, config);
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.evaluation(), 2U);
        EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
    }
}

TEST(Optimize, SphereRegressionThreshold)
{
    auto const objective = bench::make_sphere(10);
    std::vector<double> finals;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SsaConfig config;
        config.population_size = 30;
        config.max_iterations = 200;
        config.seed = seed;
        auto const r = optimize(objective.function, objective.bounds, config);
        EXPECT_TRUE(is_monotone(r.trace));
        finals.push_back(r.best_fitness);
    }
    EXPECT_LT(median(finals), 1e-3);
}

TEST(Config, Validation)
{
    SsaConfig c;
    c.population_size = 1;
    EXPECT_THROW(validate(c), ConfigError);
    c = SsaConfig{};
    c.safety_threshold = 1.5;
    EXPECT_THROW(validate(c), ConfigError);
    c = SsaConfig{};
    c.producer_fraction = 0.0;
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_NO_THROW(validate(SsaConfig{}));
}

TEST(Config, BudgetArithmetic)
{
    SsaConfig c;
    c.population_size = 30;
    c.max_iterations = 40;
    EXPECT_EQ(c.producers(), 6U);
    EXPECT_EQ(c.scouts(), 3U);
    EXPECT_EQ(planned_evaluations(c), 30U + 40U * 33U);
    c.max_iterations = iterations_for_budget(c, 30 + 100 * 33);
    EXPECT_EQ(c.max_iterations, 100U);
}

TEST(TraceCsv, Layout)
{
    OptimizationTrace t;
    t.best_so_far = {3.0, 2.5};
    t.round = {0, 1};
    std::ostringstream plain;
    write_trace_csv(plain, t);
    EXPECT_EQ(plain.str(), "iteration,best_fitness\n0,3\n1,2.5\n");
    std::ostringstream rounds;
    write_trace_csv(rounds, t, true);
    EXPECT_EQ(rounds.str(), "iteration,best_fitness,round\n0,3,0\n1,2.5,1\n");
}

} // namespace
