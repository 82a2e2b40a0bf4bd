#include "ssarf/benchfns.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/parallel.hpp"
#include "ssarf/stats.hpp"

namespace ssarf::bench {

auto sphere(std::span<const double> x) -> double
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

auto rastrigin(std::span<const double> x) -> double
{
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    }
    return s;
}

auto ackley(std::span<const double> x) -> double
{
    constexpr double a = 20.0;
    constexpr double b = 0.2;
    constexpr double c = 2.0 * std::numbers::pi;
    auto const d = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(c * v);
    }
    return -a * std::exp(-b * std::sqrt(sq / d)) - std::exp(cs / d) + a + std::numbers::e;
}

auto rosenbrock(std::span<const double> x) -> double
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double const t = x[i + 1] - x[i] * x[i];
        s += 100.0 * t * t + (1.0 - x[i]) * (1.0 - x[i]);
    }
    return s;
}

auto Objective::operator()(std::span<const double> x) const -> double
{
    if (x.size() != dimension) {
        throw std::invalid_argument(name + " expects dimension " + std::to_string(dimension) + ", got "
                                    + std::to_string(x.size()));
    }
    return function(x);
}

auto make_sphere(std::size_t dimension) -> Objective
{
    return {"sphere", dimension, SearchSpace::cube(dimension, -5.12, 5.12), sphere, 0.0,
            std::vector<double>(dimension, 0.0)};
}

auto make_rastrigin(std::size_t dimension) -> Objective
{
    return {"rastrigin", dimension, SearchSpace::cube(dimension, -5.12, 5.12), rastrigin, 0.0,
            std::vector<double>(dimension, 0.0)};
}

auto make_ackley(std::size_t dimension) -> Objective
{
    return {"ackley", dimension, SearchSpace::cube(dimension, -32.768, 32.768), ackley, 0.0,
            std::vector<double>(dimension, 0.0)};
}

auto make_rosenbrock(std::size_t dimension) -> Objective
{
    return {"rosenbrock", dimension, SearchSpace::cube(dimension, -5.0, 10.0), rosenbrock, 0.0,
            std::vector<double>(dimension, 1.0)};
}

auto make_objective(const std::string& name, std::size_t dimension) -> Objective
{
    if (name == "sphere") {
        return make_sphere(dimension);
    }
    if (name == "rastrigin") {
        return make_rastrigin(dimension);
    }
    if (name == "ackley") {
        return make_ackley(dimension);
    }
    if (name == "rosenbrock") {
        return make_rosenbrock(dimension);
    }
    throw ConfigError("unknown objective '" + name + "'");
}

auto random_search(const FitnessFn& fitness, const SearchSpace& space, std::size_t budget, std::uint64_t seed)
    -> OptimizationResult
{
    Rng rng(seed);
    FitnessEvaluator eval(fitness);
    OptimizationResult result;
    Sparrow s;
    s.position.resize(space.dimension());
    for (std::size_t k = 0; k < budget; ++k) {
        for (std::size_t j = 0; j < s.position.size(); ++j) {
            s.position[j] = space.lower()[j] + uniform01(rng) * space.width(j);
        }
        space.clamp(s.position);
        eval.evaluate(s);
        if (s.fitness < result.best_fitness || result.best_position.empty()) {
            result.best_fitness = s.fitness;
            result.best_position = s.position;
        }
        result.trace.best_so_far.push_back(result.best_fitness);
        result.trace.round.push_back(0);
    }
    result.trace.best_position = result.best_position;
    result.trace.evaluations = eval.count();
    return result;
}

auto ssa_optimizer(SsaConfig config, std::size_t budget) -> SuiteOptimizer
{
    config.max_iterations = iterations_for_budget(config, budget);
    return {"ssa", planned_evaluations(config), [config](const Objective& obj, std::uint64_t seed) {
                auto c = config;
                c.seed = seed;
                return optimize([&obj](std::span<const double> x) { return obj(x); }, obj.bounds, c);
            }};
}

auto issa_optimizer(IssaConfig config, std::size_t budget) -> SuiteOptimizer
{
    auto const n = config.base.population_size;
    auto const per_step = n + config.base.scouts() + (config.elite_refresh ? 2 : 0);
    auto const per_round = static_cast<double>(budget) / static_cast<double>(config.ils_restarts);
    auto const steps = per_round > static_cast<double>(n)
                           ? std::llround((per_round - static_cast<double>(n)) / static_cast<double>(per_step))
                           : 0LL;
    config.base.max_iterations = static_cast<std::size_t>(steps);
    return {"issa", planned_evaluations(config), [config](const Objective& obj, std::uint64_t seed) {
                auto c = config;
                c.base.seed = seed;
                return ils_optimize([&obj](std::span<const double> x) { return obj(x); }, obj.bounds, c);
            }};
}

auto random_search_optimizer(std::size_t budget) -> SuiteOptimizer
{
    return {"random", budget, [budget](const Objective& obj, std::uint64_t seed) {
                return random_search([&obj](std::span<const double> x) { return obj(x); }, obj.bounds, budget, seed);
            }};
}

auto SuiteResult::find(const std::string& optimizer, const std::string& objective) const -> const SummaryRow&
{
    for (auto const& row : summary) {
        if (row.optimizer == optimizer && row.objective == objective) {
            return row;
        }
    }
    throw std::out_of_range("no summary for " + optimizer + " on " + objective);
}

auto run_suite(std::span<const SuiteOptimizer> optimizers, std::span<const Objective> objectives,
               std::span<const std::uint64_t> seeds, std::size_t budget, std::size_t threads) -> SuiteResult
{
    for (auto const& opt : optimizers) {
        auto const diff = std::abs(static_cast<double>(opt.planned_evaluations) - static_cast<double>(budget));
        if (diff > kBudgetTolerance * static_cast<double>(budget)) {
            throw ConfigError("optimizer '" + opt.name + "' plans " + std::to_string(opt.planned_evaluations)
                              + " evaluations, budget is " + std::to_string(budget));
        }
    }

    SuiteResult result;
    auto const cells = optimizers.size() * objectives.size() * seeds.size();
    result.runs.resize(cells);
    parallel_for(cells, threads, [&](std::size_t cell) {
        auto const s = cell % seeds.size();
        auto const o = (cell / seeds.size()) % objectives.size();
        auto const k = cell / (seeds.size() * objectives.size());
        auto const& objective = objectives[o];
        auto r = optimizers[k].run(objective, seeds[s]);
        result.runs[cell] = RunRecord{optimizers[k].name, objective.name, objective.dimension, seeds[s],
                                      r.best_fitness,     r.trace.evaluations, std::move(r.trace)};
    });

    for (auto const& opt : optimizers) {
        for (auto const& objective : objectives) {
            std::vector<double> finals;
            for (auto const& run : result.runs) {
                if (run.optimizer == opt.name && run.objective == objective.name) {
                    finals.push_back(run.final_best);
                }
            }
            if (finals.empty()) {
                continue;
            }
            auto const stats = summarize(finals);
            result.summary.push_back({opt.name, objective.name, stats.median, stats.minimum, stats.maximum});
        }
    }
    return result;
}

namespace {
    auto shortest(double v) -> std::string
    {
        std::array<char, 64> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return {buf.data(), ptr};
    }
} // namespace

void write_results_csv(std::ostream& out, const SuiteResult& result)
{
    out << "optimizer,objective,dimension,seed,final_best,evaluations\n";
    for (auto const& r : result.runs) {
        out << r.optimizer << ',' << r.objective << ',' << r.dimension << ',' << r.seed << ','
            << shortest(r.final_best) << ',' << r.evaluations << '\n';
    }
}

void write_trace_files(const std::filesystem::path& directory, const SuiteResult& result)
{
    std::filesystem::create_directories(directory);
    for (auto const& r : result.runs) {
        auto const path = directory / (r.optimizer + "_" + r.objective + "_" + std::to_string(r.seed) + ".csv");
        std::ofstream out(path);
        if (!out) {
            throw IoError("cannot write '" + path.string() + "'");
        }
        write_trace_csv(out, r.trace, r.optimizer == "issa");
    }
}

} // namespace ssarf::bench
