#include "ssarf/issa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssarf/error.hpp"

namespace ssarf {

auto is_valid_chaos_seed(double seed) -> bool
{
    return seed > 0.0 && seed < 1.0 && seed != 0.25 && seed != 0.5 && seed != 0.75;
}

void validate(const IssaConfig& c)
{
    validate(c.base);
    if (!is_valid_chaos_seed(c.chaos_seed)) {
        throw ConfigError("chaos seed must lie in (0, 1) and avoid 0.25, 0.5, 0.75");
    }
    if (!(c.weight_min <= c.weight_max)) {
        throw ConfigError("weight_min must not exceed weight_max");
    }
    if (!(c.cauchy_scale >= 0.0)) {
        throw ConfigError("cauchy scale must be non-negative");
    }
    if (c.ils_restarts == 0) {
        throw ConfigError("at least one ILS round is required");
    }
    if (!(c.acceptance_temperature > 0.0)) {
        throw ConfigError("acceptance temperature must be positive");
    }
}

auto planned_evaluations(const IssaConfig& c) -> std::size_t
{
    auto const n = c.base.population_size;
    auto const per_step = n + c.base.scouts() + (c.elite_refresh ? 2 : 0);
    return c.ils_restarts * (n + c.base.max_iterations * per_step);
}

LogisticMap::LogisticMap(double seed)
    : state_(seed)
{
    if (!is_valid_chaos_seed(seed)) {
        throw ConfigError("degenerate logistic map seed");
    }
}

auto LogisticMap::next() -> double
{
    double const value = state_;
    state_ = 4.0 * state_ * (1.0 - state_);
    // Rounding can land the orbit on 0 or 1, which are absorbing.
    if (!(state_ > 0.0 && state_ < 1.0)) {
        state_ = 0.7548776662466927;
    }
    return value;
}

auto chaotic_positions(const SearchSpace& space, std::size_t n, LogisticMap& orbit) -> std::vector<std::vector<double>>
{
    std::vector<std::vector<double>> positions(n, std::vector<double>(space.dimension()));
    for (auto& x : positions) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = space.lower()[j] + orbit.next() * space.width(j);
        }
        space.clamp(x);
    }
    return positions;
}

auto chaotic_init(const SearchSpace& space, std::size_t n, double chaos_seed) -> std::vector<std::vector<double>>
{
    if (n < 4) {
        throw ConfigError("population size must be at least 4");
    }
    LogisticMap orbit(chaos_seed);
    return chaotic_positions(space, n, orbit);
}

auto adaptive_weight(std::size_t t, std::size_t horizon, double w_min, double w_max) -> double
{
    if (horizon == 0) {
        return w_max;
    }
    auto const ratio = static_cast<double>(std::min(t, horizon)) / static_cast<double>(horizon);
    return w_max - (w_max - w_min) * ratio;
}

auto opposition(std::span<const double> x, const SearchSpace& space) -> std::vector<double>
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = space.lower()[i] + space.upper()[i] - x[i];
    }
    return out;
}

auto cauchy_mutate(std::span<const double> x, double scale, Rng& rng, const SearchSpace& space) -> std::vector<double>
{
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double const u = uniform01(rng);
        double const c = std::tan(std::numbers::pi * (u - 0.5));
        if (scale != 0.0) {
            out[i] += scale * space.width(i) * c;
        }
    }
    space.clamp(out);
    return out;
}

auto elite_refresh(const Sparrow& elite, const SearchSpace& space, Rng& rng, const IssaConfig& config,
                   FitnessEvaluator& eval) -> Sparrow
{
    std::array<Sparrow, 2> candidates{
        Sparrow{opposition(elite.position, space), 0.0},
        Sparrow{cauchy_mutate(elite.position, config.cauchy_scale, rng, space), 0.0},
    };
    space.clamp(candidates[0].position);
    eval.evaluate(candidates);
    Sparrow best = elite;
    for (auto& c : candidates) {
        if (c.fitness < best.fitness) {
            best = std::move(c);
        }
    }
    return best;
}

auto acceptance_probability(double delta, double temperature) -> double
{
    if (delta <= 0.0) {
        return 1.0;
    }
    return std::exp(-delta / temperature);
}

void run_improved_ssa(Population& pop, const SearchSpace& space, const IssaConfig& config, FitnessEvaluator& eval,
                      Rng& rng, OptimizationTrace& trace, std::size_t round, Sparrow& overall)
{
    auto const horizon = config.base.max_iterations;
    for (std::size_t t = 0; t < horizon; ++t) {
        double const w = adaptive_weight(t, horizon, config.weight_min, config.weight_max);
        ssa_step(pop, space, config.base, eval, t, rng, w);
        if (config.elite_refresh) {
            auto refreshed = elite_refresh(pop.members.front(), space, rng, config, eval);
            if (refreshed.fitness < pop.members.front().fitness) {
                pop.members.front() = refreshed;
                if (refreshed.fitness < pop.best.fitness) {
                    pop.best = std::move(refreshed);
                }
            }
        }
        if (pop.best.fitness < overall.fitness || overall.position.empty()) {
            overall = pop.best;
        }
        trace.best_so_far.push_back(overall.fitness);
        trace.round.push_back(round);
    }
}

auto ils_optimize(const FitnessFn& fitness, const SearchSpace& space, const IssaConfig& config) -> OptimizationResult
{
    validate(config);
    auto const n = config.base.population_size;
    Rng rng(config.base.seed);
    FitnessEvaluator eval(fitness, config.base.threads);
    LogisticMap orbit(config.chaos_seed);

    auto fresh_positions = [&](std::size_t count) {
        if (config.chaotic_init) {
            return chaotic_positions(space, count, orbit);
        }
        std::vector<std::vector<double>> positions(count, std::vector<double>(space.dimension()));
        for (auto& x : positions) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = space.lower()[j] + uniform01(rng) * space.width(j);
            }
            space.clamp(x);
        }
        return positions;
    };

    OptimizationResult result;
    auto& trace = result.trace;
    Sparrow overall;

    auto pop = make_population(fresh_positions(n), eval);
    overall = pop.best;
    trace.best_so_far.push_back(overall.fitness);
    trace.round.push_back(0);
    run_improved_ssa(pop, space, config, eval, rng, trace, 0, overall);
    Sparrow incumbent = pop.best;

    for (std::size_t round = 1; round < config.ils_restarts; ++round) {
        auto positions = fresh_positions(n - 1);
        positions.insert(positions.begin(), cauchy_mutate(incumbent.position, config.cauchy_scale, rng, space));
        pop = make_population(std::move(positions), eval);
        if (pop.best.fitness < overall.fitness) {
            overall = pop.best;
        }
        trace.best_so_far.push_back(overall.fitness);
        trace.round.push_back(round);
        run_improved_ssa(pop, space, config, eval, rng, trace, round, overall);

        double const delta = pop.best.fitness - incumbent.fitness;
        if (delta < 0.0 || uniform01(rng) < acceptance_probability(delta, config.acceptance_temperature)) {
            incumbent = pop.best;
        }
    }

    result.best_position = overall.position;
    result.best_fitness = overall.fitness;
    trace.best_position = overall.position;
    trace.evaluations = eval.count();
    return result;
}

} // namespace ssarf
