#include "ssarf/sparrow.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/parallel.hpp"

namespace ssarf {

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower))
    , upper_(std::move(upper))
{
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw ConfigError("search space bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        // Widths below 1e-9 make every update collapse onto the bound.
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(upper_[i] - lower_[i] > 1e-9)) {
            throw ConfigError("search space dimension " + std::to_string(i) + " needs lower < upper");
        }
    }
}

auto SearchSpace::cube(std::size_t dimension, double lower, double upper) -> SearchSpace
{
    return {std::vector<double>(dimension, lower), std::vector<double>(dimension, upper)};
}

auto SearchSpace::contains(std::span<const double> x) const -> bool
{
    if (x.size() != dimension()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
            return false;
        }
    }
    return true;
}

void SearchSpace::clamp(std::span<double> x) const
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i])) {
            x[i] = 0.5 * (lower_[i] + upper_[i]);
        } else {
            x[i] = std::clamp(x[i], lower_[i], upper_[i]);
        }
    }
}

namespace {
    auto role_count(double fraction, std::size_t n) -> std::size_t
    {
        auto const k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
        return std::clamp<std::size_t>(k, 1, n);
    }
} // namespace

auto SsaConfig::producers() const -> std::size_t
{
    return role_count(producer_fraction, population_size);
}

auto SsaConfig::scouts() const -> std::size_t
{
    return role_count(scout_fraction, population_size);
}

void validate(const SsaConfig& c)
{
    if (c.population_size < 4) {
        throw ConfigError("population size must be at least 4");
    }
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(c.producer_fraction) || !in_unit(c.scout_fraction) || !in_unit(c.safety_threshold)) {
        throw ConfigError("producer fraction, scout fraction and safety threshold must lie in (0, 1)");
    }
}

auto planned_evaluations(const SsaConfig& c) -> std::size_t
{
    return c.population_size + c.max_iterations * (c.population_size + c.scouts());
}

auto iterations_for_budget(const SsaConfig& c, std::size_t budget) -> std::size_t
{
    if (budget <= c.population_size) {
        return 0;
    }
    auto const per_iteration = static_cast<double>(c.population_size + c.scouts());
    return static_cast<std::size_t>(std::llround(static_cast<double>(budget - c.population_size) / per_iteration));
}

FitnessEvaluator::FitnessEvaluator(FitnessFn fn, std::size_t threads)
    : fn_(std::move(fn))
    , threads_(std::max<std::size_t>(1, threads))
{
}

void FitnessEvaluator::evaluate(std::span<Sparrow> sparrows)
{
    auto const first = count_;
    count_ += sparrows.size();
    std::vector<std::exception_ptr> errors(sparrows.size());
    parallel_for(sparrows.size(), threads_, [&](std::size_t i) {
        try {
            double const v = fn_(sparrows[i].position);
            sparrows[i].fitness = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) {
            continue;
        }
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw EvaluationError(first + i, e.what());
        } catch (...) {
            throw EvaluationError(first + i, "unknown exception");
        }
    }
}

void FitnessEvaluator::evaluate(Sparrow& s)
{
    evaluate(std::span<Sparrow>(&s, 1));
}

namespace {

    void sort_members(Population& pop)
    {
        std::stable_sort(pop.members.begin(), pop.members.end(),
                         [](const Sparrow& a, const Sparrow& b) { return a.fitness < b.fitness; });
    }

    void remember_best(Population& pop, std::span<const Sparrow> candidates)
    {
        for (auto const& s : candidates) {
            if (s.fitness < pop.best.fitness || pop.best.position.empty()) {
                pop.best = s;
            }
        }
    }

    auto worst_index(const Population& pop) -> std::size_t
    {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < pop.members.size(); ++i) {
            if (pop.members[i].fitness > pop.members[worst].fitness) {
                worst = i;
            }
        }
        return worst;
    }

} // namespace

auto make_population(std::vector<std::vector<double>> positions, FitnessEvaluator& eval) -> Population
{
    Population pop;
    pop.members.reserve(positions.size());
    for (auto& p : positions) {
        pop.members.push_back(Sparrow{std::move(p), std::numeric_limits<double>::infinity()});
    }
    eval.evaluate(pop.members);
    sort_members(pop);
    remember_best(pop, pop.members);
    return pop;
}

auto init_population(const SearchSpace& space, std::size_t n, Rng& rng, FitnessEvaluator& eval) -> Population
{
    if (n < 4) {
        throw ConfigError("population size must be at least 4");
    }
    std::vector<std::vector<double>> positions(n, std::vector<double>(space.dimension()));
    for (auto& x : positions) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = space.lower()[j] + uniform01(rng) * space.width(j);
        }
        space.clamp(x);
    }
    return make_population(std::move(positions), eval);
}

void ssa_step(Population& pop, const SearchSpace& space, const SsaConfig& config, FitnessEvaluator& eval,
              std::size_t iteration, Rng& rng, double producer_weight)
{
    (void)iteration;
    auto& members = pop.members;
    auto const n = members.size();
    auto const dim = space.dimension();
    auto const n_producers = std::min(config.producers(), n);
    auto const n_scouts = std::min(config.scouts(), n);
    auto const horizon = static_cast<double>(std::max<std::size_t>(1, config.max_iterations));
    auto const w = producer_weight;

    // (a) producers: search widely while safe, random walk once alarmed.
    double const alarm = uniform01(rng);
    for (std::size_t i = 0; i < n_producers; ++i) {
        auto& x = members[i].position;
        if (alarm < config.safety_threshold) {
            double const alpha = 1.0 - uniform01(rng); // (0, 1]
            double const factor = std::exp(-static_cast<double>(i + 1) / (alpha * horizon));
            for (auto& xj : x) {
                xj += w * (xj * factor - xj);
            }
        } else {
            double const q = standard_normal(rng);
            for (auto& xj : x) {
                xj += w * q;
            }
        }
        space.clamp(x);
    }
    eval.evaluate(std::span<Sparrow>(members.data(), n_producers));

    // (b) scroungers: follow the best producer, or fly off if starving.
    std::size_t best_producer = 0;
    for (std::size_t i = 1; i < n_producers; ++i) {
        if (members[i].fitness < members[best_producer].fitness) {
            best_producer = i;
        }
    }
    auto const leader = members[best_producer].position;
    auto const worst = members[worst_index(pop)].position;
    for (std::size_t i = n_producers; i < n; ++i) {
        auto& x = members[i].position;
        auto const rank = static_cast<double>(i + 1);
        if (rank > static_cast<double>(n) / 2.0) {
            double const q = standard_normal(rng);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = q * std::exp((worst[j] - x[j]) / (rank * rank));
            }
        } else {
            // |x - leader| * A^+ with A a random +-1 row vector collapses to a
            // signed mean of the component distances.
            double step = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                double const sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
                step += std::abs(x[j] - leader[j]) * sign;
            }
            step /= static_cast<double>(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = leader[j] + step;
            }
        }
        space.clamp(x);
    }
    eval.evaluate(std::span<Sparrow>(members.data() + n_producers, n - n_producers));
    remember_best(pop, members);

    // (c) scouts: a random subset reacts to danger.
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < n_scouts; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, n - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    pool.resize(n_scouts);

    auto const w_idx = worst_index(pop);
    auto const worst_now = members[w_idx].position;
    double const worst_fitness = members[w_idx].fitness;
    auto const best = pop.best;
    std::vector<Sparrow> scouts;
    scouts.reserve(n_scouts);
    for (auto idx : pool) {
        Sparrow s = members[idx];
        auto& x = s.position;
        if (s.fitness > best.fitness) {
            for (std::size_t j = 0; j < dim; ++j) {
                double const beta = standard_normal(rng);
                x[j] = best.position[j] + beta * std::abs(x[j] - best.position[j]);
            }
        } else {
            double const k = 2.0 * uniform01(rng) - 1.0;
            double const denom = (s.fitness - worst_fitness) + 1e-50;
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] += k * (std::abs(x[j] - worst_now[j]) / denom);
            }
        }
        space.clamp(x);
        scouts.push_back(std::move(s));
    }
    eval.evaluate(scouts);
    for (std::size_t k = 0; k < n_scouts; ++k) {
        members[pool[k]] = std::move(scouts[k]);
    }

    remember_best(pop, members);
    sort_members(pop);
}

auto optimize(const FitnessFn& fitness, const SearchSpace& space, const SsaConfig& config) -> OptimizationResult
{
    validate(config);
    Rng rng(config.seed);
    FitnessEvaluator eval(fitness, config.threads);
    auto pop = init_population(space, config.population_size, rng, eval);

    OptimizationResult result;
    result.trace.best_so_far.push_back(pop.best.fitness);
    result.trace.round.push_back(0);
    for (std::size_t t = 0; t < config.max_iterations; ++t) {
        ssa_step(pop, space, config, eval, t, rng);
        result.trace.best_so_far.push_back(pop.best.fitness);
        result.trace.round.push_back(0);
    }
    result.best_position = pop.best.position;
    result.best_fitness = pop.best.fitness;
    result.trace.best_position = pop.best.position;
    result.trace.evaluations = eval.count();
    return result;
}

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace, bool with_round)
{
    out << "iteration,best_fitness" << (with_round ? ",round" : "") << '\n';
    std::array<char, 64> buf{};
    for (std::size_t i = 0; i < trace.best_so_far.size(); ++i) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), trace.best_so_far[i]);
        out << i << ',' << std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data()));
        if (with_round) {
            out << ',' << (i < trace.round.size() ? trace.round[i] : 0);
        }
        out << '\n';
    }
}

} // namespace ssarf
