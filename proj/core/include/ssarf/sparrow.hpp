#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "ssarf/random.hpp"

namespace ssarf {

// Axis-aligned box [lower, upper]. Construction enforces lower[i] < upper[i].
class SearchSpace {
public:
    SearchSpace(std::vector<double> lower, std::vector<double> upper);

    // The cube [lower, upper]^dimension.
    static auto cube(std::size_t dimension, double lower, double upper) -> SearchSpace;

    [[nodiscard]] auto dimension() const noexcept -> std::size_t { return lower_.size(); }
    [[nodiscard]] auto lower() const noexcept -> std::span<const double> { return lower_; }
    [[nodiscard]] auto upper() const noexcept -> std::span<const double> { return upper_; }
    [[nodiscard]] auto width(std::size_t i) const -> double { return upper_[i] - lower_[i]; }
    [[nodiscard]] auto contains(std::span<const double> x) const -> bool;

    // Clamps each component to its bound. NaN components go to the box centre.
    void clamp(std::span<double> x) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct Sparrow {
    std::vector<double> position;
    double fitness{std::numeric_limits<double>::infinity()};
};

// Members are kept sorted by fitness, best first. `best` is the best point
// ever evaluated while evolving this population (elitist memory).
struct Population {
    std::vector<Sparrow> members;
    Sparrow best;
};

struct SsaConfig {
    std::size_t population_size{30};
    std::size_t max_iterations{40};
    double producer_fraction{0.2};
    double scout_fraction{0.1};
    double safety_threshold{0.8};
    std::uint64_t seed{0};
    // Upper bound on concurrent fitness evaluations. Results do not depend on it.
    std::size_t threads{1};

    [[nodiscard]] auto producers() const -> std::size_t;
    [[nodiscard]] auto scouts() const -> std::size_t;
};

// Throws ConfigError.
void validate(const SsaConfig& c);

// Fitness evaluations of one init plus `max_iterations` steps.
[[nodiscard]] auto planned_evaluations(const SsaConfig& c) -> std::size_t;

// Largest iteration count whose planned evaluations stay closest to `budget`.
[[nodiscard]] auto iterations_for_budget(const SsaConfig& c, std::size_t budget) -> std::size_t;

struct OptimizationTrace {
    // Best fitness seen so far, one entry per iteration (entry 0 = after init).
    std::vector<double> best_so_far;
    // Restart round of each entry; all zero for a single run.
    std::vector<std::size_t> round;
    std::vector<double> best_position;
    std::size_t evaluations{0};
};

struct OptimizationResult {
    std::vector<double> best_position;
    double best_fitness{std::numeric_limits<double>::infinity()};
    OptimizationTrace trace;
};

using FitnessFn = std::function<double(std::span<const double>)>;

// Evaluates sparrows, possibly concurrently, and counts evaluations.
// Non-finite values become +infinity. A throwing fitness function is
// rethrown as EvaluationError carrying the evaluation's sequence number.
class FitnessEvaluator {
public:
    FitnessEvaluator(FitnessFn fn, std::size_t threads = 1);

    void evaluate(std::span<Sparrow> sparrows);
    void evaluate(Sparrow& s);

    [[nodiscard]] auto count() const noexcept -> std::size_t { return count_; }

private:
    FitnessFn fn_;
    std::size_t threads_;
    std::size_t count_{0};
};

// Evaluates, sorts and records the best of `positions`.
[[nodiscard]] auto make_population(std::vector<std::vector<double>> positions, FitnessEvaluator& eval) -> Population;

// Uniform random initial population.
[[nodiscard]] auto init_population(const SearchSpace& space, std::size_t n, Rng& rng, FitnessEvaluator& eval)
    -> Population;

// One producer / scrounger / scout iteration. `iteration` counts from 0.
// `producer_weight` scales every producer displacement (1 leaves the canonical
// update unchanged).
void ssa_step(Population& pop, const SearchSpace& space, const SsaConfig& config, FitnessEvaluator& eval,
              std::size_t iteration, Rng& rng, double producer_weight = 1.0);

// Canonical sparrow search, minimizing `fitness` over `space`.
[[nodiscard]] auto optimize(const FitnessFn& fitness, const SearchSpace& space, const SsaConfig& config)
    -> OptimizationResult;

// Columns: iteration,best_fitness (plus round when `with_round`).
void write_trace_csv(std::ostream& out, const OptimizationTrace& trace, bool with_round = false);

} // namespace ssarf
