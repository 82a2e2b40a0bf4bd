#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssarf/sparrow.hpp"

namespace ssarf {

struct IssaConfig {
    SsaConfig base;
    // Logistic map starting value; must avoid the map's degenerate orbits.
    double chaos_seed{0.3};
    double weight_max{0.9};
    double weight_min{0.4};
    // Cauchy step as a fraction of each dimension's width.
    double cauchy_scale{0.1};
    std::size_t ils_restarts{5};
    double acceptance_temperature{0.01};

    // Test hooks. Turning all improvements off (uniform init, no elite refresh,
    // weights pinned at 1, one round) reproduces plain SSA exactly.
    bool chaotic_init{true};
    bool elite_refresh{true};
};

// Throws ConfigError.
void validate(const IssaConfig& c);

// Fitness evaluations of a complete run; used to give SSA an equal budget.
[[nodiscard]] auto planned_evaluations(const IssaConfig& c) -> std::size_t;

// Logistic map x <- 4 x (1 - x). The first value returned is the seed itself.
class LogisticMap {
public:
    // Throws ConfigError for 0, 0.25, 0.5, 0.75, 1 and values outside (0, 1).
    explicit LogisticMap(double seed);

    auto next() -> double;

private:
    double state_;
};

[[nodiscard]] auto is_valid_chaos_seed(double seed) -> bool;

// n positions from one logistic orbit, consumed row-major and mapped affinely
// onto the box.
[[nodiscard]] auto chaotic_init(const SearchSpace& space, std::size_t n, double chaos_seed)
    -> std::vector<std::vector<double>>;
[[nodiscard]] auto chaotic_positions(const SearchSpace& space, std::size_t n, LogisticMap& orbit)
    -> std::vector<std::vector<double>>;

// Linear decay from w_max at t = 0 to w_min at t = T.
[[nodiscard]] auto adaptive_weight(std::size_t t, std::size_t horizon, double w_min, double w_max) -> double;

// Mirror through the box centre: lower + upper - x.
[[nodiscard]] auto opposition(std::span<const double> x, const SearchSpace& space) -> std::vector<double>;

// x + scale * width * C per component, C standard Cauchy; clamped to the box.
[[nodiscard]] auto cauchy_mutate(std::span<const double> x, double scale, Rng& rng, const SearchSpace& space)
    -> std::vector<double>;

// Evaluates the opposite and a Cauchy mutant of `elite` and returns the best
// of the three. Ties keep the original.
[[nodiscard]] auto elite_refresh(const Sparrow& elite, const SearchSpace& space, Rng& rng, const IssaConfig& config,
                                 FitnessEvaluator& eval) -> Sparrow;

// Probability of accepting a worse round result, exp(-delta / temperature).
[[nodiscard]] auto acceptance_probability(double delta, double temperature) -> double;

// One round of the improved SSA on an evaluated population: adaptive producer
// weights plus an elite refresh after every step. `overall` carries the best
// point across rounds and feeds the trace.
void run_improved_ssa(Population& pop, const SearchSpace& space, const IssaConfig& config, FitnessEvaluator& eval,
                      Rng& rng, OptimizationTrace& trace, std::size_t round, Sparrow& overall);

// Iterated local search around the improved SSA. The returned best is the best
// point ever evaluated regardless of acceptance decisions.
[[nodiscard]] auto ils_optimize(const FitnessFn& fitness, const SearchSpace& space, const IssaConfig& config)
    -> OptimizationResult;

} // namespace ssarf
