#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssarf/issa.hpp"
#include "ssarf/sparrow.hpp"

namespace ssarf::bench {

[[nodiscard]] auto sphere(std::span<const double> x) -> double;
[[nodiscard]] auto rastrigin(std::span<const double> x) -> double;
[[nodiscard]] auto ackley(std::span<const double> x) -> double;
[[nodiscard]] auto rosenbrock(std::span<const double> x) -> double;

struct Objective {
    std::string name;
    std::size_t dimension;
    SearchSpace bounds;
    std::function<double(std::span<const double>)> function;
    double known_minimum;
    std::vector<double> known_argmin;

    // Throws std::invalid_argument on dimension mismatch.
    [[nodiscard]] auto operator()(std::span<const double> x) const -> double;
};

[[nodiscard]] auto make_sphere(std::size_t dimension) -> Objective;
[[nodiscard]] auto make_rastrigin(std::size_t dimension) -> Objective;
[[nodiscard]] auto make_ackley(std::size_t dimension) -> Objective;
[[nodiscard]] auto make_rosenbrock(std::size_t dimension) -> Objective;
// Looks up one of the four by name; throws ConfigError for unknown names.
[[nodiscard]] auto make_objective(const std::string& name, std::size_t dimension) -> Objective;

// Uniform sampling of `budget` points; the falsifiable baseline.
[[nodiscard]] auto random_search(const FitnessFn& fitness, const SearchSpace& space, std::size_t budget,
                                 std::uint64_t seed) -> OptimizationResult;

struct SuiteOptimizer {
    std::string name;
    // Evaluations one run will spend.
    std::size_t planned_evaluations;
    std::function<OptimizationResult(const Objective&, std::uint64_t seed)> run;
};

// Optimizers configured to spend (close to) `budget` evaluations.
[[nodiscard]] auto ssa_optimizer(SsaConfig config, std::size_t budget) -> SuiteOptimizer;
[[nodiscard]] auto issa_optimizer(IssaConfig config, std::size_t budget) -> SuiteOptimizer;
[[nodiscard]] auto random_search_optimizer(std::size_t budget) -> SuiteOptimizer;

struct RunRecord {
    std::string optimizer;
    std::string objective;
    std::size_t dimension{};
    std::uint64_t seed{};
    double final_best{};
    std::size_t evaluations{};
    OptimizationTrace trace;
};

struct SummaryRow {
    std::string optimizer;
    std::string objective;
    double median{};
    double minimum{};
    double maximum{};
};

struct SuiteResult {
    std::vector<RunRecord> runs;
    std::vector<SummaryRow> summary;

    [[nodiscard]] auto find(const std::string& optimizer, const std::string& objective) const -> const SummaryRow&;
};

// Relative difference allowed between an optimizer's plan and the budget.
inline constexpr double kBudgetTolerance = 0.01;

// Runs every (optimizer, objective, seed) cell. Throws ConfigError before any
// run when an optimizer's planned evaluations miss `budget` by more than
// kBudgetTolerance. Cells may run on up to `threads` threads.
[[nodiscard]] auto run_suite(std::span<const SuiteOptimizer> optimizers, std::span<const Objective> objectives,
                             std::span<const std::uint64_t> seeds, std::size_t budget, std::size_t threads = 1)
    -> SuiteResult;

// CSV columns: optimizer,objective,dimension,seed,final_best,evaluations
void write_results_csv(std::ostream& out, const SuiteResult& result);

// One trace CSV per run under `directory`.
void write_trace_files(const std::filesystem::path& directory, const SuiteResult& result);

} // namespace ssarf::bench
