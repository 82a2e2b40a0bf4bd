#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "ssarf/benchfns.hpp"
#include "ssarf/dataset.hpp"
#include "ssarf/error.hpp"
#include "ssarf/forest.hpp"

namespace ssarf::cli {

namespace {

    namespace fs = std::filesystem;

    void write_text(const fs::path& path, const std::string& text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot write '" + path.string() + "'");
        }
        out << text;
        if (!out) {
            throw IoError("write failed for '" + path.string() + "'");
        }
    }

    void write_json(const fs::path& path, const nlohmann::ordered_json& j)
    {
        write_text(path, j.dump(2) + "\n");
    }

    auto read_json(const fs::path& path) -> nlohmann::ordered_json
    {
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot open '" + path.string() + "'");
        }
        try {
            return nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
        }
    }

    void ensure_directory(const fs::path& dir)
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
        }
    }

    auto load_input(const fs::path& path, std::ostream& err) -> Dataset
    {
        if (path.empty()) {
            throw ConfigError("no input CSV given (use --input or input_csv in the config)");
        }
        return load_csv(path, [&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
    }

    auto outlier_columns() -> std::vector<std::string>
    {
        return {"Age", "Duration", "MotionSickness"};
    }

    struct Cleaning {
        Dataset data;
        std::size_t duplicates_removed{};
        std::size_t outliers_removed{};
    };

    // Duplicates first, then the 3-sigma filter on the deduplicated rows.
    auto clean(const Dataset& raw) -> Cleaning
    {
        Cleaning c;
        auto deduped = deduplicate(raw);
        c.duplicates_removed = raw.size() - deduped.size();
        auto const columns = outlier_columns();
        c.data = remove_outliers_3sigma(deduped, columns);
        c.outliers_removed = deduped.size() - c.data.size();
        return c;
    }

    struct Context {
        std::ostream& out;
        std::ostream& err;
    };

    auto cmd_stats(Context& ctx, const fs::path& csv, const fs::path& output) -> int
    {
        auto const data = load_input(csv, ctx.err);
        auto const json = stats_to_json(describe(data));
        ensure_directory(output);
        write_json(output / "stats.json", json);
        ctx.out << json.dump(2) << '\n';
        return kOk;
    }

    auto cmd_preprocess(Context& ctx, const fs::path& csv, const fs::path& output) -> int
    {
        auto const raw = load_input(csv, ctx.err);
        auto const cleaned = clean(raw);
        ensure_directory(output);
        write_csv(output / "cleaned.csv", cleaned.data);
        nlohmann::ordered_json sidecar{
            {"rows_in", raw.size()},
            {"duplicates_removed", cleaned.duplicates_removed},
            {"outliers_removed", cleaned.outliers_removed},
            {"rows_out", cleaned.data.size()},
            {"outlier_columns", outlier_columns()},
        };
        write_json(output / "preprocess.json", sidecar);
        ctx.out << sidecar.dump(2) << '\n';
        return kOk;
    }

    auto cmd_tune(Context& ctx, const RunConfig& config) -> int
    {
        auto const raw = load_input(config.input_csv, ctx.err);
        auto const data = config.clean ? clean(raw).data : raw;
        auto const report = run_experiment(data, config.method, config.experiment);

        auto const slug = std::string(method_slug(config.method));
        ensure_directory(config.output_dir);
        auto const trace_name = "trace_" + slug + ".csv";
        {
            std::ostringstream trace;
            OptimizationTrace empty;
            write_trace_csv(trace, report.optimization ? report.optimization->trace : empty,
                            config.method == Method::IssaRf);
            write_text(config.output_dir / trace_name, trace.str());
        }
        write_json(config.output_dir / ("report_" + slug + ".json"), to_json(report, config.experiment, trace_name));
        write_json(config.output_dir / ("model_" + slug + ".json"), to_json(report.model));

        ctx.out << to_string(config.method) << ": train accuracy " << report.train.accuracy << ", test accuracy "
                << report.test.accuracy;
        if (report.optimization) {
            ctx.out << ", best CV fitness " << report.optimization->best_fitness << " after "
                    << report.optimization->trace.evaluations << " evaluations";
        }
        ctx.out << '\n';
        return kOk;
    }

    auto cmd_train(Context& ctx, const fs::path& csv, const fs::path& params_path, std::uint64_t seed,
                   std::size_t threads, const fs::path& output, const std::string& name) -> int
    {
        auto const data = encode(load_input(csv, ctx.err));
        auto const raw_params = read_json(params_path);
        auto params = params_from_json(raw_params);
        if (params.feature_mask.empty()) {
            auto const defaults = default_params(data.features.cols());
            params.feature_mask = defaults.feature_mask;
            if (!raw_params.contains("mtry")) {
                params.mtry = defaults.mtry;
            }
        }
        validate(params, data.features.cols());
        auto const forest = fit(data.features, data.labels, params, seed, threads);
        auto const eval = evaluate(forest, data.features, data.labels);
        ensure_directory(output);
        write_json(output / ("model_" + name + ".json"), to_json(forest));
        ctx.out << "trained " << forest.trees.size() << " trees, training accuracy " << eval.accuracy << '\n';
        return kOk;
    }

    auto cmd_evaluate(Context& ctx, const fs::path& model_path, const fs::path& csv, const fs::path& output) -> int
    {
        auto const forest = forest_from_json(read_json(model_path));
        auto const data = encode(load_input(csv, ctx.err));
        if (forest.n_features != data.features.cols()) {
            throw SchemaError("model expects " + std::to_string(forest.n_features) + " features, data has "
                              + std::to_string(data.features.cols()));
        }
        auto const eval = evaluate(forest, data.features, data.labels);
        nlohmann::ordered_json j{
            {"rows", data.size()},
            {"accuracy", eval.accuracy},
            {"confusion", to_json(eval.confusion)},
        };
        ensure_directory(output);
        write_json(output / "evaluation.json", j);
        ctx.out << j.dump(2) << '\n';
        return kOk;
    }

    struct BenchOptions {
        std::size_t seeds{20};
        std::size_t dimension{10};
        std::size_t budget{0};
        std::size_t population{30};
        std::size_t restarts{5};
        std::vector<std::string> objectives{"sphere", "rastrigin", "ackley", "rosenbrock"};
        std::size_t threads{1};
    };

    auto cmd_bench(Context& ctx, const BenchOptions& opts, const fs::path& output) -> int
    {
        SsaConfig ssa;
        ssa.population_size = opts.population;
        ssa.max_iterations = 200;
        validate(ssa);
        auto const budget = opts.budget > 0 ? opts.budget : planned_evaluations(ssa);
        IssaConfig issa;
        issa.base = ssa;
        issa.ils_restarts = opts.restarts;
        validate(issa);

        std::vector<bench::Objective> objectives;
        for (auto const& name : opts.objectives) {
            objectives.push_back(bench::make_objective(name, opts.dimension));
        }
        std::vector<std::uint64_t> seeds(opts.seeds);
        std::iota(seeds.begin(), seeds.end(), 0);
        std::vector<bench::SuiteOptimizer> optimizers{bench::ssa_optimizer(ssa, budget),
                                                      bench::issa_optimizer(issa, budget),
                                                      bench::random_search_optimizer(budget)};
        auto const result = bench::run_suite(optimizers, objectives, seeds, budget, opts.threads);

        ensure_directory(output);
        std::ostringstream csv;
        bench::write_results_csv(csv, result);
        write_text(output / "bench.csv", csv.str());
        bench::write_trace_files(output / "traces", result);

        ctx.out << "budget " << budget << " evaluations per run\n";
        ctx.out << "optimizer,objective,median,min,max\n";
        for (auto const& row : result.summary) {
            ctx.out << row.optimizer << ',' << row.objective << ',' << row.median << ',' << row.minimum << ','
                    << row.maximum << '\n';
        }
        return kOk;
    }

    auto cmd_report(Context& ctx, const std::vector<std::string>& inputs, const fs::path& output) -> int
    {
        std::vector<nlohmann::ordered_json> reports;
        for (auto const& path : inputs) {
            reports.push_back(read_json(path));
        }
        auto const comparison = compare(reports);
        auto const table = format_table(comparison.grid);
        ensure_directory(output);
        write_text(output / "comparison.txt", table);
        write_json(output / "comparison.json", to_json(comparison));
        ctx.out << table;
        return kOk;
    }

    auto cmd_synth(Context& ctx, std::size_t rows, double noise, std::uint64_t seed, const fs::path& output) -> int
    {
        ensure_directory(output);
        auto const path = output / "synthetic.csv";
        write_csv(path, make_synthetic_dataset(rows, noise, seed));
        ctx.out << "wrote " << rows << " rows to " << path.string() << '\n';
        return kOk;
    }

    auto dispatch(int argc, const char* const* argv, Context& ctx) -> int
    {
        CLI::App app{"Random forest tuning with sparrow search (SSA) and its ILS-improved variant (ISSA)"};
        app.require_subcommand(1);

        fs::path output{"."};
        std::string output_flag;

        auto* stats = app.add_subcommand("stats", "Descriptive statistics of a CSV (JSON)");
        std::string stats_csv;
        stats->add_option("csv", stats_csv, "Input CSV")->required();
        stats->add_option("--output", output_flag, "Output directory");

        auto* pre = app.add_subcommand("preprocess", "Remove duplicate rows, then 3-sigma outliers");
        std::string pre_csv;
        pre->add_option("csv", pre_csv, "Input CSV")->required();
        pre->add_option("--output", output_flag, "Output directory");

        auto* tune = app.add_subcommand("tune", "Run one method end to end (rf, ssa-rf, issa-rf)");
        std::string config_path;
        std::string input_flag;
        std::string method_flag;
        std::optional<std::uint64_t> seed_flag;
        std::optional<std::size_t> threads_flag;
        bool equal_budget_flag = false;
        tune->add_option("--config", config_path, "JSON run configuration");
        tune->add_option("--input", input_flag, "Input CSV (overrides input_csv)");
        tune->add_option("--method", method_flag, "rf, ssa-rf or issa-rf");
        tune->add_option("--seed", seed_flag, "Experiment seed");
        tune->add_option("--threads", threads_flag, "Maximum worker threads");
        tune->add_option("--output", output_flag, "Output directory");
        tune->add_flag("--equal-budget", equal_budget_flag, "Give SSA-RF the same evaluation budget as ISSA-RF");

        auto* train = app.add_subcommand("train", "Fit a forest from explicit hyperparameters");
        std::string train_csv;
        std::string params_path;
        std::string model_name{"train"};
        train->add_option("--input", train_csv, "Training CSV")->required();
        train->add_option("--params", params_path, "Hyperparameter JSON")->required();
        train->add_option("--seed", seed_flag, "Training seed");
        train->add_option("--threads", threads_flag, "Maximum worker threads");
        train->add_option("--output", output_flag, "Output directory");
        train->add_option("--name", model_name, "Model name (model_<name>.json)");

        auto* eval = app.add_subcommand("evaluate", "Score a serialized model against a CSV");
        std::string model_path;
        std::string eval_csv;
        eval->add_option("--model", model_path, "Model JSON")->required();
        eval->add_option("--input", eval_csv, "CSV to score")->required();
        eval->add_option("--output", output_flag, "Output directory");

        auto* bench = app.add_subcommand("bench", "Compare SSA, ISSA and random search on test functions");
        BenchOptions bench_opts;
        bench->add_option("--seeds", bench_opts.seeds, "Number of seeds");
        bench->add_option("--dimension", bench_opts.dimension, "Problem dimension");
        bench->add_option("--budget", bench_opts.budget, "Evaluations per run (default: SSA n=30, 200 iterations)");
        bench->add_option("--population", bench_opts.population, "Population size");
        bench->add_option("--restarts", bench_opts.restarts, "ISSA rounds");
        bench->add_option("--objectives", bench_opts.objectives, "Objectives to run")->delimiter(',');
        bench->add_option("--threads", threads_flag, "Maximum worker threads");
        bench->add_option("--output", output_flag, "Output directory");

        auto* rep = app.add_subcommand("report", "Merge method reports into the accuracy comparison");
        std::vector<std::string> report_inputs;
        rep->add_option("reports", report_inputs, "report_<method>.json files")->required();
        rep->add_option("--output", output_flag, "Output directory");

        auto* synth = app.add_subcommand("synth", "Write the synthetic XOR dataset used by the acceptance suite");
        std::size_t synth_rows = 2000;
        double synth_noise = 0.1;
        synth->add_option("--rows", synth_rows, "Row count");
        synth->add_option("--noise", synth_noise, "Label noise fraction");
        synth->add_option("--seed", seed_flag, "Generator seed");
        synth->add_option("--output", output_flag, "Output directory");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            ctx.out << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp& e) {
            ctx.out << app.help();
            return kOk;
        } catch (const CLI::ParseError& e) {
            ctx.err << "error: " << e.what() << '\n';
            return kSchemaError;
        }

        if (!output_flag.empty()) {
            output = output_flag;
        }

        if (stats->parsed()) {
            return cmd_stats(ctx, stats_csv, output);
        }
        if (pre->parsed()) {
            return cmd_preprocess(ctx, pre_csv, output);
        }
        if (tune->parsed()) {
            RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
            if (!input_flag.empty()) {
                config.input_csv = input_flag;
            }
            if (!method_flag.empty()) {
                config.method = parse_method(method_flag);
            }
            if (seed_flag) {
                config.experiment.seed = *seed_flag;
            }
            if (threads_flag) {
                config.experiment.threads = *threads_flag;
            }
            if (equal_budget_flag) {
                config.experiment.equal_budget = true;
            }
            if (!output_flag.empty()) {
                config.output_dir = output_flag;
            }
            return cmd_tune(ctx, config);
        }
        if (train->parsed()) {
            return cmd_train(ctx, train_csv, params_path, seed_flag.value_or(0), threads_flag.value_or(1), output,
                             model_name);
        }
        if (eval->parsed()) {
            return cmd_evaluate(ctx, model_path, eval_csv, output);
        }
        if (bench->parsed()) {
            bench_opts.threads = threads_flag.value_or(1);
            return cmd_bench(ctx, bench_opts, output);
        }
        if (rep->parsed()) {
            return cmd_report(ctx, report_inputs, output);
        }
        if (synth->parsed()) {
            return cmd_synth(ctx, synth_rows, synth_noise, seed_flag.value_or(0), output);
        }
        return kSchemaError;
    }

} // namespace

auto run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) -> int
{
    Context ctx{out, err};
    try {
        return dispatch(argc, argv, ctx);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const EvaluationError& e) {
        err << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kSchemaError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ssarf");
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace ssarf::cli
