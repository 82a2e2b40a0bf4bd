#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssarf/tuner.hpp"

namespace ssarf::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kSchemaError = 2, kRuntimeError = 3 };

// Settings shared by the pipeline subcommands. Loaded from a JSON file, then
// overridden by command-line flags.
struct RunConfig {
    std::filesystem::path input_csv;
    std::filesystem::path output_dir{"."};
    Method method{Method::IssaRf};
    bool clean{true};
    ExperimentConfig experiment;
};

// Throws ConfigError on unknown keys or ill-typed values, IoError when the
// file cannot be read.
[[nodiscard]] auto load_run_config(const std::filesystem::path& path) -> RunConfig;
[[nodiscard]] auto parse_run_config(const nlohmann::json& j) -> RunConfig;

// Entry point behind the `ssarf` executable; returns the process exit code.
auto run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) -> int;
auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int;

} // namespace ssarf::cli
