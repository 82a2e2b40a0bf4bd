#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssarf {

// Base of every error the library throws on purpose. The CLI maps the
// concrete subclasses onto exit codes (I/O = 1, schema/config = 2, runtime = 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Input data does not match the expected table schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Input file has no header line at all.
class EmptyInputError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

// A single cell failed to parse or violated a record invariant.
class RowError : public SchemaError {
public:
    RowError(std::size_t row, std::string column, const std::string& what)
        : SchemaError("row " + std::to_string(row) + ", column '" + column + "': " + what)
        , row_(row)
        , column_(std::move(column))
    {
    }

    [[nodiscard]] auto row() const noexcept -> std::size_t { return row_; }
    [[nodiscard]] auto column() const noexcept -> const std::string& { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

// Invalid configuration or parameters (detected before any work starts).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A fitness evaluation or training step failed at run time.
class EvaluationError : public Error {
public:
    EvaluationError(std::size_t evaluation, const std::string& what)
        : Error("fitness evaluation #" + std::to_string(evaluation) + " failed: " + what)
        , evaluation_(evaluation)
    {
    }

    [[nodiscard]] auto evaluation() const noexcept -> std::size_t { return evaluation_; }

private:
    std::size_t evaluation_;
};

} // namespace ssarf
