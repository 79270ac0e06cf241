#pragma once

#include <stdexcept>
#include <string>

namespace greenprior {

/// Base of every error raised by the library. The category decides the
/// process exit code of the command-line tool.
class Error : public std::runtime_error {
public:
    enum class Category { validation = 1, io = 2, computation = 3 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what)
        : Error(Category::validation, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(Category::io, what) {}
};

class ComputationError : public Error {
public:
    explicit ComputationError(const std::string& what)
        : Error(Category::computation, what) {}
};

/// Malformed record in a text input; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateIdError : public ValidationError {
public:
    explicit DuplicateIdError(const std::string& id)
        : ValidationError("duplicate building id '" + id + "'"), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class NoRoadsError : public ComputationError {
public:
    NoRoadsError() : ComputationError("no roads match the requested class") {}
};

class NoBuildingPointsError : public ComputationError {
public:
    NoBuildingPointsError() : ComputationError("point cloud contains no building points") {}
};

class SingularSystemError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class ZeroPopulationError : public ComputationError {
public:
    ZeroPopulationError() : ComputationError("total population is zero") {}
};

/// A pipeline stage was run before the stage that produces its inputs.
class MissingArtifactError : public IoError {
public:
    MissingArtifactError(const std::string& path, const std::string& producer)
        : IoError("missing artifact '" + path + "'; run 'greenprior " + producer +
                  "' first") {}
};

} // namespace greenprior
