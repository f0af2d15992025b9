#pragma once

#include <stdexcept>
#include <string>

namespace ftw {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Wavelet index (n, m) or flat index out of range.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Factorization hit a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double pivot)
        : std::runtime_error(what), pivot_(pivot) {}

    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

/// Inconsistent solver configuration (e.g. basis order differs from dynamics order).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A problem definition violates the standing assumptions (q > 0, b != 0, ...).
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed expression or problem file. Line and column are 1-based; 0 means unknown.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, int line, int column)
        : std::invalid_argument(what), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Expression evaluation left the real domain (division by zero, pole, NaN).
class EvaluationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace ftw
