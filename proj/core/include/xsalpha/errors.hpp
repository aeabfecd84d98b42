#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace xsalpha {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DateError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    InsufficientDataError(const std::string& what, std::size_t found)
        : Error(what + " (found " + std::to_string(found) + ")"), found_(found) {}
    std::size_t found() const noexcept { return found_; }

private:
    std::size_t found_;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Solver ran out of its iteration or time budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::string status, std::vector<double> best_iterate)
        : Error(what + " [" + status + "]"),
          status_(std::move(status)),
          best_iterate_(std::move(best_iterate)) {}
    const std::string& status() const noexcept { return status_; }
    const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }

private:
    std::string status_;
    std::vector<double> best_iterate_;
};

/// Ratio with zero denominator and nonzero numerator.
class DegenerateRatioError : public Error {
public:
    using Error::Error;
};

class DegenerateTestError : public Error {
public:
    using Error::Error;
};

}  // namespace xsalpha
