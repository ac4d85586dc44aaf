#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graces {

// Bad arguments or violated preconditions. Maps to CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input file. Carries the 1-based row/column of the offending field
// (0 when not applicable). Maps to CLI exit code 2.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite loss during gradient descent. Maps to CLI exit code 3.
class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(std::size_t epoch);

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

// No unselected candidate remains.
class Exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace graces
