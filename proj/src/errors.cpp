#include "graces/errors.hpp"

namespace graces {

namespace {

std::string located(const std::string& what, std::size_t row, std::size_t column) {
    if (row == 0) return what;
    std::string out = what + " (row " + std::to_string(row);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ")";
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(located(what, row, column)), row_(row), column_(column) {}

TrainingDiverged::TrainingDiverged(std::size_t epoch)
    : std::runtime_error("training diverged: non-finite loss at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

}  // namespace graces
