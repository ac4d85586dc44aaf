#pragma once

#include <span>
#include <vector>

#include "graces/numerics.hpp"

namespace graces {

// F-statistic reported for a feature whose classes are perfectly separated
// with zero within-class spread.
inline constexpr double kInfiniteF = 1e12;

// One-way ANOVA F-statistic of every column of `x` against binary labels.
// Constant columns score 0.
std::vector<double> anova_f_scores(const DenseMatrix& x, std::span<const int> y);

// Min-max scaling to [0, 1]; a constant vector maps to all zeros.
std::vector<double> normalize_scores(std::span<const double> raw);

// alpha * g + (1 - alpha) * f, elementwise.
std::vector<double> blend_scores(std::span<const double> g, std::span<const double> f, double alpha);

// Feature indices sorted by descending score, ties by ascending index.
std::vector<std::size_t> rank_descending(std::span<const double> scores);

}  // namespace graces
