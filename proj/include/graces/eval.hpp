#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graces/data.hpp"
#include "graces/numerics.hpp"
#include "graces/selector.hpp"

namespace graces {

struct SvmConfig {
    double c = 1.0;
    std::size_t epochs = 100;
    std::uint64_t seed = 0;
};

// Linear decision function over standardized inputs. Standardization
// statistics come from the training rows.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> center;
    std::vector<double> scale;

    double decision(std::span<const double> row) const;
    std::vector<double> decision(const DenseMatrix& x) const;
};

// L2-regularized hinge loss, lambda = 1 / (C n), minimized by seeded Pegasos
// subgradient steps with projection; returns the averaged second-half iterate.
// The intercept is an extra constant input and is regularized with the rest.
LinearModel train_linear_svm(const DenseMatrix& x, std::span<const int> y, const SvmConfig& config = {});

// Mann-Whitney AUROC; ties count one half.
double auroc(std::span<const double> scores, std::span<const int> labels);

// |selected ∩ truth| / |selected|
double correction_rate(std::span<const std::size_t> selected, std::span<const std::size_t> truth);

struct PairedTTest {
    std::size_t count = 0;
    double mean_difference = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;  // two-sided
};

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b);

// Test AUROC of an SVM trained on the first `k` ranked features.
double ranking_auroc(const Dataset& train, const Dataset& test, std::span<const std::size_t> ranking,
                     std::size_t k, const SvmConfig& svm);

// Candidate values per hyperparameter. An empty list keeps the base value.
struct GracesGrid {
    std::vector<double> delta;
    std::vector<std::size_t> h1;
    std::vector<std::size_t> h2;
    std::vector<double> learning_rate;
    std::vector<std::size_t> dropout_count;
    std::vector<double> sigma2;
    std::vector<double> alpha;
    std::vector<std::size_t> epochs;
    std::vector<double> dropout_prob;

    // Cartesian product in the field order above, last field varying fastest.
    std::vector<GracesConfig> expand(const GracesConfig& base) const;
};

struct GridCell {
    GracesConfig config;
    std::optional<double> auroc;
    std::string error;
};

struct GridSearchResult {
    GracesConfig best;
    double best_auroc = 0.0;
    std::vector<GridCell> cells;
};

// Selects k features on `train` for every configuration and scores validation
// AUROC. Failing cells are recorded; the first configuration with the highest
// AUROC wins. Throws InvalidArgument when the grid is empty or no cell succeeds.
GridSearchResult grid_search(const Dataset& train, const Dataset& val, const GracesGrid& grid,
                             const GracesConfig& base, std::size_t k, const SvmConfig& svm = {});
GridSearchResult grid_search(const Dataset& dataset, const SplitSpec& split_spec, const GracesGrid& grid,
                             const GracesConfig& base, std::size_t k, const SvmConfig& svm = {});

}  // namespace graces
