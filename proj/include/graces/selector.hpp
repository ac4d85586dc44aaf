#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "graces/graph.hpp"
#include "graces/network.hpp"
#include "graces/numerics.hpp"

namespace graces {

struct GracesConfig {
    std::size_t k = 10;          // requested feature count
    double delta = 0.7;          // similarity threshold
    std::size_t h1 = 64;
    std::size_t h2 = 32;
    double learning_rate = 0.01;
    std::size_t dropout_count = 20;  // m
    double sigma2 = 0.01;            // GCN noise variance
    double alpha = 0.8;              // gradient weight in the F-correction blend
    std::size_t epochs = 100;
    double dropout_prob = 0.5;
    std::uint64_t seed = 0;
    bool standardize = false;
    bool rescale_dropout = false;
    bool warm_start = false;
    std::size_t threads = 1;

    // Checks everything that does not depend on the data.
    void validate() const;
    TrainConfig train_config() const;
    EnsembleConfig ensemble_config() const;
};

// Progress of one run. Indices here are in the augmented space: 0 is the
// bias column and original feature i is column i + 1.
struct SelectionState {
    std::vector<std::size_t> selected;  // starts with 0
    // Blended score of every original feature, one vector per iteration.
    std::vector<std::vector<double>> score_trace;
    std::vector<std::size_t> chosen;  // original-feature index picked per iteration
    std::vector<double> final_loss;   // training loss at the last epoch, per iteration
};

struct SelectionResult {
    std::vector<std::size_t> features;  // original indices in selection order
    SelectionState state;
};

// Everything one iteration worked with, handed to an observer before the
// next feature is added.
struct IterationView {
    std::size_t iteration;  // 0-based
    const DenseMatrix& features;  // augmented design matrix, n x (p+1)
    std::span<const int> labels;
    const SimilarityGraph& graph;
    const ModelParams& params;
    std::span<const std::size_t> selected;  // augmented indices
    std::span<const double> scores;         // blended, original features
};

using IterationObserver = std::function<void(const IterationView&)>;

// Prepends the all-one bias column (and standardizes the rest when asked).
DenseMatrix augment_with_bias(const DenseMatrix& x, bool standardize);

// Smallest index attaining the maximum of `scores` outside `excluded`.
std::size_t next_feature(std::span<const double> scores, std::span<const std::size_t> excluded);

// Greedy forward selection driven by graph-convolutional gradient scores
// blended with ANOVA F-statistics. `x` is n x p without a bias column.
SelectionResult select_features(const DenseMatrix& x, std::span<const int> y,
                                const GracesConfig& config,
                                const IterationObserver& observer = {});

}  // namespace graces
