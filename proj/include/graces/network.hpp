#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graces/graph.hpp"
#include "graces/numerics.hpp"
#include "graces/rng.hpp"

namespace graces {

using Labels = std::vector<int>;

// Three-layer network: masked linear input layer, one GraphSAGE mean
// aggregation layer, softmax output over two classes.
//
//   embed_j = ReLU(w_input · x_j)
//   gcn_j   = ReLU(w_self · embed_j + mean_{i ∈ N(j)} w_neighbor · embed_i)
//   prob_j  = softmax(w_output · gcn_j + b_output)
//
// Columns of w_input for unselected features are exactly zero.
struct ModelParams {
    DenseMatrix w_input;     // h1 x (p+1)
    DenseMatrix w_self;      // h2 x h1
    DenseMatrix w_neighbor;  // h2 x h1
    DenseMatrix w_output;    // 2 x h2
    std::array<double, 2> b_output{0.0, 0.0};

    std::size_t hidden1() const noexcept { return w_input.rows(); }
    std::size_t hidden2() const noexcept { return w_self.rows(); }
    std::size_t feature_count() const noexcept { return w_input.cols(); }

    // Indices of columns of w_input holding at least one nonzero entry.
    std::vector<std::size_t> active_columns() const;
    bool all_finite() const noexcept;

    bool operator==(const ModelParams&) const = default;
};

// Zero entries silence a hidden unit. `embedding` gates the inputs of the GCN
// layer (length h1), `gcn` gates the inputs of the output layer (length h2).
// Kept units are multiplied by keep_scale (1 unless inverted dropout is on).
struct DropoutMask {
    std::vector<std::uint8_t> embedding;
    std::vector<std::uint8_t> gcn;
    double keep_scale = 1.0;

    static DropoutMask keep_all(std::size_t h1, std::size_t h2);
};

// Additive perturbation of the GCN weights (both h2 x h1).
struct GcnNoise {
    DenseMatrix self;
    DenseMatrix neighbor;

    static GcnNoise zero(std::size_t h1, std::size_t h2);
};

struct TrainConfig {
    std::size_t hidden1 = 64;
    std::size_t hidden2 = 32;
    double learning_rate = 0.01;
    std::size_t epochs = 100;
    // Used only when estimating gradients after training.
    double dropout_prob = 0.5;
    bool rescale_dropout = false;

    void validate() const;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history;  // one entry per epoch, before the update
};

inline constexpr double kProbabilityClamp = 1e-12;

// Fresh parameters: uniform in ±1/sqrt(fan_in) for every weight matrix, only
// on `active` columns of w_input (fan_in = active.size()); b_output = 0.
ModelParams init_params(std::size_t feature_count, std::span<const std::size_t> active,
                        std::size_t h1, std::size_t h2, Rng& rng);

// Per-sample class probabilities, n x 2 (column 1 is P(label = 1)).
DenseMatrix forward(const ModelParams& params, const DenseMatrix& x, const SimilarityGraph& graph,
                    const DropoutMask* mask = nullptr, const GcnNoise* noise = nullptr);

// Mean binary cross-entropy with probabilities clamped to [1e-12, 1 - 1e-12].
double cross_entropy(std::span<const int> y, std::span<const double> prob_one);

// Full-batch gradient descent on cross-entropy without dropout or noise.
// `warm_start`, when given, replaces the random initialization of every
// column it already holds; newly active columns are drawn from `rng`.
TrainResult train(const DenseMatrix& x, std::span<const int> y, const SimilarityGraph& graph,
                  std::span<const std::size_t> selected, const TrainConfig& config, Rng& rng,
                  const ModelParams* warm_start = nullptr);

// d loss / d w_input (h1 x (p+1)) of the masked, noised network, including
// the zero columns of unselected features.
DenseMatrix input_gradient(const ModelParams& params, const DenseMatrix& x,
                           const SimilarityGraph& graph, std::span<const int> y,
                           const DropoutMask& mask, const GcnNoise& noise);

DropoutMask sample_dropout_mask(Rng& rng, std::size_t h1, std::size_t h2, double dropout_prob,
                                bool rescale);
GcnNoise sample_gcn_noise(Rng& rng, std::size_t h1, std::size_t h2, double variance);

struct EnsembleConfig {
    std::size_t dropout_count = 20;  // m
    double dropout_prob = 0.5;
    double noise_variance = 0.01;  // σ²
    bool rescale_dropout = false;
    std::size_t threads = 1;
};

// Mean of `dropout_count` input gradients, each with its own dropout mask and
// GCN noise drawn from rng.substream("dropout-model", q). Result does not
// depend on the thread count.
DenseMatrix averaged_gradient(const ModelParams& params, const DenseMatrix& x,
                              const SimilarityGraph& graph, std::span<const int> y,
                              const EnsembleConfig& config, const Rng& rng);

}  // namespace graces
