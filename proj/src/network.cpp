#include "graces/network.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "graces/errors.hpp"

namespace graces {

namespace {

struct Weights {
    const DenseMatrix& self;
    const DenseMatrix& neighbor;
};

// Activations of one forward pass, kept for backpropagation.
struct Pass {
    std::vector<std::size_t> active;
    DenseMatrix pre_embed;  // n x h1, w_input x
    DenseMatrix embed;      // n x h1, after ReLU and mask
    DenseMatrix aggregate;  // n x h1, neighbor mean of embed
    DenseMatrix pre_gcn;    // n x h2
    DenseMatrix gcn;        // n x h2, after ReLU and mask
    DenseMatrix prob;       // n x 2
};

struct ParamGrads {
    DenseMatrix pre_embed;  // d loss / d pre_embed, n x h1
    DenseMatrix w_self;
    DenseMatrix w_neighbor;
    DenseMatrix w_output;
    std::array<double, 2> b_output{0.0, 0.0};
};

void check_shapes(const ModelParams& params, const DenseMatrix& x, const SimilarityGraph& graph) {
    const std::size_t h1 = params.hidden1();
    const std::size_t h2 = params.hidden2();
    if (params.w_input.cols() != x.cols())
        throw InvalidArgument("network: w_input columns do not match feature count");
    if (params.w_self.cols() != h1 || params.w_neighbor.rows() != h2 ||
        params.w_neighbor.cols() != h1)
        throw InvalidArgument("network: GCN weight shapes are inconsistent");
    if (params.w_output.rows() != 2 || params.w_output.cols() != h2)
        throw InvalidArgument("network: w_output must be 2 x h2");
    if (graph.node_count() != x.rows())
        throw InvalidArgument("network: graph node count does not match sample count");
}

void check_mask(const DropoutMask& mask, std::size_t h1, std::size_t h2) {
    if (mask.embedding.size() != h1 || mask.gcn.size() != h2)
        throw InvalidArgument("network: dropout mask shape mismatch");
}

void check_noise(const GcnNoise& noise, std::size_t h1, std::size_t h2) {
    if (noise.self.rows() != h2 || noise.self.cols() != h1 || noise.neighbor.rows() != h2 ||
        noise.neighbor.cols() != h1)
        throw InvalidArgument("network: noise shape mismatch");
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out = a;
    auto dst = out.data();
    auto src = b.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return out;
}

Pass run_forward(const ModelParams& params, const DenseMatrix& x, std::vector<std::size_t> active,
                 const SimilarityGraph& graph, const DropoutMask* mask, const Weights& gcn) {
    const std::size_t n = x.rows();
    const std::size_t h1 = params.hidden1();
    const std::size_t h2 = params.hidden2();

    Pass pass;
    pass.active = std::move(active);
    pass.pre_embed = DenseMatrix(n, h1);
    for (std::size_t j = 0; j < n; ++j) {
        auto out = pass.pre_embed.row(j);
        for (std::size_t c : pass.active) {
            const double v = x(j, c);
            for (std::size_t k = 0; k < h1; ++k) out[k] += params.w_input(k, c) * v;
        }
    }

    pass.embed = DenseMatrix(n, h1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < h1; ++k) {
            double v = std::max(pass.pre_embed(j, k), 0.0);
            if (mask) v = mask->embedding[k] ? v * mask->keep_scale : 0.0;
            pass.embed(j, k) = v;
        }
    }

    pass.aggregate = DenseMatrix(n, h1);
    for (std::size_t j = 0; j < n; ++j) {
        const auto nbrs = graph.neighbors(j);
        if (nbrs.empty()) continue;
        auto out = pass.aggregate.row(j);
        for (std::size_t i : nbrs) {
            auto src = pass.embed.row(i);
            for (std::size_t k = 0; k < h1; ++k) out[k] += src[k];
        }
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        for (double& v : out) v *= inv;
    }

    pass.pre_gcn = matmul_transposed(pass.embed, gcn.self);
    const DenseMatrix from_neighbors = matmul_transposed(pass.aggregate, gcn.neighbor);
    pass.gcn = DenseMatrix(n, h2);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < h2; ++k) {
            pass.pre_gcn(j, k) += from_neighbors(j, k);
            double v = std::max(pass.pre_gcn(j, k), 0.0);
            if (mask) v = mask->gcn[k] ? v * mask->keep_scale : 0.0;
            pass.gcn(j, k) = v;
        }
    }

    pass.prob = DenseMatrix(n, 2);
    for (std::size_t j = 0; j < n; ++j) {
        std::array<double, 2> logits{params.b_output[0], params.b_output[1]};
        for (std::size_t c = 0; c < 2; ++c) logits[c] += dot(params.w_output.row(c), pass.gcn.row(j));
        const auto p = softmax(logits);
        pass.prob(j, 0) = p[0];
        pass.prob(j, 1) = p[1];
    }
    return pass;
}

// Backpropagates the cross-entropy of `pass` down to pre_embed. Weight
// gradients of the upper layers are filled only when `with_weights` is set.
ParamGrads run_backward(const ModelParams& params, const Pass& pass, const SimilarityGraph& graph,
                        std::span<const int> y, const DropoutMask* mask, const Weights& gcn,
                        bool with_weights) {
    const std::size_t n = pass.prob.rows();
    const std::size_t h1 = params.hidden1();
    const std::size_t h2 = params.hidden2();
    const double inv_n = 1.0 / static_cast<double>(n);

    // softmax + cross-entropy: (prob - onehot) / n
    DenseMatrix d_logits(n, 2);
    for (std::size_t j = 0; j < n; ++j) {
        d_logits(j, 0) = (pass.prob(j, 0) - (y[j] == 0 ? 1.0 : 0.0)) * inv_n;
        d_logits(j, 1) = (pass.prob(j, 1) - (y[j] == 1 ? 1.0 : 0.0)) * inv_n;
    }

    ParamGrads grads;
    DenseMatrix d_pre_gcn = matmul(d_logits, params.w_output);  // n x h2
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < h2; ++k) {
            double g = d_pre_gcn(j, k);
            if (mask) g = mask->gcn[k] ? g * mask->keep_scale : 0.0;
            d_pre_gcn(j, k) = pass.pre_gcn(j, k) > 0.0 ? g : 0.0;
        }
    }

    if (with_weights) {
        grads.w_output = transposed_matmul(d_logits, pass.gcn);
        for (std::size_t j = 0; j < n; ++j) {
            grads.b_output[0] += d_logits(j, 0);
            grads.b_output[1] += d_logits(j, 1);
        }
        grads.w_self = transposed_matmul(d_pre_gcn, pass.embed);
        grads.w_neighbor = transposed_matmul(d_pre_gcn, pass.aggregate);
    }

    DenseMatrix d_embed = matmul(d_pre_gcn, gcn.self);               // n x h1
    const DenseMatrix d_aggregate = matmul(d_pre_gcn, gcn.neighbor);  // n x h1
    for (std::size_t j = 0; j < n; ++j) {
        const auto nbrs = graph.neighbors(j);
        if (nbrs.empty()) continue;
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        auto src = d_aggregate.row(j);
        for (std::size_t i : nbrs) {
            auto dst = d_embed.row(i);
            for (std::size_t k = 0; k < h1; ++k) dst[k] += src[k] * inv;
        }
    }

    grads.pre_embed = DenseMatrix(n, h1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < h1; ++k) {
            double g = d_embed(j, k);
            if (mask) g = mask->embedding[k] ? g * mask->keep_scale : 0.0;
            grads.pre_embed(j, k) = pass.pre_embed(j, k) > 0.0 ? g : 0.0;
        }
    }
    return grads;
}

void check_labels(std::span<const int> y, std::size_t n) {
    if (y.size() != n) throw InvalidArgument("network: label count does not match sample count");
    for (int v : y)
        if (v != 0 && v != 1) throw InvalidArgument("network: labels must be 0 or 1");
}

double pass_loss(const Pass& pass, std::span<const int> y) {
    return cross_entropy(y, pass.prob.column(1));
}

// d loss / d pre_embed for one dropout model.
DenseMatrix embedding_gradient(const ModelParams& params, const DenseMatrix& x,
                               const std::vector<std::size_t>& active,
                               const SimilarityGraph& graph, std::span<const int> y,
                               const DropoutMask& mask, const GcnNoise& noise) {
    const DenseMatrix self = add(params.w_self, noise.self);
    const DenseMatrix neighbor = add(params.w_neighbor, noise.neighbor);
    const Weights gcn{self, neighbor};
    const Pass pass = run_forward(params, x, active, graph, &mask, gcn);
    return run_backward(params, pass, graph, y, &mask, gcn, false).pre_embed;
}

}  // namespace

std::vector<std::size_t> ModelParams::active_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < w_input.cols(); ++c) {
        for (std::size_t r = 0; r < w_input.rows(); ++r) {
            if (w_input(r, c) != 0.0) {
                out.push_back(c);
                break;
            }
        }
    }
    return out;
}

bool ModelParams::all_finite() const noexcept {
    return w_input.all_finite() && w_self.all_finite() && w_neighbor.all_finite() &&
           w_output.all_finite() && std::isfinite(b_output[0]) && std::isfinite(b_output[1]);
}

DropoutMask DropoutMask::keep_all(std::size_t h1, std::size_t h2) {
    return DropoutMask{std::vector<std::uint8_t>(h1, 1), std::vector<std::uint8_t>(h2, 1), 1.0};
}

GcnNoise GcnNoise::zero(std::size_t h1, std::size_t h2) {
    return GcnNoise{DenseMatrix(h2, h1), DenseMatrix(h2, h1)};
}

void TrainConfig::validate() const {
    if (hidden1 == 0 || hidden2 == 0) throw InvalidArgument("hidden dimensions must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw InvalidArgument("learning rate must be positive");
    if (epochs == 0) throw InvalidArgument("epochs must be positive");
    if (!(dropout_prob >= 0.0 && dropout_prob < 1.0))
        throw InvalidArgument("dropout probability must be in [0, 1)");
}

ModelParams init_params(std::size_t feature_count, std::span<const std::size_t> active,
                        std::size_t h1, std::size_t h2, Rng& rng) {
    ModelParams params;
    params.w_input = DenseMatrix(h1, feature_count);
    if (!active.empty()) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(active.size()));
        for (std::size_t c : active) {
            if (c >= feature_count) throw InvalidArgument("init_params: column out of range");
            for (std::size_t r = 0; r < h1; ++r) params.w_input(r, c) = rng.uniform(-bound, bound);
        }
    }
    auto fill_uniform = [&rng](DenseMatrix& m, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : m.data()) v = rng.uniform(-bound, bound);
    };
    params.w_self = DenseMatrix(h2, h1);
    params.w_neighbor = DenseMatrix(h2, h1);
    params.w_output = DenseMatrix(2, h2);
    fill_uniform(params.w_self, h1);
    fill_uniform(params.w_neighbor, h1);
    fill_uniform(params.w_output, h2);
    return params;
}

DenseMatrix forward(const ModelParams& params, const DenseMatrix& x, const SimilarityGraph& graph,
                    const DropoutMask* mask, const GcnNoise* noise) {
    check_shapes(params, x, graph);
    if (mask) check_mask(*mask, params.hidden1(), params.hidden2());
    if (noise) {
        check_noise(*noise, params.hidden1(), params.hidden2());
        const DenseMatrix self = add(params.w_self, noise->self);
        const DenseMatrix neighbor = add(params.w_neighbor, noise->neighbor);
        return run_forward(params, x, params.active_columns(), graph, mask, {self, neighbor}).prob;
    }
    return run_forward(params, x, params.active_columns(), graph, mask,
                       {params.w_self, params.w_neighbor})
        .prob;
}

double cross_entropy(std::span<const int> y, std::span<const double> prob_one) {
    if (y.size() != prob_one.size()) throw InvalidArgument("cross_entropy: length mismatch");
    if (y.empty()) throw InvalidArgument("cross_entropy: no samples");
    double total = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double p = std::clamp(prob_one[j], kProbabilityClamp, 1.0 - kProbabilityClamp);
        total += y[j] == 1 ? std::log(p) : std::log1p(-p);
    }
    return -total / static_cast<double>(y.size());
}

TrainResult train(const DenseMatrix& x, std::span<const int> y, const SimilarityGraph& graph,
                  std::span<const std::size_t> selected, const TrainConfig& config, Rng& rng,
                  const ModelParams* warm_start) {
    config.validate();
    if (selected.empty()) throw InvalidArgument("train: selected set is empty");
    check_labels(y, x.rows());
    if (graph.node_count() != x.rows())
        throw InvalidArgument("train: graph node count does not match sample count");

    std::vector<std::size_t> active(selected.begin(), selected.end());
    TrainResult result;
    result.params = init_params(x.cols(), active, config.hidden1, config.hidden2, rng);
    ModelParams& params = result.params;

    if (warm_start) {
        check_shapes(*warm_start, x, graph);
        if (warm_start->hidden1() != config.hidden1 || warm_start->hidden2() != config.hidden2)
            throw InvalidArgument("train: warm start hidden dimensions differ from config");
        const auto previous = warm_start->active_columns();
        for (std::size_t c : previous) {
            if (std::find(active.begin(), active.end(), c) == active.end()) continue;
            for (std::size_t r = 0; r < config.hidden1; ++r) params.w_input(r, c) = warm_start->w_input(r, c);
        }
        params.w_self = warm_start->w_self;
        params.w_neighbor = warm_start->w_neighbor;
        params.w_output = warm_start->w_output;
        params.b_output = warm_start->b_output;
    }

    const double lr = config.learning_rate;
    result.loss_history.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const Weights gcn{params.w_self, params.w_neighbor};
        const Pass pass = run_forward(params, x, active, graph, nullptr, gcn);
        const double loss = pass_loss(pass, y);
        if (!std::isfinite(loss)) throw TrainingDiverged(epoch);
        result.loss_history.push_back(loss);

        const ParamGrads grads = run_backward(params, pass, graph, y, nullptr, gcn, true);
        for (std::size_t c : active) {
            for (std::size_t r = 0; r < config.hidden1; ++r) {
                double g = 0.0;
                for (std::size_t j = 0; j < x.rows(); ++j) g += grads.pre_embed(j, r) * x(j, c);
                params.w_input(r, c) -= lr * g;
            }
        }
        auto step = [lr](DenseMatrix& w, const DenseMatrix& g) {
            auto dst = w.data();
            auto src = g.data();
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= lr * src[i];
        };
        step(params.w_self, grads.w_self);
        step(params.w_neighbor, grads.w_neighbor);
        step(params.w_output, grads.w_output);
        params.b_output[0] -= lr * grads.b_output[0];
        params.b_output[1] -= lr * grads.b_output[1];
        if (!params.all_finite()) throw TrainingDiverged(epoch);
    }
    return result;
}

DenseMatrix input_gradient(const ModelParams& params, const DenseMatrix& x,
                           const SimilarityGraph& graph, std::span<const int> y,
                           const DropoutMask& mask, const GcnNoise& noise) {
    check_shapes(params, x, graph);
    check_mask(mask, params.hidden1(), params.hidden2());
    check_noise(noise, params.hidden1(), params.hidden2());
    check_labels(y, x.rows());
    const DenseMatrix d_pre_embed =
        embedding_gradient(params, x, params.active_columns(), graph, y, mask, noise);
    return transposed_matmul(d_pre_embed, x);
}

DropoutMask sample_dropout_mask(Rng& rng, std::size_t h1, std::size_t h2, double dropout_prob,
                                bool rescale) {
    if (!(dropout_prob >= 0.0 && dropout_prob < 1.0))
        throw InvalidArgument("dropout probability must be in [0, 1)");
    DropoutMask mask;
    mask.embedding.resize(h1);
    mask.gcn.resize(h2);
    for (auto& v : mask.embedding) v = rng.bernoulli(dropout_prob) ? 0 : 1;
    for (auto& v : mask.gcn) v = rng.bernoulli(dropout_prob) ? 0 : 1;
    mask.keep_scale = rescale ? 1.0 / (1.0 - dropout_prob) : 1.0;
    return mask;
}

GcnNoise sample_gcn_noise(Rng& rng, std::size_t h1, std::size_t h2, double variance) {
    return GcnNoise{DenseMatrix(h2, h1, gaussian_sample(rng, h2 * h1, variance)),
                    DenseMatrix(h2, h1, gaussian_sample(rng, h2 * h1, variance))};
}

DenseMatrix averaged_gradient(const ModelParams& params, const DenseMatrix& x,
                              const SimilarityGraph& graph, std::span<const int> y,
                              const EnsembleConfig& config, const Rng& rng) {
    if (config.dropout_count < 1) throw InvalidArgument("averaged_gradient: m must be >= 1");
    if (!(config.noise_variance >= 0.0)) throw InvalidArgument("averaged_gradient: negative variance");
    check_shapes(params, x, graph);
    check_labels(y, x.rows());

    const std::size_t h1 = params.hidden1();
    const std::size_t h2 = params.hidden2();
    const std::size_t m = config.dropout_count;
    const auto active = params.active_columns();

    // The input gradient is (d loss / d pre_embed)ᵀ x, linear in the first
    // factor, so the ensemble mean is taken before the product with x.
    std::vector<DenseMatrix> per_model(m);
    auto work = [&](std::size_t q) {
        Rng stream = rng.substream("dropout-model", q);
        const DropoutMask mask =
            sample_dropout_mask(stream, h1, h2, config.dropout_prob, config.rescale_dropout);
        const GcnNoise noise = sample_gcn_noise(stream, h1, h2, config.noise_variance);
        per_model[q] = embedding_gradient(params, x, active, graph, y, mask, noise);
    };

    const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, m));
    if (threads == 1) {
        for (std::size_t q = 0; q < m; ++q) work(q);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t q = t; q < m; q += threads) work(q);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Running mean, in model order: exact when every model agrees.
    DenseMatrix mean(x.rows(), h1);
    auto acc = mean.data();
    for (std::size_t q = 0; q < m; ++q) {
        const double inv = 1.0 / static_cast<double>(q + 1);
        auto src = per_model[q].data();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (src[i] - acc[i]) * inv;
    }
    return transposed_matmul(mean, x);
}

}  // namespace graces
