#include "graces/selector.hpp"

#include <algorithm>
#include <cmath>

#include "graces/errors.hpp"
#include "graces/rng.hpp"
#include "graces/stats.hpp"

namespace graces {

void GracesConfig::validate() const {
    if (k < 1) throw InvalidArgument("K must be at least 1");
    if (!(delta >= -1.0 && delta <= 1.0)) throw InvalidArgument("delta must be in [-1, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must be in [0, 1]");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be >= 0");
    if (dropout_count < 1) throw InvalidArgument("m must be at least 1");
    train_config().validate();
}

TrainConfig GracesConfig::train_config() const {
    return TrainConfig{h1, h2, learning_rate, epochs, dropout_prob, rescale_dropout};
}

EnsembleConfig GracesConfig::ensemble_config() const {
    return EnsembleConfig{dropout_count, dropout_prob, sigma2, rescale_dropout, threads};
}

DenseMatrix augment_with_bias(const DenseMatrix& x, bool standardize) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    DenseMatrix out(n, p + 1);
    for (std::size_t j = 0; j < n; ++j) {
        out(j, 0) = 1.0;
        for (std::size_t c = 0; c < p; ++c) out(j, c + 1) = x(j, c);
    }
    if (standardize && n > 1) {
        for (std::size_t c = 1; c <= p; ++c) {
            double mean = 0.0;
            for (std::size_t j = 0; j < n; ++j) mean += out(j, c);
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t j = 0; j < n; ++j) var += (out(j, c) - mean) * (out(j, c) - mean);
            const double sd = std::sqrt(var / static_cast<double>(n));
            for (std::size_t j = 0; j < n; ++j)
                out(j, c) = sd > 0.0 ? (out(j, c) - mean) / sd : 0.0;
        }
    }
    return out;
}

std::size_t next_feature(std::span<const double> scores, std::span<const std::size_t> excluded) {
    std::vector<bool> taken(scores.size(), false);
    for (std::size_t i : excluded)
        if (i < scores.size()) taken[i] = true;
    std::size_t best = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (taken[i]) continue;
        if (best == scores.size() || scores[i] > scores[best]) best = i;
    }
    if (best == scores.size()) throw Exhausted("next_feature: every feature is already selected");
    return best;
}

SelectionResult select_features(const DenseMatrix& x, std::span<const int> y,
                                const GracesConfig& config, const IterationObserver& observer) {
    config.validate();
    const std::size_t p = x.cols();
    if (config.k > p) throw InvalidArgument("K exceeds feature count");
    if (y.size() != x.rows()) throw InvalidArgument("label count does not match sample count");
    if (!x.all_finite()) throw InvalidArgument("feature matrix contains non-finite values");

    // Also rejects single-class labels.
    const std::vector<double> f_scores = normalize_scores(anova_f_scores(x, y));
    const DenseMatrix features = augment_with_bias(x, config.standardize);
    const Rng master(config.seed);
    const TrainConfig train_config = config.train_config();
    const EnsembleConfig ensemble = config.ensemble_config();

    SelectionResult result;
    SelectionState& state = result.state;
    state.selected = {0};
    std::vector<std::size_t> chosen_original;
    ModelParams previous;

    for (std::size_t iteration = 0; iteration < config.k; ++iteration) {
        const SimilarityGraph graph = build_similarity_graph(features, state.selected, config.delta);

        Rng init_rng = master.substream("init", iteration);
        const bool warm = config.warm_start && iteration > 0;
        TrainResult trained =
            train(features, y, graph, state.selected, train_config, init_rng, warm ? &previous : nullptr);

        const Rng dropout_rng = master.substream("dropout", iteration);
        const DenseMatrix gradient = averaged_gradient(trained.params, features, graph, y, ensemble, dropout_rng);
        const std::vector<double> norms = col_norms(gradient);

        // Column 0 is the bias; candidates are the original features.
        const std::vector<double> g_scores =
            normalize_scores(std::span<const double>(norms).subspan(1));
        std::vector<double> scores = blend_scores(g_scores, f_scores, config.alpha);

        if (observer) {
            observer(IterationView{iteration, features, y, graph, trained.params, state.selected, scores});
        }

        const std::size_t pick = next_feature(scores, chosen_original);
        chosen_original.push_back(pick);
        state.selected.push_back(pick + 1);
        state.chosen.push_back(pick);
        state.final_loss.push_back(trained.loss_history.back());
        state.score_trace.push_back(std::move(scores));
        previous = std::move(trained.params);
    }

    result.features = std::move(chosen_original);
    return result;
}

}  // namespace graces
