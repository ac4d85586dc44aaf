#include "graces/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "graces/errors.hpp"
#include "graces/rng.hpp"

namespace graces {

namespace {

void require_both_classes(std::span<const int> y, const char* who) {
    bool zero = false, one = false;
    for (int v : y) {
        if (v == 0) zero = true;
        else if (v == 1) one = true;
        else throw InvalidArgument(std::string(who) + ": labels must be 0 or 1");
    }
    if (!zero || !one) throw InvalidArgument(std::string(who) + ": both classes must be present");
}

}  // namespace

double LinearModel::decision(std::span<const double> row) const {
    if (row.size() != weights.size()) throw InvalidArgument("LinearModel: feature count mismatch");
    double s = bias;
    for (std::size_t k = 0; k < row.size(); ++k) s += weights[k] * ((row[k] - center[k]) / scale[k]);
    return s;
}

std::vector<double> LinearModel::decision(const DenseMatrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t j = 0; j < x.rows(); ++j) out[j] = decision(x.row(j));
    return out;
}

LinearModel train_linear_svm(const DenseMatrix& x, std::span<const int> y, const SvmConfig& config) {
    if (y.size() != x.rows()) throw InvalidArgument("train_linear_svm: label count does not match rows");
    require_both_classes(y, "train_linear_svm");
    if (!(config.c > 0.0)) throw InvalidArgument("train_linear_svm: C must be positive");
    if (config.epochs == 0) throw InvalidArgument("train_linear_svm: epochs must be positive");

    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    LinearModel model;
    model.center.assign(d, 0.0);
    model.scale.assign(d, 1.0);
    for (std::size_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) mean += x(j, k);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) var += (x(j, k) - mean) * (x(j, k) - mean);
        const double sd = std::sqrt(var / static_cast<double>(n));
        model.center[k] = mean;
        model.scale[k] = sd > 0.0 ? sd : 1.0;
    }

    // Standardized design with a trailing constant column for the intercept.
    DenseMatrix z(n, d + 1);
    std::vector<double> sign(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < d; ++k) z(j, k) = (x(j, k) - model.center[k]) / model.scale[k];
        z(j, d) = 1.0;
        sign[j] = y[j] == 1 ? 1.0 : -1.0;
    }

    const double lambda = 1.0 / (config.c * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    const std::size_t total = config.epochs * n;
    const std::size_t average_from = total / 2;
    std::vector<double> w(d + 1, 0.0), avg(d + 1, 0.0);
    std::size_t averaged = 0;

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t j : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const auto row = z.row(j);
            const double margin = sign[j] * dot(w, row);
            const double shrink = 1.0 - eta * lambda;
            for (double& v : w) v *= shrink;
            if (margin < 1.0)
                for (std::size_t k = 0; k <= d; ++k) w[k] += eta * sign[j] * row[k];
            const double norm = norm2(w);
            if (norm > radius)
                for (double& v : w) v *= radius / norm;
            if (t > average_from) {
                ++averaged;
                const double inv = 1.0 / static_cast<double>(averaged);
                for (std::size_t k = 0; k <= d; ++k) avg[k] += (w[k] - avg[k]) * inv;
            }
        }
    }
    model.weights.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(d));
    model.bias = avg[d];
    return model;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw InvalidArgument("auroc: length mismatch");
    require_both_classes(labels, "auroc");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (mid)ranks of positives; ranks are integers or halves, so exact.
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                positive_rank_sum += mid_rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    const double pos = static_cast<double>(positives);
    const double u = positive_rank_sum - pos * (pos + 1.0) / 2.0;
    return u / (pos * static_cast<double>(negatives));
}

double correction_rate(std::span<const std::size_t> selected, std::span<const std::size_t> truth) {
    if (selected.empty()) throw InvalidArgument("correction_rate: nothing selected");
    if (truth.empty()) throw InvalidArgument("correction_rate: truth set is empty");
    const std::set<std::size_t> informative(truth.begin(), truth.end());
    const auto hits = std::count_if(selected.begin(), selected.end(),
                                    [&](std::size_t i) { return informative.count(i) > 0; });
    return static_cast<double>(hits) / static_cast<double>(selected.size());
}

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("paired_t_test: length mismatch");
    if (a.size() < 2) throw InvalidArgument("paired_t_test: need at least two pairs");
    PairedTTest out;
    out.count = a.size();
    const double n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    out.mean_difference = mean;
    if (se == 0.0) {
        out.t_statistic = mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
        out.p_value = mean == 0.0 ? 1.0 : 0.0;
        return out;
    }
    out.t_statistic = mean / se;
    const boost::math::students_t dist(n - 1.0);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t_statistic)));
    return out;
}

double ranking_auroc(const Dataset& train, const Dataset& test, std::span<const std::size_t> ranking,
                     std::size_t k, const SvmConfig& svm) {
    if (k == 0 || k > ranking.size()) throw InvalidArgument("ranking_auroc: k outside ranking length");
    const auto top = ranking.subspan(0, k);
    for (std::size_t c : top)
        if (c >= train.features()) throw InvalidArgument("ranking_auroc: feature index out of range");
    const LinearModel model = train_linear_svm(select_columns(train.x, top), train.y, svm);
    return auroc(model.decision(select_columns(test.x, top)), test.y);
}

std::vector<GracesConfig> GracesGrid::expand(const GracesConfig& base) const {
    std::vector<GracesConfig> out{base};
    auto vary = [&out](const auto& values, auto setter) {
        if (values.empty()) return;
        std::vector<GracesConfig> next;
        next.reserve(out.size() * values.size());
        for (const auto& config : out) {
            for (const auto& v : values) {
                GracesConfig c = config;
                setter(c, v);
                next.push_back(c);
            }
        }
        out = std::move(next);
    };
    vary(delta, [](GracesConfig& c, double v) { c.delta = v; });
    vary(h1, [](GracesConfig& c, std::size_t v) { c.h1 = v; });
    vary(h2, [](GracesConfig& c, std::size_t v) { c.h2 = v; });
    vary(learning_rate, [](GracesConfig& c, double v) { c.learning_rate = v; });
    vary(dropout_count, [](GracesConfig& c, std::size_t v) { c.dropout_count = v; });
    vary(sigma2, [](GracesConfig& c, double v) { c.sigma2 = v; });
    vary(alpha, [](GracesConfig& c, double v) { c.alpha = v; });
    vary(epochs, [](GracesConfig& c, std::size_t v) { c.epochs = v; });
    vary(dropout_prob, [](GracesConfig& c, double v) { c.dropout_prob = v; });
    return out;
}

GridSearchResult grid_search(const Dataset& train, const Dataset& val, const GracesGrid& grid,
                             const GracesConfig& base, std::size_t k, const SvmConfig& svm) {
    const auto configs = grid.expand(base);
    if (configs.empty()) throw InvalidArgument("grid_search: empty grid");

    GridSearchResult result;
    bool found = false;
    for (const auto& candidate : configs) {
        GridCell cell{candidate, std::nullopt, {}};
        cell.config.k = k;
        try {
            const auto selection = select_features(train.x, train.y, cell.config);
            cell.auroc = ranking_auroc(train, val, selection.features, k, svm);
            if (!found || *cell.auroc > result.best_auroc) {
                found = true;
                result.best = cell.config;
                result.best_auroc = *cell.auroc;
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
    }
    if (!found) throw InvalidArgument("grid_search: every configuration failed");
    return result;
}

GridSearchResult grid_search(const Dataset& dataset, const SplitSpec& split_spec, const GracesGrid& grid,
                             const GracesConfig& base, std::size_t k, const SvmConfig& svm) {
    const DatasetSplit parts = split(dataset, split_spec);
    return grid_search(parts.train, parts.val, grid, base, k, svm);
}

}  // namespace graces
