#include "graces/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graces/errors.hpp"

namespace graces {

std::vector<double> anova_f_scores(const DenseMatrix& x, std::span<const int> y) {
    const std::size_t n = x.rows();
    if (y.size() != n) throw InvalidArgument("anova_f_scores: label count does not match rows");
    if (n < 3) throw InvalidArgument("anova_f_scores: need at least 3 samples");
    std::size_t n1 = 0;
    for (int v : y) {
        if (v != 0 && v != 1) throw InvalidArgument("anova_f_scores: labels must be 0 or 1");
        n1 += static_cast<std::size_t>(v);
    }
    const std::size_t n0 = n - n1;
    if (n0 == 0 || n1 == 0) throw InvalidArgument("anova_f_scores: both classes must be present");

    const std::size_t p = x.cols();
    std::vector<double> sum0(p, 0.0), sum1(p, 0.0);
    std::vector<double> lo(p, 0.0), hi(p, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        auto row = x.row(j);
        auto& sum = y[j] == 1 ? sum1 : sum0;
        for (std::size_t c = 0; c < p; ++c) {
            sum[c] += row[c];
            if (j == 0) {
                lo[c] = hi[c] = row[c];
            } else {
                lo[c] = std::min(lo[c], row[c]);
                hi[c] = std::max(hi[c], row[c]);
            }
        }
    }
    std::vector<double> mean0(p), mean1(p);
    for (std::size_t c = 0; c < p; ++c) {
        mean0[c] = sum0[c] / static_cast<double>(n0);
        mean1[c] = sum1[c] / static_cast<double>(n1);
    }

    std::vector<double> within(p, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        auto row = x.row(j);
        const auto& mean = y[j] == 1 ? mean1 : mean0;
        for (std::size_t c = 0; c < p; ++c) {
            const double d = row[c] - mean[c];
            within[c] += d * d;
        }
    }

    std::vector<double> f(p, 0.0);
    const double dof_within = static_cast<double>(n - 2);
    for (std::size_t c = 0; c < p; ++c) {
        if (lo[c] == hi[c]) continue;
        // SSB for two groups: n0 n1 / n * (mean1 - mean0)^2
        const double gap = mean1[c] - mean0[c];
        const double between = static_cast<double>(n0) * static_cast<double>(n1) /
                               static_cast<double>(n) * gap * gap;
        if (between == 0.0) continue;
        const double value = within[c] == 0.0 ? kInfiniteF : between / (within[c] / dof_within);
        f[c] = std::min(value, kInfiniteF);
    }
    return f;
}

std::vector<double> normalize_scores(std::span<const double> raw) {
    std::vector<double> out(raw.size(), 0.0);
    if (raw.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = std::clamp((raw[i] - lo) / range, 0.0, 1.0);
    return out;
}

std::vector<double> blend_scores(std::span<const double> g, std::span<const double> f, double alpha) {
    if (g.size() != f.size()) throw InvalidArgument("blend_scores: length mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("blend_scores: alpha must be in [0, 1]");
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = alpha * g[i] + (1.0 - alpha) * f[i];
    return out;
}

std::vector<std::size_t> rank_descending(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace graces
