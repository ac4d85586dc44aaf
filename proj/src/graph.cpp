#include "graces/graph.hpp"

#include <algorithm>
#include <cmath>

#include "graces/errors.hpp"

namespace graces {

SimilarityGraph::SimilarityGraph(std::vector<std::vector<std::size_t>> neighbors)
    : neighbors_(std::move(neighbors)) {
    const std::size_t n = neighbors_.size();
    for (auto& list : neighbors_) std::sort(list.begin(), list.end());
    for (std::size_t j = 0; j < n; ++j) {
        const auto& list = neighbors_[j];
        if (std::adjacent_find(list.begin(), list.end()) != list.end())
            throw InvalidArgument("SimilarityGraph: duplicate neighbor");
        for (std::size_t i : list) {
            if (i >= n) throw InvalidArgument("SimilarityGraph: neighbor index out of range");
            if (i == j) throw InvalidArgument("SimilarityGraph: self-loop");
            if (!std::binary_search(neighbors_[i].begin(), neighbors_[i].end(), j))
                throw InvalidArgument("SimilarityGraph: adjacency is not symmetric");
        }
    }
}

SimilarityGraph SimilarityGraph::empty(std::size_t node_count) {
    return SimilarityGraph(std::vector<std::vector<std::size_t>>(node_count));
}

SimilarityGraph SimilarityGraph::complete(std::size_t node_count) {
    std::vector<std::vector<std::size_t>> lists(node_count);
    for (std::size_t j = 0; j < node_count; ++j)
        for (std::size_t i = 0; i < node_count; ++i)
            if (i != j) lists[j].push_back(i);
    return SimilarityGraph(std::move(lists));
}

std::size_t SimilarityGraph::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& list : neighbors_) total += list.size();
    return total / 2;
}

bool SimilarityGraph::connected(std::size_t a, std::size_t b) const {
    const auto& list = neighbors_.at(a);
    return std::binary_search(list.begin(), list.end(), b);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("cosine_similarity: length mismatch");
    if (a.empty()) throw InvalidArgument("cosine_similarity: empty vectors");
    const double na = norm2(a);
    const double nb = norm2(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

SimilarityGraph build_similarity_graph(const DenseMatrix& x, std::span<const std::size_t> selected,
                                       double threshold) {
    if (selected.empty()) throw InvalidArgument("build_similarity_graph: selected set is empty");
    for (std::size_t c : selected)
        if (c >= x.cols()) throw InvalidArgument("build_similarity_graph: column index out of range");

    const std::size_t n = x.rows();
    const std::size_t d = selected.size();
    DenseMatrix restricted(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < d; ++k) restricted(r, k) = x(r, selected[k]);

    std::vector<std::vector<std::size_t>> lists(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cosine_similarity(restricted.row(i), restricted.row(j)) > threshold) {
                lists[i].push_back(j);
                lists[j].push_back(i);
            }
        }
    }
    return SimilarityGraph(std::move(lists));
}

}  // namespace graces
