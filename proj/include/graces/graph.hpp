#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graces/numerics.hpp"

namespace graces {

// Undirected, unweighted graph over samples. Neighbor lists are sorted,
// symmetric and free of self-loops.
class SimilarityGraph {
public:
    SimilarityGraph() = default;
    // Validates symmetry, range and absence of self-loops; sorts each list.
    explicit SimilarityGraph(std::vector<std::vector<std::size_t>> neighbors);

    static SimilarityGraph empty(std::size_t node_count);
    static SimilarityGraph complete(std::size_t node_count);

    std::size_t node_count() const noexcept { return neighbors_.size(); }
    std::span<const std::size_t> neighbors(std::size_t node) const { return neighbors_[node]; }
    std::size_t edge_count() const noexcept;
    bool connected(std::size_t a, std::size_t b) const;

    bool operator==(const SimilarityGraph&) const = default;

private:
    std::vector<std::vector<std::size_t>> neighbors_;
};

// x·y / (‖x‖‖y‖); 0 when either vector is all-zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Edge (i, j) for i != j iff the cosine similarity of rows i and j restricted
// to `selected` columns is strictly greater than `threshold`.
SimilarityGraph build_similarity_graph(const DenseMatrix& x, std::span<const std::size_t> selected,
                                       double threshold);

}  // namespace graces
