#include <doctest.h>

#include <cmath>

#include "graces/errors.hpp"
#include "graces/graph.hpp"
#include "graces/rng.hpp"
#include "oracles.hpp"

using namespace graces;

TEST_CASE("cosine_similarity") {
    CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine_similarity(std::vector<double>{2, 2}, std::vector<double>{5, 5}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{1, 0}) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 0}), InvalidArgument);
}

TEST_CASE("bias-only selection gives the complete graph") {
    DenseMatrix x(6, 3);
    Rng rng(1);
    for (std::size_t j = 0; j < 6; ++j) {
        x(j, 0) = 1.0;
        x(j, 1) = rng.uniform(-1, 1);
        x(j, 2) = rng.uniform(-1, 1);
    }
    const std::vector<std::size_t> bias{0};
    CHECK(build_similarity_graph(x, bias, 0.7) == SimilarityGraph::complete(6));
    CHECK(build_similarity_graph(x, bias, 0.999) == SimilarityGraph::complete(6));
    // strict threshold: similarity exactly 1 is not above 1
    CHECK(build_similarity_graph(x, bias, 1.0).edge_count() == 0);
    const std::vector<std::size_t> all{0, 1, 2};
    CHECK(build_similarity_graph(x, all, 1.0).edge_count() == 0);
}

TEST_CASE("three-sample hand example") {
    const DenseMatrix x(3, 2, {1, 0, 1, 0.01, 0, 1});
    const std::vector<std::size_t> cols{0, 1};
    const auto g = build_similarity_graph(x, cols, 0.9);
    CHECK(g.edge_count() == 1);
    CHECK(g.connected(0, 1));
    CHECK_FALSE(g.connected(0, 2));
    CHECK_FALSE(g.connected(1, 2));
}

TEST_CASE("graph errors") {
    const DenseMatrix x(3, 2, 1.0);
    CHECK_THROWS_AS(build_similarity_graph(x, std::vector<std::size_t>{}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_similarity_graph(x, std::vector<std::size_t>{2}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(SimilarityGraph(std::vector<std::vector<std::size_t>>{{1}, {}}), InvalidArgument);
    CHECK_THROWS_AS(SimilarityGraph(std::vector<std::vector<std::size_t>>{{0}}), InvalidArgument);
}

TEST_CASE("graph matches the all-pairs oracle and its invariants") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        const std::size_t p = 1 + rng.below(6);
        DenseMatrix x(n, p);
        for (double& v : x.data()) v = rng.uniform(-1, 1);
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < p; ++c)
            if (c == 0 || rng.bernoulli(0.6)) cols.push_back(c);
        const double delta = rng.uniform(-1, 1);

        const auto g = build_similarity_graph(x, cols, delta);
        const auto adj = oracle::threshold_adjacency(x, cols, delta);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK_FALSE(g.connected(i, i));
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(g.connected(i, j) == adj[i][j]);
                CHECK(g.connected(i, j) == g.connected(j, i));
            }
        }

        // positive rescaling of a sample row leaves the graph unchanged
        DenseMatrix scaled = x;
        const std::size_t row = rng.below(n);
        const double factor = 0.125 * static_cast<double>(1 + rng.below(64));
        for (double& v : scaled.row(row)) v *= factor;
        const auto g2 = build_similarity_graph(scaled, cols, delta);
        std::size_t differing = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (g.connected(row, j) != g2.connected(row, j)) ++differing;
        CHECK(differing == 0);
    }
}
