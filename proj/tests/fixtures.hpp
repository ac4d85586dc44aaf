#pragma once

#include <vector>

#include "graces/graph.hpp"
#include "graces/network.hpp"
#include "graces/rng.hpp"
#include "oracles.hpp"

namespace fixture {

// A small random network problem: bias column plus p features, a random
// selected set containing the bias, a similarity graph, and labels with both
// classes present.
struct Instance {
    graces::DenseMatrix x;
    std::vector<int> y;
    std::vector<std::size_t> selected;
    graces::SimilarityGraph graph;
    graces::ModelParams params;
    graces::DropoutMask mask;
    graces::GcnNoise noise;
};

inline Instance make_instance(graces::Rng& rng, std::size_t n, std::size_t p, std::size_t h1, std::size_t h2) {
    Instance in;
    in.x = graces::DenseMatrix(n, p + 1);
    for (std::size_t j = 0; j < n; ++j) {
        in.x(j, 0) = 1.0;
        for (std::size_t c = 1; c <= p; ++c) in.x(j, c) = rng.uniform(-2, 2);
    }
    in.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) in.y[j] = static_cast<int>(j % 2);
    rng.shuffle(in.y);
    in.selected = {0};
    for (std::size_t c = 1; c <= p; ++c)
        if (rng.bernoulli(0.3)) in.selected.push_back(c);
    in.graph = graces::build_similarity_graph(in.x, in.selected, rng.uniform(-0.2, 0.8));
    in.params = graces::init_params(p + 1, in.selected, h1, h2, rng);
    // scale up so ReLUs and outputs are well away from trivial
    for (double& v : in.params.w_input.data()) v *= 2.0;
    in.params.b_output = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    in.mask = graces::sample_dropout_mask(rng, h1, h2, 0.3, false);
    in.noise = graces::sample_gcn_noise(rng, h1, h2, 0.05);
    return in;
}

// Redraws until every active ReLU input is at least `margin` from zero, so a
// central difference never straddles a kink.
inline Instance make_smooth_instance(graces::Rng& rng, std::size_t n, std::size_t p, std::size_t h1,
                                     std::size_t h2, long double margin = 1e-3L) {
    for (;;) {
        Instance in = make_instance(rng, n, p, h1, h2);
        long double kink = 0;
        oracle::network_loss(in.params.w_input, in.params, in.x, in.graph, in.y, in.mask, in.noise, &kink);
        if (kink >= margin) return in;
    }
}

}  // namespace fixture
