#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "graces/errors.hpp"
#include "graces/network.hpp"
#include "oracles.hpp"

using namespace graces;

namespace {

// Path graph 0 - 1 - 2 with hand-set weights; feature column 2 unselected.
ModelParams hand_params() {
    ModelParams p;
    p.w_input = DenseMatrix(2, 3, {0.2, -0.5, 0.0, 0.4, 0.3, 0.0});
    p.w_self = DenseMatrix(2, 2, {0.6, -0.2, 0.1, 0.5});
    p.w_neighbor = DenseMatrix(2, 2, {-0.3, 0.4, 0.2, 0.2});
    p.w_output = DenseMatrix(2, 2, {0.7, -0.6, -0.4, 0.9});
    p.b_output = {0.05, -0.1};
    return p;
}

const DenseMatrix kHandX(3, 3, {1, 0.5, -1.0, 1, -0.3, 0.8, 1, 1.2, 0.4});

SimilarityGraph path3() { return SimilarityGraph({{1}, {0, 2}, {1}}); }

}  // namespace

TEST_CASE("zero network predicts one half") {
    ModelParams p;
    p.w_input = DenseMatrix(4, 6);
    p.w_self = DenseMatrix(3, 4);
    p.w_neighbor = DenseMatrix(3, 4);
    p.w_output = DenseMatrix(2, 3);
    DenseMatrix x(5, 6, 1.0);
    const auto prob = forward(p, x, SimilarityGraph::complete(5));
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(prob(j, 0) == 0.5);
        CHECK(prob(j, 1) == 0.5);
    }
}

TEST_CASE("forward matches a hand evaluation") {
    // Frozen from an independent step-by-step evaluation (numpy).
    const double expected[3][2] = {{0.38686721666728685, 0.6131327833327131},
                                   {0.5298394988233103, 0.4701605011766897},
                                   {0.350236456750312, 0.6497635432496879}};
    const auto prob = forward(hand_params(), kHandX, path3());
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(prob(j, c) - expected[j][c]) < 1e-10);
    const std::vector<int> y{1, 0, 1};
    CHECK(std::abs(cross_entropy(y, prob.column(1)) - 0.5185005556048968) < 1e-10);
}

TEST_CASE("unselected columns do not affect the forward pass") {
    DenseMatrix x = kHandX;
    const auto before = forward(hand_params(), x, path3());
    for (std::size_t j = 0; j < 3; ++j) x(j, 2) = 1e6 * (static_cast<double>(j) - 7.5);
    CHECK(forward(hand_params(), x, path3()) == before);
}

TEST_CASE("isolated nodes keep their self term") {
    const auto prob = forward(hand_params(), kHandX, SimilarityGraph::empty(3));
    CHECK(prob.all_finite());
    for (std::size_t j = 0; j < 3; ++j) CHECK(prob(j, 0) + prob(j, 1) == doctest::Approx(1.0));
}

TEST_CASE("forward rejects inconsistent shapes") {
    ModelParams p = hand_params();
    CHECK_THROWS_AS(forward(p, DenseMatrix(3, 4), path3()), InvalidArgument);
    CHECK_THROWS_AS(forward(p, kHandX, SimilarityGraph::empty(2)), InvalidArgument);
    DropoutMask bad = DropoutMask::keep_all(3, 2);
    CHECK_THROWS_AS(forward(p, kHandX, path3(), &bad), InvalidArgument);
    p.w_output = DenseMatrix(3, 2);
    CHECK_THROWS_AS(forward(p, kHandX, path3()), InvalidArgument);
}

TEST_CASE("cross_entropy") {
    CHECK(cross_entropy(std::vector<int>{1, 0}, std::vector<double>{0.5, 0.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(cross_entropy(std::vector<int>{1}, std::vector<double>{1.0 - 1e-12}) < 1e-11);
    CHECK(cross_entropy(std::vector<int>{1, 0, 1}, std::vector<double>{0.9, 0.2, 0.8}) ==
          doctest::Approx(0.18388253942874858).epsilon(1e-14));
    CHECK(cross_entropy(std::vector<int>{0}, std::vector<double>{1.0}) == doctest::Approx(-std::log(1e-12)).epsilon(1e-6));
    CHECK_THROWS_AS(cross_entropy(std::vector<int>{1, 0}, std::vector<double>{0.5}), InvalidArgument);
}

TEST_CASE("input_gradient matches central finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6 + rng.below(5), p = 10 + rng.below(7);
        const std::size_t h1 = 3 + rng.below(2), h2 = 3 + rng.below(2);
        const auto in = fixture::make_smooth_instance(rng, n, p, h1, h2);
        const auto analytic = input_gradient(in.params, in.x, in.graph, in.y, in.mask, in.noise);
        const auto numeric = oracle::finite_difference_gradient(in.params, in.x, in.graph, in.y, in.mask, in.noise);
        const auto check = oracle::compare_gradients(analytic, numeric);
        CHECK(check.max_relative < 1e-5);
        CHECK(check.max_absolute_small < 1e-8);
    }
}

TEST_CASE("gradient through unselected columns is the selection signal") {
    Rng rng(8);
    const auto in = fixture::make_instance(rng, 8, 12, 4, 3);
    const auto g = input_gradient(in.params, in.x, in.graph, in.y, DropoutMask::keep_all(4, 3), GcnNoise::zero(4, 3));
    const auto norms = col_norms(g);
    std::size_t nonzero_unselected = 0;
    for (std::size_t c = 1; c < norms.size(); ++c)
        if (std::find(in.selected.begin(), in.selected.end(), c) == in.selected.end() && norms[c] > 0.0)
            ++nonzero_unselected;
    CHECK(nonzero_unselected > 0);
}

TEST_CASE("all-zero embedding mask kills the gradient") {
    Rng rng(9);
    const auto in = fixture::make_instance(rng, 7, 10, 4, 3);
    DropoutMask dead = DropoutMask::keep_all(4, 3);
    std::fill(dead.embedding.begin(), dead.embedding.end(), 0);
    const auto g = input_gradient(in.params, in.x, in.graph, in.y, dead, in.noise);
    for (double v : g.data()) CHECK(v == 0.0);
}

TEST_CASE("duplicated feature columns get identical gradients") {
    Rng rng(10);
    auto in = fixture::make_instance(rng, 8, 10, 4, 3);
    for (std::size_t j = 0; j < in.x.rows(); ++j) in.x(j, 7) = in.x(j, 3);
    for (std::size_t r = 0; r < in.params.hidden1(); ++r) in.params.w_input(r, 7) = in.params.w_input(r, 3);
    const auto g = input_gradient(in.params, in.x, in.graph, in.y, in.mask, in.noise);
    for (std::size_t r = 0; r < g.rows(); ++r) CHECK(g(r, 7) == g(r, 3));
}

TEST_CASE("output-layer gradient is (prob - onehot) / n") {
    Rng rng(12);
    const auto in = fixture::make_instance(rng, 9, 6, 4, 3);
    // One epoch from a known initialization moves b_output by -lr * gradient.
    TrainConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 3;
    cfg.learning_rate = 0.5;
    cfg.epochs = 1;
    Rng init_a(77), init_b(77);
    const auto trained = train(in.x, in.y, in.graph, in.selected, cfg, init_a);
    const auto start = init_params(in.x.cols(), in.selected, 4, 3, init_b);
    const auto prob = forward(start, in.x, in.graph);

    const DropoutMask keep = DropoutMask::keep_all(4, 3);
    const GcnNoise quiet = GcnNoise::zero(4, 3);
    for (std::size_t c = 0; c < 2; ++c) {
        double expected = 0.0;
        for (std::size_t j = 0; j < in.x.rows(); ++j)
            expected += (prob(j, c) - (in.y[j] == static_cast<int>(c) ? 1.0 : 0.0)) / in.x.rows();
        const double step = -(trained.params.b_output[c] - start.b_output[c]) / cfg.learning_rate;
        CHECK(step == doctest::Approx(expected).epsilon(1e-12));

        ModelParams up = start, down = start;
        up.b_output[c] += 1e-5;
        down.b_output[c] -= 1e-5;
        const long double fd = (oracle::network_loss(up.w_input, up, in.x, in.graph, in.y, keep, quiet) -
                                oracle::network_loss(down.w_input, down, in.x, in.graph, in.y, keep, quiet)) /
                               2e-5L;
        CHECK(std::abs(static_cast<double>(fd) - expected) < 1e-9);
    }
}

TEST_CASE("training") {
    SUBCASE("separable toy set reaches low loss") {
        Rng rng(3);
        const std::size_t n = 20;
        DenseMatrix x(n, 4);
        std::vector<int> y(n);
        for (std::size_t j = 0; j < n; ++j) {
            y[j] = static_cast<int>(j % 2);
            const double s = y[j] == 1 ? 1.0 : -1.0;
            x(j, 0) = 1.0;
            x(j, 1) = s * 1.5 + rng.uniform(-0.5, 0.5);
            x(j, 2) = -s * 1.0 + rng.uniform(-0.5, 0.5);
            x(j, 3) = rng.uniform(-1, 1);
        }
        const std::vector<std::size_t> selected{0, 1, 2};
        const auto graph = build_similarity_graph(x, selected, 0.7);
        TrainConfig cfg;
        cfg.hidden1 = 8;
        cfg.hidden2 = 8;
        cfg.learning_rate = 0.5;
        cfg.epochs = 200;
        Rng init(4);
        const auto result = train(x, y, graph, selected, cfg, init);
        CHECK(result.loss_history.size() == 200);
        CHECK(result.loss_history.back() < result.loss_history.front());
        const auto prob = forward(result.params, x, graph);
        CHECK(cross_entropy(y, prob.column(1)) < 0.1);
        for (std::size_t r = 0; r < 8; ++r) CHECK(result.params.w_input(r, 3) == 0.0);
    }

    SUBCASE("bias only converges to the class prior") {
        Rng rng(5);
        const std::size_t n = 12;
        DenseMatrix x(n, 5);
        std::vector<int> y(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            x(j, 0) = 1.0;
            for (std::size_t c = 1; c < 5; ++c) x(j, c) = rng.uniform(-1, 1);
        }
        for (std::size_t j = 0; j < 4; ++j) y[j] = 1;
        const std::vector<std::size_t> selected{0};
        const auto graph = build_similarity_graph(x, selected, 0.7);
        TrainConfig cfg;
        cfg.hidden1 = 4;
        cfg.hidden2 = 4;
        cfg.learning_rate = 1.0;
        cfg.epochs = 5000;
        Rng init(6);
        const auto result = train(x, y, graph, selected, cfg, init);
        const auto prob = forward(result.params, x, graph);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(prob(j, 1) == prob(0, 1));
            CHECK(std::abs(prob(j, 1) - 4.0 / 12.0) < 1e-6);
        }
    }

    SUBCASE("same seed, same parameters") {
        Rng rng(13);
        const auto in = fixture::make_instance(rng, 10, 8, 4, 3);
        TrainConfig cfg;
        cfg.hidden1 = 4;
        cfg.hidden2 = 3;
        Rng a(21), b(21);
        CHECK(train(in.x, in.y, in.graph, in.selected, cfg, a).params ==
              train(in.x, in.y, in.graph, in.selected, cfg, b).params);
    }

    SUBCASE("divergence is reported with its epoch") {
        Rng rng(14);
        auto in = fixture::make_instance(rng, 10, 8, 4, 3);
        for (std::size_t j = 0; j < in.x.rows(); ++j)
            for (std::size_t c = 1; c < in.x.cols(); ++c) in.x(j, c) *= 1e150;
        TrainConfig cfg;
        cfg.hidden1 = 4;
        cfg.hidden2 = 3;
        cfg.learning_rate = 1e10;
        Rng init(1);
        std::vector<std::size_t> all(in.x.cols());
        for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
        CHECK_THROWS_AS(train(in.x, in.y, SimilarityGraph::empty(in.x.rows()), all, cfg, init), TrainingDiverged);
    }

    SUBCASE("invalid configuration") {
        Rng rng(15);
        const auto in = fixture::make_instance(rng, 6, 5, 3, 3);
        TrainConfig cfg;
        cfg.learning_rate = 0.0;
        Rng init(1);
        CHECK_THROWS_AS(train(in.x, in.y, in.graph, in.selected, cfg, init), InvalidArgument);
        cfg = TrainConfig{};
        CHECK_THROWS_AS(train(in.x, in.y, in.graph, std::vector<std::size_t>{}, cfg, init), InvalidArgument);
    }
}

TEST_CASE("averaged_gradient") {
    Rng rng(16);
    const auto in = fixture::make_instance(rng, 9, 12, 4, 3);
    const auto plain = input_gradient(in.params, in.x, in.graph, in.y, DropoutMask::keep_all(4, 3), GcnNoise::zero(4, 3));

    EnsembleConfig quiet{1, 0.0, 0.0, false, 1};
    CHECK(averaged_gradient(in.params, in.x, in.graph, in.y, quiet, Rng(1)) == plain);
    quiet.dropout_count = 500;
    CHECK(averaged_gradient(in.params, in.x, in.graph, in.y, quiet, Rng(2)) == plain);

    EnsembleConfig noisy{30, 0.5, 0.01, false, 1};
    const auto serial = averaged_gradient(in.params, in.x, in.graph, in.y, noisy, Rng(3));
    noisy.threads = 4;
    CHECK(averaged_gradient(in.params, in.x, in.graph, in.y, noisy, Rng(3)) == serial);
    CHECK_FALSE(averaged_gradient(in.params, in.x, in.graph, in.y, noisy, Rng(4)) == serial);

    noisy.dropout_count = 0;
    CHECK_THROWS_AS(averaged_gradient(in.params, in.x, in.graph, in.y, noisy, Rng(3)), InvalidArgument);
}

TEST_CASE("ensemble top-1 is stable between m = 200 and m = 400") {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(1000 + seed);
        const auto in = fixture::make_instance(rng, 8, 12, 4, 4);
        EnsembleConfig cfg{200, 0.5, 0.0, false, 1};
        const auto g200 = col_norms(averaged_gradient(in.params, in.x, in.graph, in.y, cfg, Rng(seed)));
        cfg.dropout_count = 400;
        const auto g400 = col_norms(averaged_gradient(in.params, in.x, in.graph, in.y, cfg, Rng(seed + 500)));
        auto top = [](const std::vector<double>& v) {
            return std::max_element(v.begin() + 1, v.end()) - v.begin();
        };
        if (top(g200) == top(g400)) ++agree;
    }
    MESSAGE("top-1 agreement m=200 vs m=400: " << agree << "/20");
    CHECK(agree >= 18);
}
