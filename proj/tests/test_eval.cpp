#include <doctest.h>

#include <cmath>

#include "graces/data.hpp"
#include "graces/errors.hpp"
#include "graces/eval.hpp"
#include "graces/rng.hpp"
#include "oracles.hpp"

using namespace graces;

TEST_CASE("auroc examples") {
    CHECK(auroc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
    CHECK(auroc(std::vector<double>{3, 3, 3, 3}, std::vector<int>{0, 1, 0, 1}) == 0.5);
    CHECK(auroc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.75);
    CHECK_THROWS_AS(auroc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), InvalidArgument);
    CHECK_THROWS_AS(auroc(std::vector<double>{1, 2}, std::vector<int>{0, 1, 1}), InvalidArgument);
}

TEST_CASE("auroc equals the all-pairs count") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(199);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t j = 0; j < n; ++j) {
            // coarse values so ties are common
            scores[j] = static_cast<double>(rng.below(trial % 2 == 0 ? 5 : 1000));
            labels[j] = j < 2 ? static_cast<int>(j) : static_cast<int>(rng.below(2));
        }
        const double got = auroc(scores, labels);
        CHECK(got == oracle::auroc(scores, labels));
    }
}

TEST_CASE("auroc complement without ties") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.below(60);
        std::vector<double> scores(n), negated(n);
        std::vector<int> labels(n);
        for (std::size_t j = 0; j < n; ++j) {
            scores[j] = rng.uniform();
            negated[j] = -scores[j];
            labels[j] = j < 2 ? static_cast<int>(j) : static_cast<int>(rng.below(2));
        }
        CHECK(auroc(scores, labels) + auroc(negated, labels) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("correction_rate") {
    const std::vector<std::size_t> truth{1, 3, 5, 7};
    CHECK(correction_rate(std::vector<std::size_t>{1, 5}, truth) == 1.0);
    CHECK(correction_rate(std::vector<std::size_t>{0, 2}, truth) == 0.0);
    CHECK(correction_rate(std::vector<std::size_t>{1, 3, 5, 7, 10, 11, 12, 13, 14, 15}, truth) ==
          doctest::Approx(0.4));
    CHECK_THROWS_AS(correction_rate(std::vector<std::size_t>{}, truth), InvalidArgument);
}

TEST_CASE("paired t-test against a hand computation") {
    // differences 1, 2, 3, 4: mean 2.5, sd sqrt(5/3), t = 2.5 / (sd / 2)
    const std::vector<double> a{2, 4, 6, 8}, b{1, 2, 3, 4};
    const auto t = paired_t_test(a, b);
    CHECK(t.count == 4);
    CHECK(t.mean_difference == doctest::Approx(2.5));
    CHECK(t.t_statistic == doctest::Approx(2.5 / (std::sqrt(5.0 / 3.0) / 2.0)).epsilon(1e-12));
    // two-sided p for t = 3.8729833 with 3 degrees of freedom
    CHECK(t.p_value == doctest::Approx(0.030400).epsilon(1e-3));
    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
}

TEST_CASE("linear svm on separable one-dimensional data") {
    DenseMatrix x(20, 1);
    std::vector<int> y(20);
    for (std::size_t j = 0; j < 20; ++j) {
        y[j] = j % 2 == 0 ? 1 : 0;
        x(j, 0) = (y[j] == 1 ? 1.0 : -1.0) + 0.01 * static_cast<double>(j);
    }
    const auto model = train_linear_svm(x, y, {1.0, 100, 3});
    const auto scores = model.decision(x);
    std::size_t correct = 0;
    for (std::size_t j = 0; j < 20; ++j) correct += (scores[j] > 0) == (y[j] == 1) ? 1 : 0;
    CHECK(correct == 20);

    std::vector<int> flipped(y);
    for (int& v : flipped) v = 1 - v;
    const auto mirror = train_linear_svm(x, flipped, {1.0, 100, 3}).decision(x);
    for (std::size_t j = 0; j < 20; ++j) CHECK(mirror[j] == doctest::Approx(-scores[j]).epsilon(1e-9));

    CHECK_THROWS_AS(train_linear_svm(x, std::vector<int>(20, 1)), InvalidArgument);
    CHECK_THROWS_AS(train_linear_svm(x, y, {0.0, 100, 0}), InvalidArgument);
}

TEST_CASE("svm with the true features generalizes on easy data") {
    const Dataset d = make_classification({60, 500, 10, 2.0, 8});
    const auto parts = split(d, SplitSpec{0.7, 0.2, 0.1, 1, true});
    const double score = ranking_auroc(parts.train, parts.test, *d.truth, 10, {1.0, 100, 0});
    CHECK(score > 0.9);
    CHECK_THROWS_AS(ranking_auroc(parts.train, parts.test, *d.truth, 11, {}), InvalidArgument);
}

TEST_CASE("grid expansion order") {
    GracesGrid grid;
    grid.delta = {0.5, 0.7};
    grid.alpha = {0.2, 0.8};
    const auto configs = grid.expand(GracesConfig{});
    REQUIRE(configs.size() == 4);
    CHECK(configs[0].delta == 0.5);
    CHECK(configs[0].alpha == 0.2);
    CHECK(configs[1].delta == 0.5);
    CHECK(configs[1].alpha == 0.8);
    CHECK(configs[2].delta == 0.7);
    CHECK(configs[3].h1 == 64);
}

TEST_CASE("grid search picks the best validation cell") {
    const Dataset d = make_classification({60, 60, 5, 1.5, 2});
    GracesConfig base;
    base.h1 = 8;
    base.h2 = 4;
    base.epochs = 20;
    base.dropout_count = 3;

    GracesGrid single;
    single.alpha = {0.5};
    const auto one = grid_search(d, SplitSpec{0.5, 0.3, 0.2, 4, true}, single, base, 3);
    CHECK(one.cells.size() == 1);
    CHECK(one.best.alpha == 0.5);

    GracesGrid grid;
    grid.alpha = {0.0, 1.0};
    grid.delta = {0.3, 0.9};
    const auto result = grid_search(d, SplitSpec{0.5, 0.3, 0.2, 4, true}, grid, base, 3);
    CHECK(result.cells.size() == 4);
    for (const auto& cell : result.cells) {
        REQUIRE(cell.auroc);
        CHECK(result.best_auroc >= *cell.auroc);
    }

    // a duplicate of the winner placed later does not displace it
    GracesGrid dup;
    dup.alpha = {result.best.alpha, result.best.alpha};
    GracesConfig pinned = base;
    pinned.delta = result.best.delta;
    const auto again = grid_search(d, SplitSpec{0.5, 0.3, 0.2, 4, true}, dup, pinned, 3);
    CHECK(*again.cells[0].auroc == *again.cells[1].auroc);
    CHECK(again.best_auroc == *again.cells[0].auroc);

    GracesGrid failing;
    failing.h1 = {0};
    CHECK_THROWS_AS(grid_search(d, SplitSpec{0.5, 0.3, 0.2, 4, true}, failing, base, 3), InvalidArgument);
}
