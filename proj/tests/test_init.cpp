#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stcn/dataset.hpp"
#include "stcn/init.hpp"
#include "stcn/rng.hpp"

#ifndef STCN_DATA_DIR
#define STCN_DATA_DIR "data"
#endif

using stcn::Mat;
using stcn::regression_residual;
using stcn::regression_weight;
using stcn::Vec;

namespace {

// Independent 2x2 normal-equations solve (Cramer's rule) for slope/intercept.
std::pair<double, double> least_squares_oracle(const Vec& x, const Vec& y) {
    long double n = static_cast<long double>(x.size());
    long double sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sxx += x[k] * static_cast<long double>(x[k]);
        sy += y[k];
        sxy += x[k] * static_cast<long double>(y[k]);
    }
    const long double det = n * sxx - sx * sx;
    const long double slope = (n * sxy - sx * sy) / det;
    const long double intercept = (sxx * sy - sx * sxy) / det;
    return {static_cast<double>(slope), static_cast<double>(intercept)};
}

}  // namespace

TEST_CASE("pairwise slope documented cases", "[init]") {
    Vec xj{0.1, 0.35, 0.62, 0.8};
    Vec doubled(xj.size());
    for (std::size_t k = 0; k < xj.size(); ++k) doubled[k] = 2.0 * xj[k];
    CHECK(regression_weight(xj, doubled) == Catch::Approx(2.0).margin(1e-12));

    // exactly zero covariance: K*sum(xj*xi) - sum(xj)*sum(xi) = 3*22 - 6*11 = 0
    Vec a{1.0, 2.0, 3.0};
    Vec b{5.0, 1.0, 5.0};
    CHECK(regression_weight(a, b) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("pairwise slope matches the least-squares oracle on flower columns", "[init]") {
    stcn::Dataset iris = stcn::load_csv(std::string(STCN_DATA_DIR) + "/iris.csv");
    Vec sepal_length(iris.rows.size()), petal_length(iris.rows.size());
    for (std::size_t k = 0; k < iris.rows.size(); ++k) {
        sepal_length[k] = iris.rows[k][0];
        petal_length[k] = iris.rows[k][2];
    }
    auto [slope, intercept] = least_squares_oracle(sepal_length, petal_length);
    CHECK(regression_weight(sepal_length, petal_length) ==
          Catch::Approx(slope).epsilon(1e-10));
    CHECK(regression_residual(sepal_length, petal_length) ==
          Catch::Approx(intercept).epsilon(1e-10));
}

TEST_CASE("pairwise intercept documented cases", "[init]") {
    Vec xj{0.2, 0.4, 0.9, 1.3};
    Vec through_origin(xj.size()), offset(xj.size());
    for (std::size_t k = 0; k < xj.size(); ++k) {
        through_origin[k] = 2.0 * xj[k];
        offset[k] = xj[k] + 3.0;
    }
    CHECK(regression_residual(xj, through_origin) == Catch::Approx(0.0).margin(1e-12));
    CHECK(regression_residual(xj, offset) == Catch::Approx(3.0).margin(1e-12));

    stcn::Rng rng(512);
    Vec x(25), y(25);
    for (int k = 0; k < 25; ++k) {
        x[k] = rng.uniform(0.0, 1.0);
        y[k] = rng.uniform(0.0, 1.0);
    }
    auto [slope, intercept] = least_squares_oracle(x, y);
    CHECK(regression_weight(x, y) == Catch::Approx(slope).epsilon(1e-10));
    CHECK(regression_residual(x, y) == Catch::Approx(intercept).epsilon(1e-10));
}

TEST_CASE("constant predictor raises the degenerate-column error", "[init]") {
    Vec constant{0.5, 0.5, 0.5};
    Vec varying{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(regression_weight(constant, varying), stcn::DegenerateColumn);
    CHECK_THROWS_AS(regression_residual(constant, varying), stcn::DegenerateColumn);
    // response may be constant; only the predictor variance matters
    CHECK(regression_weight(varying, constant) == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(regression_weight({0.1, 0.2}, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("slope equals covariance over predictor variance", "[init]") {
    stcn::Rng rng(888);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t K = 5 + rng.below(40);
        Vec x(K), y(K);
        for (std::size_t k = 0; k < K; ++k) {
            x[k] = rng.uniform(-2.0, 2.0);
            y[k] = rng.uniform(-2.0, 2.0);
        }
        double mx = 0, my = 0;
        for (std::size_t k = 0; k < K; ++k) {
            mx += x[k];
            my += y[k];
        }
        mx /= K;
        my /= K;
        double cov = 0, var = 0;
        for (std::size_t k = 0; k < K; ++k) {
            cov += (x[k] - mx) * (y[k] - my);
            var += (x[k] - mx) * (x[k] - mx);
        }
        REQUIRE(regression_weight(x, y) == Catch::Approx(cov / var).epsilon(1e-10));
    }
}

TEST_CASE("initial model from two identical columns", "[init]") {
    Mat data;
    stcn::Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        const double x = rng.uniform(0.05, 0.95);
        data.push_back({x, x});
    }
    stcn::Bounds bounds{{0.0, 0.0}, {1.0, 1.0}};
    auto model = stcn::build_initial_model(data, bounds, stcn::InitMode::regression, 11);
    CHECK(model.weights[0][1] == Catch::Approx(1.0).margin(1e-12));
    CHECK(model.weights[1][0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(model.weights[0][0] == 0.0);
    CHECK(model.weights[1][1] == 0.0);
    // every pairwise intercept is 0, so the offset rule gives h = min{1, 0} = 0
    CHECK(model.layers[0][0].h == Catch::Approx(0.0).margin(1e-9));
    CHECK(model.layers[0][1].h == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("offset rule clamps at one", "[init]") {
    CHECK(stcn::h_init_rule(1.7) == 1.0);
    CHECK(stcn::h_init_rule(0.42) == 0.42);
    CHECK(stcn::h_init_rule(-0.3) == -0.3);
}

TEST_CASE("flower weight signs match the known correlation structure", "[init]") {
    stcn::Dataset iris = stcn::load_csv(std::string(STCN_DATA_DIR) + "/iris.csv");
    auto [norm, bounds] = stcn::to_sigmoid_space(iris.rows);
    auto model = stcn::build_initial_model(norm, bounds, stcn::InitMode::regression, 5);
    // columns: 0 sepal length, 1 sepal width, 2 petal length, 3 petal width
    CHECK(model.weights[2][3] > 0.0);  // petal length -> petal width: positive
    CHECK(model.weights[3][2] > 0.0);
    CHECK(model.weights[0][2] > 0.0);  // sepal length -> petal length: positive
    CHECK(model.weights[1][2] < 0.0);  // sepal width -> petal measures: negative
    CHECK(model.weights[1][3] < 0.0);
    for (std::size_t i = 0; i < model.m; ++i) CHECK(model.weights[i][i] == 0.0);
}

TEST_CASE("initializer modes and expert weights", "[init]") {
    stcn::Rng rng(17);
    Mat data;
    for (int k = 0; k < 15; ++k)
        data.push_back({rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95),
                        rng.uniform(0.05, 0.95)});
    stcn::Bounds bounds{{0, 0, 0}, {1, 1, 1}};

    auto paper = stcn::build_initial_model(data, bounds, stcn::InitMode::paper, 1);
    for (const auto& p : paper.layers[0]) {
        CHECK(p.lambda == 5.0);
        CHECK(p.h == 0.5);
        CHECK(p.q == 1.0);
        CHECK(p.v == 1.0);
    }

    auto random_a = stcn::build_initial_model(data, bounds, stcn::InitMode::random, 21);
    auto random_b = stcn::build_initial_model(data, bounds, stcn::InitMode::random, 21);
    auto random_c = stcn::build_initial_model(data, bounds, stcn::InitMode::random, 22);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(random_a.layers[0][i].lambda == random_b.layers[0][i].lambda);
        CHECK(random_a.layers[0][i].lambda >= 1.0);
        CHECK(random_a.layers[0][i].lambda <= 5.0);
        CHECK(random_a.layers[0][i].q >= 0.8);
        CHECK(random_a.layers[0][i].q <= 1.2);
        CHECK(random_a.layers[0][i].v >= 0.8);
        CHECK(random_a.layers[0][i].v <= 1.2);
        CHECK(random_a.layers[0][i].h >= 0.0);
        CHECK(random_a.layers[0][i].h <= 1.0);
    }
    CHECK(random_a.layers[0][0].lambda != random_c.layers[0][0].lambda);

    // an expert matrix replaces the regression weights; its diagonal is zeroed
    Mat expert{{0.7, 0.1, -0.2}, {0.3, -0.5, 0.6}, {0.0, 0.9, 0.4}};
    auto with_expert =
        stcn::build_initial_model(data, bounds, stcn::InitMode::paper, 1, &expert);
    CHECK(with_expert.weights[0][1] == 0.1);
    CHECK(with_expert.weights[1][2] == 0.6);
    CHECK(with_expert.weights[0][0] == 0.0);
    CHECK(with_expert.weights[1][1] == 0.0);
    CHECK(with_expert.weights[2][2] == 0.0);
}

TEST_CASE("sigmoid-space transform documented cases", "[init]") {
    Mat rows{{2.0}, {6.0}, {4.0}};
    auto [norm, bounds] = stcn::to_sigmoid_space(rows);
    CHECK(bounds.lower[0] == 2.0);
    CHECK(bounds.upper[0] == 6.0);
    CHECK(norm[0][0] == Catch::Approx(0.01).margin(1e-15));
    CHECK(norm[1][0] == Catch::Approx(0.99).margin(1e-15));
    CHECK(norm[2][0] == Catch::Approx(0.5).margin(1e-15));

    // affine roundtrip before any clamping effects
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Vec back = stcn::to_original_units(norm[k], bounds);
        CHECK(back[0] == Catch::Approx(rows[k][0]).margin(1e-12));
    }

    Mat constant{{3.0, 1.0}, {3.0, 2.0}};
    CHECK_THROWS_AS(stcn::to_sigmoid_space(constant), stcn::DegenerateColumn);
}

TEST_CASE("normalized data stays inside the sigmoid margin", "[init]") {
    stcn::Dataset iris = stcn::load_csv(std::string(STCN_DATA_DIR) + "/iris.csv");
    auto [norm, bounds] = stcn::to_sigmoid_space(iris.rows);
    for (const auto& row : norm)
        for (double v : row) {
            REQUIRE(v >= 0.01);
            REQUIRE(v <= 0.99);
            // the inverse sigmoid is therefore always defined on targets
            REQUIRE(std::isfinite(
                stcn::inverse_sigmoid(v, stcn::TransferParams{1.0, 0.0, 1.0, 1.0})));
        }
}
