#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stcn/fcm.hpp"
#include "stcn/hopfield.hpp"
#include "stcn/ols.hpp"
#include "stcn/rcga.hpp"
#include "stcn/rng.hpp"

using stcn::FcmModel;
using stcn::Mat;
using stcn::Vec;

TEST_CASE("map inference documented cases", "[fcm]") {
    SECTION("zero weights reach the 0.5 fixed point in one step") {
        FcmModel model{Mat(3, Vec(3, 0.0))};
        auto report = stcn::fcm_infer(model, {0.1, 0.9, 0.4});
        CHECK(report.kind == stcn::AttractorKind::fixed_point);
        REQUIRE(report.onset.has_value());
        CHECK(*report.onset == 1);
        for (double v : report.trajectory.back())
            CHECK(v == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("food-chain map classifies like a direct trajectory inspection") {
        // nodes: 0 predator, 1 prey, 2 grass; prey feeds predator, predator
        // culls prey, prey eats grass, grass feeds prey
        FcmModel model{Mat(3, Vec(3, 0.0))};
        model.weights[0][1] = -1.0;  // predator -> prey
        model.weights[1][0] = 1.0;   // prey -> predator
        model.weights[1][2] = -1.0;  // prey -> grass
        model.weights[2][1] = 1.0;   // grass -> prey
        Vec a0{0.5, 0.5, 0.5};
        auto report = stcn::fcm_infer(model, a0);

        // independent re-simulation of the same recurrence
        std::vector<Vec> traj{a0};
        for (int t = 0; t < model.max_steps; ++t) {
            const Vec& s = traj.back();
            Vec next(3);
            for (int i = 0; i < 3; ++i) {
                double acc = 0.0;
                for (int j = 0; j < 3; ++j)
                    if (j != i) acc += model.weights[j][i] * s[j];
                next[i] = 1.0 / (1.0 + std::exp(-model.lambda * acc));
            }
            traj.push_back(next);
        }
        for (std::size_t t = 0; t < report.trajectory.size(); ++t)
            for (int i = 0; i < 3; ++i)
                REQUIRE(report.trajectory[t][i] == Catch::Approx(traj[t][i]).margin(1e-12));

        // independent classification: scan for a revisited state
        bool fixed = false;
        for (std::size_t t = 1; t < traj.size() && !fixed; ++t)
            fixed = stcn::detail::states_equal(traj[t], traj[t - 1], model.tolerance);
        if (fixed) {
            CHECK(report.kind == stcn::AttractorKind::fixed_point);
        } else {
            CHECK(report.kind != stcn::AttractorKind::fixed_point);
        }
    }

    SECTION("antisymmetric pair with steep slope settles into a two-cycle") {
        FcmModel model{Mat(2, Vec(2, 0.0))};
        model.weights[0][1] = -10.0;
        model.weights[1][0] = -10.0;
        model.lambda = 5.0;
        auto report = stcn::fcm_infer(model, {1.0, 1.0});
        CHECK(report.kind == stcn::AttractorKind::limit_cycle);
        REQUIRE(report.period.has_value());
        CHECK(*report.period == 2);
    }
}

TEST_CASE("self-influence is excluded from inference", "[fcm]") {
    stcn::Rng rng(1234);
    FcmModel base{Mat(4, Vec(4, 0.0))};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            if (i != j) base.weights[j][i] = rng.uniform(-1.0, 1.0);
    FcmModel perturbed = base;
    for (int i = 0; i < 4; ++i) perturbed.weights[i][i] = rng.uniform(-1.0, 1.0);

    Vec a0{0.2, 0.8, 0.5, 0.6};
    auto ra = stcn::fcm_infer(base, a0);
    auto rb = stcn::fcm_infer(perturbed, a0);
    REQUIRE(ra.trajectory.size() == rb.trajectory.size());
    for (std::size_t t = 0; t < ra.trajectory.size(); ++t)
        CHECK(ra.trajectory[t] == rb.trajectory[t]);
}

TEST_CASE("activation bounds documented cases", "[fcm]") {
    SECTION("two inhibiting inputs reach the documented floor") {
        FcmModel model{Mat(3, Vec(3, 0.0))};
        model.weights[0][2] = -1.0;
        model.weights[1][2] = -1.0;
        auto [lo, hi] = stcn::activation_bounds(model, 2);
        CHECK(lo == Catch::Approx(0.1192).margin(5e-5));
        CHECK(hi == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("no incoming weights pins the neuron at one half") {
        FcmModel model{Mat(2, Vec(2, 0.0))};
        auto [lo, hi] = stcn::activation_bounds(model, 0);
        CHECK(lo == Catch::Approx(0.5).margin(1e-12));
        CHECK(hi == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("random maps never escape their bounds") {
        stcn::Rng rng(5099);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t m = 2 + rng.below(5);
            FcmModel model{Mat(m, Vec(m, 0.0))};
            model.lambda = rng.uniform(0.5, 3.0);
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t i = 0; i < m; ++i)
                    if (i != j) model.weights[j][i] = rng.uniform(-1.0, 1.0);
            std::vector<std::pair<double, double>> bounds;
            for (std::size_t i = 0; i < m; ++i)
                bounds.push_back(stcn::activation_bounds(model, i));
            for (int start = 0; start < 10; ++start) {
                Vec state(m);
                for (auto& v : state) v = rng.uniform01();
                for (int t = 0; t < 20; ++t) {
                    state = stcn::fcm_step(model, state);
                    for (std::size_t i = 0; i < m; ++i) {
                        REQUIRE(state[i] >= bounds[i].first - 1e-12);
                        REQUIRE(state[i] <= bounds[i].second + 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("genetic weight learning documented cases", "[rcga]") {
    // generator map; its near-fixed-point states form the training data
    FcmModel generator{Mat(3, Vec(3, 0.0))};
    generator.weights[0][1] = 0.6;
    generator.weights[1][2] = -0.4;
    generator.weights[2][0] = 0.5;
    generator.weights[1][0] = -0.3;

    stcn::Rng data_rng(42);
    Mat data;
    for (int s = 0; s < 12; ++s) {
        Vec state(3);
        for (auto& v : state) v = data_rng.uniform01();
        for (int t = 0; t < 60; ++t) state = stcn::fcm_step(generator, state);
        data.push_back(state);
    }
    const double generator_mse = stcn::detail::fcm_reconstruction_mse(generator, data);

    stcn::GaConfig cfg;
    Vec history;
    stcn::Rng rng(2024);
    FcmModel learned = stcn::rcga_learn(data, cfg, rng, 1.0, &history);

    const double learned_mse = stcn::detail::fcm_reconstruction_mse(learned, data);
    CHECK(learned_mse <= generator_mse + 1e-3);

    // elitism: best fitness never decreases across the 100 generations
    REQUIRE(history.size() == static_cast<std::size_t>(cfg.generations));
    for (std::size_t g = 1; g < history.size(); ++g) REQUIRE(history[g] >= history[g - 1]);

    // weights remain in [-1, 1] and the diagonal stays clear
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) {
            REQUIRE(learned.weights[j][i] >= -1.0);
            REQUIRE(learned.weights[j][i] <= 1.0);
            if (i == j) REQUIRE(learned.weights[j][i] == 0.0);
        }

    // fixed seed reproduces the matrix exactly
    stcn::Rng rng2(2024);
    FcmModel again = stcn::rcga_learn(data, cfg, rng2, 1.0);
    CHECK(learned.weights == again.weights);
}

TEST_CASE("associative recall documented cases", "[hopfield]") {
    SECTION("a stored pattern is a fixed point") {
        Mat data{{1.0, 0.0, 1.0, 0.0, 1.0}};
        Mat W = stcn::hopfield_train(data);
        auto recall = stcn::hopfield_recall(W, data[0]);
        CHECK(recall.converged);
        CHECK(recall.state == data[0]);
    }

    SECTION("two orthogonal patterns are both fixed points") {
        Mat data{{1.0, 1.0, 1.0, 1.0}, {1.0, 0.0, 1.0, 0.0}};
        Mat W = stcn::hopfield_train(data);
        for (const auto& pattern : data) {
            auto recall = stcn::hopfield_recall(W, pattern);
            CHECK(recall.converged);
            CHECK(recall.state == pattern);
        }
    }

    SECTION("training produces a symmetric zero-diagonal matrix") {
        stcn::Rng rng(55);
        Mat data;
        for (int k = 0; k < 6; ++k) {
            Vec row(7);
            for (auto& v : row) v = rng.uniform01();
            data.push_back(row);
        }
        Mat W = stcn::hopfield_train(data);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(W[i][i] == 0.0);
            for (std::size_t j = 0; j < 7; ++j) CHECK(W[i][j] == W[j][i]);
        }
    }

    SECTION("single-bit corruption of a lone stored pattern is repaired") {
        Mat data{{1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0}};
        Mat W = stcn::hopfield_train(data);
        for (std::size_t flip = 0; flip < 10; ++flip) {
            Vec probe = data[0];
            probe[flip] = 1.0 - probe[flip];
            auto recall = stcn::hopfield_recall(W, probe);
            CHECK(recall.converged);
            REQUIRE(recall.state == data[0]);
        }
    }

    SECTION("a zero matrix returns the bipolarized probe unchanged") {
        Mat W(4, Vec(4, 0.0));
        auto recall = stcn::hopfield_recall(W, {0.9, 0.1, 0.7, 0.2});
        CHECK(recall.converged);
        CHECK(recall.state == Vec{1.0, 0.0, 1.0, 0.0});
    }
}

TEST_CASE("least squares baseline documented cases", "[ols]") {
    SECTION("exactly linear data fits with zero residual") {
        Mat rows;
        stcn::Rng rng(9);
        for (int k = 0; k < 30; ++k) {
            const double a = rng.uniform(0.1, 0.9);
            const double b = rng.uniform(0.1, 0.9);
            rows.push_back({a, b, 0.25 + 0.4 * a + 0.2 * b});
        }
        auto model = stcn::ols_fit(rows, 2);
        CHECK_FALSE(model.ridge_fallback);
        CHECK(model.coefficients[0] == Catch::Approx(0.25).margin(1e-9));
        CHECK(model.coefficients[1] == Catch::Approx(0.4).margin(1e-9));
        CHECK(model.coefficients[2] == Catch::Approx(0.2).margin(1e-9));
        for (const auto& row : rows)
            CHECK(stcn::ols_predict(model, row) == Catch::Approx(row[2]).margin(1e-9));
    }

    SECTION("coefficients match an independent normal-equations solve") {
        stcn::Rng rng(41);
        Mat rows;
        for (int k = 0; k < 25; ++k)
            rows.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        auto model = stcn::ols_fit(rows, 1);  // predict column 1 from 0 and 2

        // independent solve of (X^T X) beta = X^T y with explicit elimination
        const std::size_t n = rows.size();
        std::vector<std::array<double, 3>> X(n);
        Vec y(n);
        for (std::size_t k = 0; k < n; ++k) {
            X[k] = {1.0, rows[k][0], rows[k][2]};
            y[k] = rows[k][1];
        }
        double A[3][4] = {};
        for (std::size_t k = 0; k < n; ++k)
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) A[r][c] += X[k][r] * X[k][c];
                A[r][3] += X[k][r] * y[k];
            }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
            for (int c = 0; c < 4; ++c) std::swap(A[col][c], A[piv][c]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double factor = A[r][col] / A[col][col];
                for (int c = 0; c < 4; ++c) A[r][c] -= factor * A[col][c];
            }
        }
        for (int r = 0; r < 3; ++r)
            CHECK(model.coefficients[r] == Catch::Approx(A[r][3] / A[r][r]).epsilon(1e-8));
    }

    SECTION("rank deficiency falls back to ridge") {
        // duplicated predictor column: X^T X is singular
        Mat rows;
        stcn::Rng rng(12);
        for (int k = 0; k < 10; ++k) {
            const double a = rng.uniform01();
            rows.push_back({a, a, rng.uniform01()});
        }
        auto model = stcn::ols_fit(rows, 2);
        CHECK(model.ridge_fallback);
        for (double c : model.coefficients) CHECK(std::isfinite(c));
        CHECK(std::isfinite(stcn::ols_predict(model, rows[0])));
    }

    SECTION("predictions clamp into the unit interval") {
        Mat rows;
        for (int k = 0; k < 6; ++k) {
            const double a = 0.1 + 0.15 * k;
            rows.push_back({a, 0.2 + 1.1 * a});
        }
        auto model = stcn::ols_fit(rows, 1);
        CHECK(stcn::ols_predict(model, {50.0, 0.0}) == 1.0);
        CHECK(stcn::ols_predict(model, {-50.0, 0.0}) == 0.0);
    }
}
