#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"
#include "stcn/model.hpp"
#include "stcn/rng.hpp"

namespace stcn {

namespace detail {
inline void regression_sums(const Vec& xj, const Vec& xi, double& sj, double& sjj, double& si,
                            double& sji, double& denom) {
    if (xj.size() != xi.size() || xj.size() < 2)
        throw std::invalid_argument("pairwise regression: need equal columns of length >= 2");
    const double K = static_cast<double>(xj.size());
    sj = sjj = si = sji = 0.0;
    for (std::size_t k = 0; k < xj.size(); ++k) {
        sj += xj[k];
        sjj += xj[k] * xj[k];
        si += xi[k];
        sji += xj[k] * xi[k];
    }
    denom = K * sjj - sj * sj;
    if (denom == 0.0) throw DegenerateColumn("zero-variance predictor column");
}
}  // namespace detail

// Slope of the simple regression of response xi on predictor xj.
inline double regression_weight(const Vec& xj, const Vec& xi) {
    double sj, sjj, si, sji, denom;
    detail::regression_sums(xj, xi, sj, sjj, si, sji, denom);
    const double K = static_cast<double>(xj.size());
    return (K * sji - sj * si) / denom;
}

// Intercept of the same pairwise regression.
inline double regression_residual(const Vec& xj, const Vec& xi) {
    double sj, sjj, si, sji, denom;
    detail::regression_sums(xj, xi, sj, sjj, si, sji, denom);
    return (sjj * si - sji * sj) / denom;
}

enum class InitMode {
    regression,  // regression weights; h from the residual rule; lambda/q/v random
    paper,       // regression weights; every neuron starts at (5, 0.5, 1, 1)
    random       // regression weights; all four transfer params random
};

inline InitMode parse_init_mode(const std::string& s) {
    if (s == "regression") return InitMode::regression;
    if (s == "paper") return InitMode::paper;
    if (s == "random") return InitMode::random;
    throw std::invalid_argument("unknown init mode: " + s);
}

// Offset initialization: h = min{1, sum of pairwise intercepts}.
inline double h_init_rule(double residual_sum) { return std::min(1.0, residual_sum); }

// Build the initial model from sigmoid-space data: pairwise regression weights
// (zero diagonal), the offset rule for h, and the configured initializer for
// the remaining transfer parameters. expert_weights, when provided, overrides
// the regression weights entirely.
inline StcnModel build_initial_model(const Mat& data, const Bounds& bounds, InitMode mode,
                                     std::uint64_t seed, const Mat* expert_weights = nullptr) {
    if (data.empty()) throw std::invalid_argument("build_initial_model: empty data");
    const std::size_t m = data[0].size();
    if (m < 2) throw std::invalid_argument("build_initial_model: need at least 2 variables");
    StcnModel model;
    model.m = m;
    model.bounds = bounds;
    model.seed = seed;

    std::vector<Vec> cols(m, Vec(data.size()));
    for (std::size_t k = 0; k < data.size(); ++k)
        for (std::size_t i = 0; i < m; ++i) cols[i][k] = data[k][i];

    if (expert_weights) {
        if (expert_weights->size() != m)
            throw std::invalid_argument("build_initial_model: expert weight size mismatch");
        model.weights = *expert_weights;
        if (!model.self_loops)
            for (std::size_t i = 0; i < m; ++i) model.weights[i][i] = 0.0;
    } else {
        model.weights.assign(m, Vec(m, 0.0));
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i) {
                if (i == j) continue;
                try {
                    model.weights[j][i] = regression_weight(cols[j], cols[i]);
                } catch (const DegenerateColumn&) {
                    model.weights[j][i] = 0.0;  // degenerate predictor: no influence
                }
            }
    }

    Rng rng(mix_seed(seed, "init-params"));
    std::vector<TransferParams> layer(m);
    for (std::size_t i = 0; i < m; ++i) {
        TransferParams p;
        switch (mode) {
            case InitMode::paper:
                p = {5.0, 0.5, 1.0, 1.0};
                break;
            case InitMode::regression: {
                // sum over all predictors j; the self-pair intercept is
                // analytically zero, so including it keeps the rule literal
                double rsum = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    try {
                        rsum += regression_residual(cols[j], cols[i]);
                    } catch (const DegenerateColumn&) {
                    }
                }
                p.lambda = rng.uniform(1.0, 5.0);
                p.h = h_init_rule(rsum);
                p.q = rng.uniform(0.8, 1.2);
                p.v = rng.uniform(0.8, 1.2);
                break;
            }
            case InitMode::random:
                p.lambda = rng.uniform(1.0, 5.0);
                p.h = rng.uniform(0.0, 1.0);
                p.q = rng.uniform(0.8, 1.2);
                p.v = rng.uniform(0.8, 1.2);
                break;
        }
        layer[i] = p;
    }
    model.layers.assign(1, layer);
    model.check_consistent();
    return model;
}

}  // namespace stcn
