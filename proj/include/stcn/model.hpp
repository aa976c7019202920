#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"
#include "stcn/sigmoid.hpp"

namespace stcn {

// Recurrent network with a fixed weight matrix and one list of per-neuron
// transfer parameters per iteration. Weights are never modified by learning;
// only the transfer parameters are.
struct StcnModel {
    std::size_t m = 0;                              // neuron count
    Mat weights;                                    // weights[j][i]: influence of j on i
    std::vector<std::vector<TransferParams>> layers;  // layers[t-1][i]
    Bounds bounds;                                  // original-unit column bounds
    std::uint64_t seed = 0;
    bool self_loops = false;

    std::size_t iterations() const { return layers.size(); }

    void check_consistent() const {
        if (weights.size() != m) throw std::invalid_argument("model: weight row count != m");
        for (const auto& row : weights)
            if (row.size() != m) throw std::invalid_argument("model: weight matrix not square");
        for (const auto& layer : layers)
            if (layer.size() != m) throw std::invalid_argument("model: layer size != m");
        if (!self_loops)
            for (std::size_t i = 0; i < m; ++i)
                if (weights[i][i] != 0.0)
                    throw std::invalid_argument("model: nonzero diagonal without self-loops");
    }
};

// Raw incoming activation of neuron i: sum_j w_ji * evidence_j, excluding the
// self term when self-loops are disabled.
inline double raw_activation(const Mat& weights, const Vec& evidence, std::size_t i,
                             bool self_loops = false) {
    const std::size_t m = weights.size();
    if (evidence.size() != m) throw std::invalid_argument("raw_activation: dimension mismatch");
    if (i >= m) throw std::invalid_argument("raw_activation: neuron index out of range");
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!self_loops && j == i) continue;
        acc += weights[j][i] * evidence[j];
    }
    return acc;
}

// Short-term evidence vector at iteration t. For t = 0 this is the initial
// activation itself; for t > 0 each component is the layer-t transfer function
// applied to the raw activation of the INITIAL vector (the evidence is
// recomputed from a0 every iteration; activation does not accumulate).
inline Vec short_term_evidence(const StcnModel& model, const Vec& a0, std::size_t t) {
    if (a0.size() != model.m) throw std::invalid_argument("short_term_evidence: bad a0 size");
    if (t > model.iterations()) throw std::out_of_range("short_term_evidence: t out of range");
    if (t == 0) return a0;
    Vec psi(model.m);
    for (std::size_t j = 0; j < model.m; ++j)
        psi[j] = generalized_sigmoid(raw_activation(model.weights, a0, j, model.self_loops),
                                     model.layers[t - 1][j]);
    return psi;
}

// One reasoning step: activations at iteration t from the evidence of t-1.
inline Vec stcn_step(const StcnModel& model, const Vec& a0, std::size_t t) {
    if (t < 1 || t > model.iterations()) throw std::out_of_range("stcn_step: t out of range");
    Vec psi = short_term_evidence(model, a0, t - 1);
    Vec out(model.m);
    for (std::size_t i = 0; i < model.m; ++i)
        out[i] = generalized_sigmoid(raw_activation(model.weights, psi, i, model.self_loops),
                                     model.layers[t - 1][i]);
    return out;
}

// Full trajectory [A(1), ..., A(T)]; the last element is the prediction in
// normalized space.
inline std::vector<Vec> stcn_simulate(const StcnModel& model, const Vec& a0) {
    std::vector<Vec> out;
    out.reserve(model.iterations());
    for (std::size_t t = 1; t <= model.iterations(); ++t) out.push_back(stcn_step(model, a0, t));
    return out;
}

inline Vec stcn_predict(const StcnModel& model, const Vec& a0) {
    if (model.iterations() == 0) throw std::invalid_argument("stcn_predict: untrained model");
    return stcn_step(model, a0, model.iterations());
}

// Map a normalized activation vector back to original units, clamped to the
// recorded per-variable bounds.
inline Vec to_original_units(const StcnModel& model, const Vec& normalized) {
    return to_original_units(normalized, model.bounds);
}

}  // namespace stcn
