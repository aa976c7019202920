#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"

namespace stcn {

// Discrete synchronous Hopfield associative memory over bipolarized patterns.

inline Vec bipolarize(const Vec& pattern, double threshold = 0.5) {
    Vec s(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) s[i] = pattern[i] > threshold ? 1.0 : -1.0;
    return s;
}

// Hebbian storage: W = (1/K) * sum_k s_k s_k^T with zero diagonal.
inline Mat hopfield_train(const Mat& data) {
    if (data.empty()) throw std::invalid_argument("hopfield_train: empty data");
    const std::size_t m = data[0].size();
    const double K = static_cast<double>(data.size());
    Mat W(m, Vec(m, 0.0));
    for (const auto& row : data) {
        Vec s = bipolarize(row);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) W[a][b] += s[a] * s[b] / K;
    }
    for (std::size_t a = 0; a < m; ++a) W[a][a] = 0.0;
    return W;
}

struct HopfieldRecall {
    Vec state;        // components in {0,1}
    bool converged = false;
};

// Synchronous sign recall from a [0,1] probe: bipolarize, iterate sign(W s)
// (zero net input keeps the previous component) until a fixed point or the
// sweep limit, then map back to {0,1}.
inline HopfieldRecall hopfield_recall(const Mat& W, const Vec& probe, int max_sweeps = 100) {
    const std::size_t m = W.size();
    if (probe.size() != m) throw std::invalid_argument("hopfield_recall: dimension mismatch");
    Vec s = bipolarize(probe);
    HopfieldRecall out;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Vec next(m);
        for (std::size_t i = 0; i < m; ++i) {
            double net = 0.0;
            for (std::size_t j = 0; j < m; ++j) net += W[j][i] * s[j];
            next[i] = net > 0.0 ? 1.0 : (net < 0.0 ? -1.0 : s[i]);
        }
        if (next == s) {
            out.converged = true;
            break;
        }
        s = std::move(next);
    }
    out.state.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.state[i] = (s[i] + 1.0) / 2.0;
    return out;
}

}  // namespace stcn
