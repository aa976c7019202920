#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"

namespace stcn {

// Ordinary least squares predicting one target column from all others, with
// intercept. Solved by Gaussian elimination on the normal equations; a tiny
// ridge penalty is added once if the system is (near-)singular.

namespace detail {

// Solves A x = b in place; returns false on a vanishing pivot.
inline bool solve_linear(Mat A, Vec b, Vec& x) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        if (std::abs(A[pivot][col]) < 1e-12) return false;
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
            b[r] -= factor * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t col = n; col-- > 0;) {
        double acc = b[col];
        for (std::size_t c = col + 1; c < n; ++c) acc -= A[col][c] * x[c];
        x[col] = acc / A[col][col];
    }
    return true;
}

}  // namespace detail

struct OlsModel {
    std::size_t target = 0;
    Vec coefficients;  // intercept first, then one coefficient per predictor
    bool ridge_fallback = false;
};

inline OlsModel ols_fit(const Mat& data, std::size_t target) {
    if (data.empty()) throw std::invalid_argument("ols_fit: empty data");
    const std::size_t m = data[0].size();
    if (target >= m) throw std::invalid_argument("ols_fit: target out of range");
    const std::size_t p = m;  // intercept + (m-1) predictors
    // design matrix row: [1, x_j for j != target]
    Mat xtx(p, Vec(p, 0.0));
    Vec xty(p, 0.0);
    for (const auto& row : data) {
        Vec x(p);
        x[0] = 1.0;
        std::size_t d = 1;
        for (std::size_t j = 0; j < m; ++j)
            if (j != target) x[d++] = row[j];
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += x[a] * row[target];
            for (std::size_t b = 0; b < p; ++b) xtx[a][b] += x[a] * x[b];
        }
    }
    OlsModel model;
    model.target = target;
    if (!detail::solve_linear(xtx, xty, model.coefficients)) {
        for (std::size_t a = 0; a < p; ++a) xtx[a][a] += 1e-8;  // ridge fallback
        model.ridge_fallback = true;
        if (!detail::solve_linear(xtx, xty, model.coefficients))
            throw std::runtime_error("ols_fit: singular system even with ridge penalty");
    }
    return model;
}

// Prediction for one instance, clamped to the normalized range [0,1].
inline double ols_predict(const OlsModel& model, const Vec& row) {
    double acc = model.coefficients[0];
    std::size_t d = 1;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (j != model.target) acc += model.coefficients[d++] * row[j];
    return std::clamp(acc, 0.0, 1.0);
}

}  // namespace stcn
