#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stcn {

// Parameters of the four-parameter generalized sigmoid
//   f(x) = 1 / (1 + q * exp(-lambda * (x - h)))^(1/v)
// lambda, q, v must stay strictly positive; h is unconstrained.
struct TransferParams {
    double lambda = 1.0;
    double h = 0.0;
    double q = 1.0;
    double v = 1.0;

    bool valid() const {
        return std::isfinite(lambda) && std::isfinite(h) && std::isfinite(q) &&
               std::isfinite(v) && lambda > 0.0 && q > 0.0 && v > 0.0;
    }
};

// log(1 + q*exp(s)) computed without overflow for any finite s.
inline double log1p_q_exp(double q, double s) {
    if (s > 0.0) {
        // 1 + q e^s = e^s (e^-s + q)
        return s + std::log(std::exp(-s) + q);
    }
    return std::log1p(q * std::exp(s));
}

inline double generalized_sigmoid(double x, const TransferParams& p) {
    if (!std::isfinite(x)) throw std::invalid_argument("generalized_sigmoid: non-finite input");
    if (!p.valid()) throw std::invalid_argument("generalized_sigmoid: invalid parameters");
    const double s = -p.lambda * (x - p.h);
    return std::exp(-log1p_q_exp(p.q, s) / p.v);
}

// Standard logistic function with slope lambda (the q=v=1, h=0 special case).
inline double standard_sigmoid(double x, double lambda = 1.0) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-lambda * x));
    const double e = std::exp(lambda * x);
    return e / (1.0 + e);
}

// Inverse of the generalized sigmoid:
//   f^-1(y) = (-ln((y^-v - 1)/q) + h*lambda) / lambda,  defined for y in (0,1).
// y^-v - 1 is computed as expm1(-v*ln y) to keep precision as y -> 1.
inline double inverse_sigmoid(double y, const TransferParams& p) {
    if (!p.valid()) throw std::invalid_argument("inverse_sigmoid: invalid parameters");
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error("inverse_sigmoid: y must lie in (0,1)");
    const double t = std::expm1(-p.v * std::log(y));  // y^-v - 1 > 0
    return (-std::log(t / p.q) + p.h * p.lambda) / p.lambda;
}

}  // namespace stcn
