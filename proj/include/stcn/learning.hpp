#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stcn/model.hpp"
#include "stcn/sigmoid.hpp"

namespace stcn {

struct LearnerConfig {
    double eta = 0.001;        // learning rate
    double beta = 0.85;        // momentum
    int epochs = 500;          // gradient steps per neuron per iteration
    double xi1 = 1e-5;         // stationarity tolerance on squared error delta
    double xi2 = 1e-4;         // stationarity tolerance on shape distance
    int max_iterations = 20;   // network iteration cap T
    double param_floor = 1e-4; // positivity floor for lambda, q, v

    void validate() const {
        if (!(eta > 0.0)) throw std::invalid_argument("LearnerConfig: eta must be positive");
        if (!(beta >= 0.0)) throw std::invalid_argument("LearnerConfig: beta must be non-negative");
        if (epochs < 0) throw std::invalid_argument("LearnerConfig: epochs must be non-negative");
        if (!(xi1 > 0.0) || !(xi2 > 0.0))
            throw std::invalid_argument("LearnerConfig: xi1 and xi2 must be positive");
        if (max_iterations < 1)
            throw std::invalid_argument("LearnerConfig: max_iterations must be positive");
        if (!(param_floor > 0.0))
            throw std::invalid_argument("LearnerConfig: param_floor must be positive");
    }
};

struct GradientTerms {
    double gamma = 0.0;  // 2*exp(-(A-h)*lambda), reported for the first instance
    double theta = 1.0;  // 1 + q*exp(-(A-h)*lambda), reported for the first instance
    std::array<double, 4> partials{};  // dE/d(lambda, h, q, v)
};

enum class StopReason { max_iterations, stationary, epoch_limit };

inline std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::max_iterations: return "max-iterations";
        case StopReason::stationary: return "stationary";
        case StopReason::epoch_limit: return "epoch-limit";
    }
    return "unknown";
}

struct TrainingTrace {
    Vec per_iteration_error;  // E(t) for every trained iteration
    StopReason stop_reason = StopReason::max_iterations;
    std::size_t chosen_T = 0;
};

inline std::array<double, 4> params_to_array(const TransferParams& p) {
    return {p.lambda, p.h, p.q, p.v};
}

inline TransferParams params_from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
}

// Sum of squared residuals of one neuron's sigmoid fit over the dataset.
inline double neuron_error(const TransferParams& params, const Vec& raw, const Vec& targets) {
    if (raw.size() != targets.size())
        throw std::invalid_argument("neuron_error: length mismatch");
    if (raw.empty()) throw std::invalid_argument("neuron_error: empty sample");
    double acc = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        double rho = generalized_sigmoid(raw[k], params) - targets[k];
        acc += rho * rho;
    }
    return acc;
}

namespace detail {

// One pass over the data computing both the error and its four partial
// derivatives. All exponentials go through log-space so the terms stay finite
// for |A - h| * lambda up to ~700.
inline double error_and_gradient(const TransferParams& p, const Vec& raw, const Vec& targets,
                                 std::array<double, 4>& grad, GradientTerms* terms = nullptr) {
    const double lam = p.lambda, h = p.h, q = p.q, v = p.v;
    double err = 0.0;
    grad = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double s = -lam * (raw[k] - h);          // exponent of e
        const double log_theta = log1p_q_exp(q, s);    // log(1 + q e^s) > 0
        const double f = std::exp(-log_theta / v);     // sigmoid value
        const double rho = f - targets[k];
        // core = e^s * theta^-(1 + 1/v); shared by the lambda/h/q partials
        const double core = std::exp(s - (1.0 + 1.0 / v) * log_theta);
        grad[0] += (raw[k] - h) * (2.0 * q / v) * core * rho;
        grad[1] += -(2.0 * q * lam / v) * core * rho;
        grad[2] += -(2.0 / v) * core * rho;
        grad[3] += (2.0 / (v * v)) * log_theta * f * rho;
        err += rho * rho;
        if (terms && k == 0) {
            terms->gamma = 2.0 * std::exp(s);
            terms->theta = 1.0 + q * std::exp(std::min(s, 700.0));
        }
    }
    return err;
}

}  // namespace detail

// Closed-form gradient of neuron_error in (lambda, h, q, v).
inline GradientTerms error_gradient(const TransferParams& params, const Vec& raw,
                                    const Vec& targets) {
    if (raw.size() != targets.size())
        throw std::invalid_argument("error_gradient: length mismatch");
    if (raw.empty()) throw std::invalid_argument("error_gradient: empty sample");
    GradientTerms out;
    detail::error_and_gradient(params, raw, targets, out.partials, &out);
    for (double g : out.partials)
        if (!std::isfinite(g)) throw std::runtime_error("error_gradient: non-finite partial");
    return out;
}

// Central finite differences of neuron_error; verification oracle for
// error_gradient. Shrinks the step once if a perturbation would leave the
// feasible region (lambda, q, v > 0).
inline std::array<double, 4> finite_difference_gradient(const TransferParams& params,
                                                        const Vec& raw, const Vec& targets,
                                                        double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite_difference_gradient: step must be > 0");
    auto feasible = [&](double s) {
        return params.lambda - s > 0.0 && params.q - s > 0.0 && params.v - s > 0.0;
    };
    if (!feasible(step)) {
        step /= 10.0;
        if (!feasible(step))
            throw std::invalid_argument("finite_difference_gradient: step too large for params");
    }
    std::array<double, 4> base = params_to_array(params);
    std::array<double, 4> out{};
    for (int d = 0; d < 4; ++d) {
        auto hi = base, lo = base;
        hi[d] += step;
        lo[d] -= step;
        out[d] = (neuron_error(params_from_array(hi), raw, targets) -
                  neuron_error(params_from_array(lo), raw, targets)) /
                 (2.0 * step);
    }
    return out;
}

// Momentum update: z' = beta*z + eta*grad; x' = x - z', then lambda, q, v
// projected onto [param_floor, inf).
inline std::pair<std::array<double, 4>, std::array<double, 4>> gradient_step(
    const std::array<double, 4>& x, const std::array<double, 4>& z_prev,
    const std::array<double, 4>& grad, const LearnerConfig& cfg) {
    std::array<double, 4> z{}, xn{};
    for (int d = 0; d < 4; ++d) {
        z[d] = cfg.beta * z_prev[d] + cfg.eta * grad[d];
        xn[d] = x[d] - z[d];
    }
    xn[0] = std::max(xn[0], cfg.param_floor);  // lambda
    xn[2] = std::max(xn[2], cfg.param_floor);  // q
    xn[3] = std::max(xn[3], cfg.param_floor);  // v
    return {xn, z};
}

// Gradient descent with momentum for a single neuron. Returns the final
// iterate and its error. Non-finite errors trigger up to three
// halve-eta-and-restart attempts; if all fail, the best finite iterate seen
// is returned.
inline std::pair<TransferParams, double> train_neuron(const TransferParams& init, const Vec& raw,
                                                      const Vec& targets,
                                                      const LearnerConfig& cfg) {
    LearnerConfig local = cfg;
    std::array<double, 4> best = params_to_array(init);
    double best_err = neuron_error(init, raw, targets);
    for (int attempt = 0; attempt <= 3; ++attempt) {
        std::array<double, 4> x = params_to_array(init);
        std::array<double, 4> z{};
        bool diverged = false;
        for (int epoch = 0; epoch < local.epochs; ++epoch) {
            std::array<double, 4> grad;
            double err = detail::error_and_gradient(params_from_array(x), raw, targets, grad);
            if (!std::isfinite(err)) {
                diverged = true;
                break;
            }
            if (err < best_err) {
                best_err = err;
                best = x;
            }
            auto [xn, zn] = gradient_step(x, z, grad, local);
            bool finite = true;
            double move = 0.0;
            for (int d = 0; d < 4; ++d) {
                if (!std::isfinite(xn[d])) finite = false;
                move = std::max(move, std::abs(xn[d] - x[d]));
            }
            if (!finite) {
                diverged = true;
                break;
            }
            x = xn;
            z = zn;
            if (move < 1e-9) break;  // parameter variations are infinitesimal
        }
        if (!diverged) {
            TransferParams fitted = params_from_array(x);
            double err = neuron_error(fitted, raw, targets);
            if (std::isfinite(err)) return {fitted, err};
        }
        local.eta /= 2.0;  // restart from the initial params with a gentler step
    }
    return {params_from_array(best), best_err};
}

// Squared L2 distance between two transfer-function shapes over [-bound, bound],
// composite Simpson quadrature with 1024 panels.
inline double shape_distance(const TransferParams& a, const TransferParams& b, double bound) {
    constexpr int panels = 1024;
    const double step = 2.0 * bound / panels;
    double acc = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double x = -bound + step * k;
        const double d = generalized_sigmoid(x, a) - generalized_sigmoid(x, b);
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += w * d * d;
    }
    return acc * step / 3.0;
}

enum class Stationarity { continue_training, stationary };

// Training has reached a stationary state when the global error is no longer
// moving AND every neuron's transfer function has stopped changing shape. A
// small error delta with a moving shape means a different local optimum may
// still be reached, so training continues.
inline Stationarity stationarity_check(const std::vector<TransferParams>& prev_layer,
                                       const std::vector<TransferParams>& curr_layer,
                                       double e_prev, double e_curr, const LearnerConfig& cfg) {
    if (prev_layer.size() != curr_layer.size())
        throw std::invalid_argument("stationarity_check: layer size mismatch");
    const double de = e_prev - e_curr;
    if (!(de * de < cfg.xi1)) return Stationarity::continue_training;
    const double bound = static_cast<double>(prev_layer.size());
    for (std::size_t i = 0; i < prev_layer.size(); ++i)
        if (!(shape_distance(prev_layer[i], curr_layer[i], bound) <= cfg.xi2))
            return Stationarity::continue_training;
    return Stationarity::stationary;
}

// Fit the transfer parameters of iteration t (1-based). Layers 1..t-1 must
// already be trained; each neuron starts from the previous iteration's fitted
// parameters (iteration 1 starts from the model's initial parameters) and is
// fit independently against the sigmoid-space targets.
inline std::pair<std::vector<TransferParams>, double> train_layer(const StcnModel& model,
                                                                  std::size_t t, const Mat& data,
                                                                  const LearnerConfig& cfg) {
    if (t < 1) throw std::invalid_argument("train_layer: t must be >= 1");
    if (model.layers.size() < t - 1 || model.layers.empty())
        throw std::invalid_argument("train_layer: earlier layers not trained");
    const std::size_t m = model.m;
    const std::size_t K = data.size();
    if (K == 0) throw std::invalid_argument("train_layer: empty data");
    const std::vector<TransferParams>& start =
        (t == 1) ? model.layers[0] : model.layers[t - 2];

    // evidence of iteration t-1 for every instance
    Mat psi(K);
    for (std::size_t k = 0; k < K; ++k) psi[k] = short_term_evidence(model, data[k], t - 1);

    std::vector<TransferParams> fitted(m);
    double layer_error = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        Vec raw(K), targets(K);
        for (std::size_t k = 0; k < K; ++k) {
            raw[k] = raw_activation(model.weights, psi[k], i, model.self_loops);
            targets[k] = data[k][i];
        }
        auto [params, err] = train_neuron(start[i], raw, targets, cfg);
        fitted[i] = params;
        layer_error += err;
    }
    return {fitted, layer_error};
}

// Train iterations sequentially until the stationarity criterion fires or the
// iteration cap is reached; the model keeps the error-minimizing prefix of
// trained iterations (ties broken toward fewer iterations).
inline TrainingTrace train_network(StcnModel& model, const Mat& data, const LearnerConfig& cfg) {
    cfg.validate();
    model.check_consistent();
    if (model.layers.size() != 1)
        throw std::invalid_argument("train_network: model must carry exactly the initial layer");
    TrainingTrace trace;
    trace.stop_reason = StopReason::max_iterations;
    std::vector<TransferParams> prev_fitted;
    double prev_error = 0.0;
    for (int t = 1; t <= cfg.max_iterations; ++t) {
        auto [fitted, err] = train_layer(model, static_cast<std::size_t>(t), data, cfg);
        if (t == 1)
            model.layers[0] = fitted;
        else
            model.layers.push_back(fitted);
        trace.per_iteration_error.push_back(err);
        if (t >= 2 && stationarity_check(prev_fitted, fitted, prev_error, err, cfg) ==
                          Stationarity::stationary) {
            trace.stop_reason = StopReason::stationary;
            break;
        }
        prev_fitted = fitted;
        prev_error = err;
    }
    std::size_t best_t = 1;
    for (std::size_t t = 2; t <= trace.per_iteration_error.size(); ++t)
        if (trace.per_iteration_error[t - 1] < trace.per_iteration_error[best_t - 1]) best_t = t;
    trace.chosen_T = best_t;
    model.layers.resize(best_t);
    return trace;
}

}  // namespace stcn
