#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"
#include "stcn/sigmoid.hpp"

namespace stcn {

// Sigmoid fuzzy cognitive map: weights in [-1,1], zero diagonal, shared slope.
struct FcmModel {
    Mat weights;          // weights[j][i]
    double lambda = 1.0;  // shared sigmoid slope
    int max_steps = 100;
    double tolerance = 1e-5;

    std::size_t size() const { return weights.size(); }

    void check() const {
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (weights[j].size() != weights.size())
                throw std::invalid_argument("FcmModel: weight matrix not square");
            for (double w : weights[j])
                if (!(w >= -1.0 && w <= 1.0))
                    throw std::invalid_argument("FcmModel: weight outside [-1,1]");
        }
        if (!(lambda > 0.0)) throw std::invalid_argument("FcmModel: lambda must be positive");
    }
};

enum class AttractorKind { fixed_point, limit_cycle, chaos };

struct AttractorReport {
    AttractorKind kind = AttractorKind::chaos;
    std::optional<int> onset;   // first step of the stabilized regime
    std::optional<int> period;  // cycle length (>= 2) for limit cycles
    std::vector<Vec> trajectory;  // states A(0), A(1), ...
};

// One inference step, excluding self-influence.
inline Vec fcm_step(const FcmModel& model, const Vec& state) {
    const std::size_t m = model.size();
    if (state.size() != m) throw std::invalid_argument("fcm_step: dimension mismatch");
    Vec next(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) acc += model.weights[j][i] * state[j];
        next[i] = standard_sigmoid(acc, model.lambda);
    }
    return next;
}

namespace detail {
inline bool states_equal(const Vec& a, const Vec& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}
}  // namespace detail

// Iterate the map from a0 and classify the trajectory: fixed point when
// consecutive states coincide, limit cycle when the state revisits an earlier
// one with period >= 2, chaos otherwise (within max_steps).
inline AttractorReport fcm_infer(const FcmModel& model, const Vec& a0) {
    AttractorReport report;
    report.trajectory.push_back(a0);
    Vec state = a0;
    for (int t = 1; t <= model.max_steps; ++t) {
        Vec next = fcm_step(model, state);
        report.trajectory.push_back(next);
        if (detail::states_equal(next, state, model.tolerance)) {
            report.kind = AttractorKind::fixed_point;
            report.onset = t - 1;  // the step whose state first stopped moving
            return report;
        }
        // look for a revisit of any earlier state (cycle detection)
        for (int back = t - 2; back >= 0; --back) {
            if (detail::states_equal(next, report.trajectory[back], model.tolerance)) {
                report.kind = AttractorKind::limit_cycle;
                report.onset = back;
                report.period = t - back;
                return report;
            }
        }
        state = std::move(next);
    }
    report.kind = AttractorKind::chaos;
    return report;
}

// Reachable activation interval of neuron i: regardless of the state, the raw
// input lies in [minC, maxC] where each weight contributes its worst case
// (negative weights can contribute at most 0, positive at most w), so the
// activation after one step is confined to [f(lambda*minC), f(lambda*maxC)].
inline std::pair<double, double> activation_bounds(const FcmModel& model, std::size_t i) {
    const std::size_t m = model.size();
    if (i >= m) throw std::invalid_argument("activation_bounds: neuron index out of range");
    double min_c = 0.0, max_c = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const double w = model.weights[j][i];
        const double sign = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
        min_c += w * (1.0 - sign) / 2.0;
        max_c += w * (1.0 + sign) / 2.0;
    }
    return {standard_sigmoid(model.lambda * min_c), standard_sigmoid(model.lambda * max_c)};
}

}  // namespace stcn
