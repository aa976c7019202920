#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "stcn/dataset.hpp"
#include "stcn/fcm.hpp"
#include "stcn/rng.hpp"

namespace stcn {

// Real-coded genetic algorithm learning the off-diagonal FCM weights.
struct GaConfig {
    int generations = 100;
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;   // per gene
    double blx_alpha = 0.5;       // BLX crossover expansion
    int tournament = 2;
};

namespace detail {

inline Mat genome_to_weights(const Vec& genome, std::size_t m) {
    Mat W(m, Vec(m, 0.0));
    std::size_t idx = 0;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            if (i != j) W[j][i] = genome[idx++];
    return W;
}

// One-step reconstruction MSE of the candidate FCM over the dataset.
inline double fcm_reconstruction_mse(const FcmModel& model, const Mat& data) {
    double acc = 0.0;
    std::size_t cells = 0;
    for (const auto& row : data) {
        Vec pred = fcm_step(model, row);
        for (std::size_t i = 0; i < row.size(); ++i) {
            const double d = pred[i] - row[i];
            acc += d * d;
            ++cells;
        }
    }
    return acc / static_cast<double>(cells);
}

}  // namespace detail

// Elitist RCGA: tournament selection, BLX crossover, uniform-resample
// mutation, fitness 1/(1+MSE). Population size equals the genome length
// (raised to 4 for degenerate cases). best_fitness_history, when given,
// receives the elite fitness after every generation.
inline FcmModel rcga_learn(const Mat& data, const GaConfig& cfg, Rng& rng, double lambda = 1.0,
                           Vec* best_fitness_history = nullptr) {
    if (data.empty()) throw std::invalid_argument("rcga_learn: empty data");
    const std::size_t m = data[0].size();
    const std::size_t genes = m * (m - 1);
    const std::size_t pop_size = std::max<std::size_t>(genes, 4);

    auto fitness_of = [&](const Vec& genome) {
        FcmModel cand{detail::genome_to_weights(genome, m), lambda};
        return 1.0 / (1.0 + detail::fcm_reconstruction_mse(cand, data));
    };

    std::vector<Vec> pop(pop_size, Vec(genes));
    for (auto& g : pop)
        for (auto& x : g) x = rng.uniform(-1.0, 1.0);
    Vec fitness(pop_size);
    for (std::size_t p = 0; p < pop_size; ++p) fitness[p] = fitness_of(pop[p]);

    auto tournament_pick = [&]() -> const Vec& {
        std::size_t best = rng.below(pop_size);
        for (int c = 1; c < cfg.tournament; ++c) {
            std::size_t challenger = rng.below(pop_size);
            if (fitness[challenger] > fitness[best]) best = challenger;
        }
        return pop[best];
    };

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Vec> next;
        next.reserve(pop_size);
        // elitism: the incumbent best survives unchanged
        std::size_t elite = 0;
        for (std::size_t p = 1; p < pop_size; ++p)
            if (fitness[p] > fitness[elite]) elite = p;
        next.push_back(pop[elite]);
        while (next.size() < pop_size) {
            const Vec& a = tournament_pick();
            const Vec& b = tournament_pick();
            Vec child(genes);
            if (rng.uniform01() < cfg.crossover_prob) {
                for (std::size_t g = 0; g < genes; ++g) {
                    const double lo = std::min(a[g], b[g]);
                    const double hi = std::max(a[g], b[g]);
                    const double spread = hi - lo;
                    child[g] = rng.uniform(lo - cfg.blx_alpha * spread, hi + cfg.blx_alpha * spread);
                }
            } else {
                child = a;
            }
            for (std::size_t g = 0; g < genes; ++g) {
                if (rng.uniform01() < cfg.mutation_prob) child[g] = rng.uniform(-1.0, 1.0);
                child[g] = std::clamp(child[g], -1.0, 1.0);
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (std::size_t p = 0; p < pop_size; ++p) fitness[p] = fitness_of(pop[p]);
        if (best_fitness_history)
            best_fitness_history->push_back(*std::max_element(fitness.begin(), fitness.end()));
    }

    std::size_t best = 0;
    for (std::size_t p = 1; p < pop_size; ++p)
        if (fitness[p] > fitness[best]) best = p;
    FcmModel model{detail::genome_to_weights(pop[best], m), lambda};
    model.check();
    return model;
}

}  // namespace stcn
