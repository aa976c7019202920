#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stcn/dataset.hpp"
#include "stcn/hopfield.hpp"
#include "stcn/init.hpp"
#include "stcn/learning.hpp"
#include "stcn/model.hpp"
#include "stcn/ols.hpp"
#include "stcn/rcga.hpp"
#include "stcn/rng.hpp"

namespace stcn {

enum class Protocol { regression, associative };

inline Protocol parse_protocol(const std::string& s) {
    if (s == "regression") return Protocol::regression;
    if (s == "associative") return Protocol::associative;
    throw std::invalid_argument("unknown protocol: " + s);
}

enum class CorruptMode { field, record };

inline CorruptMode parse_corrupt_mode(const std::string& s) {
    if (s == "field") return CorruptMode::field;
    if (s == "record") return CorruptMode::record;
    throw std::invalid_argument("unknown corrupt mode: " + s);
}

// Seeded shuffle followed by a contiguous partition into folds of
// near-equal size (the first K mod folds folds get the extra instance).
inline std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> kfold_split(
    std::size_t K, std::size_t folds, Rng& rng) {
    if (folds < 1 || folds > K) throw std::invalid_argument("kfold_split: folds must be in [1,K]");
    std::vector<std::size_t> idx(K);
    for (std::size_t i = 0; i < K; ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
    const std::size_t base = K / folds, extra = K % folds;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        std::vector<std::size_t> test(idx.begin() + pos, idx.begin() + pos + len);
        std::vector<std::size_t> train;
        train.reserve(K - len);
        train.insert(train.end(), idx.begin(), idx.begin() + pos);
        train.insert(train.end(), idx.begin() + pos + len, idx.end());
        out.emplace_back(std::move(train), std::move(test));
        pos += len;
    }
    return out;
}

// Zero out data with probability p: independently per cell (field mode) or
// per whole row (record mode).
inline Mat corrupt(const Mat& rows, double p, CorruptMode mode, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("corrupt: p must be in [0,1]");
    Mat out = rows;
    for (auto& row : out) {
        if (mode == CorruptMode::record) {
            if (rng.uniform01() < p)
                for (auto& cell : row) cell = 0.0;
        } else {
            for (auto& cell : row)
                if (rng.uniform01() < p) cell = 0.0;
        }
    }
    return out;
}

// Mean squared error over all (instance, variable) cells.
inline double evaluate_mse(const Mat& predictions, const Mat& truth) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("evaluate_mse: row count mismatch");
    double acc = 0.0;
    std::size_t cells = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (predictions[k].size() != truth[k].size())
            throw std::invalid_argument("evaluate_mse: column count mismatch");
        for (std::size_t i = 0; i < truth[k].size(); ++i) {
            const double d = predictions[k][i] - truth[k][i];
            acc += d * d;
            ++cells;
        }
    }
    if (cells == 0) throw std::invalid_argument("evaluate_mse: empty inputs");
    return acc / static_cast<double>(cells);
}

struct BenchmarkConfig {
    LearnerConfig learner;
    InitMode init = InitMode::regression;
    Protocol protocol = Protocol::regression;
    std::size_t folds = 10;
    double corrupt_p = 0.2;
    CorruptMode corrupt_mode = CorruptMode::field;
    GaConfig ga;
    double fcm_lambda = 1.0;
    std::size_t jobs = 1;  // worker threads for dataset x algorithm cells
};

struct BenchmarkCell {
    std::optional<double> mean_mse;  // empty when failed
    Vec fold_mses;
    std::string error;  // failure reason when mean_mse is empty
};

struct BenchmarkReport {
    std::vector<std::string> datasets;
    std::vector<std::string> algorithms;
    std::map<std::string, std::map<std::string, BenchmarkCell>> cells;  // dataset -> algorithm
    std::uint64_t seed = 0;
};

inline std::vector<std::string> default_algorithms(Protocol protocol) {
    if (protocol == Protocol::regression) return {"STCN", "OLS"};
    return {"STCN", "FCM-RCGA", "Hopfield"};
}

namespace detail {

inline Mat gather(const Mat& rows, const std::vector<std::size_t>& idx) {
    Mat out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(rows[i]);
    return out;
}

// Predictions of one algorithm for a test fold: probe is the normalized input
// (clean for the regression protocol, corrupted for the associative one).
inline Mat predict_fold(const std::string& algorithm, const Mat& train_norm, const Mat& probe_norm,
                        const Bounds& bounds, const BenchmarkConfig& cfg, std::uint64_t cell_seed) {
    if (algorithm == "STCN") {
        StcnModel model = build_initial_model(train_norm, bounds, cfg.init, cell_seed);
        train_network(model, train_norm, cfg.learner);
        Mat preds;
        preds.reserve(probe_norm.size());
        for (const auto& row : probe_norm) preds.push_back(stcn_predict(model, row));
        return preds;
    }
    if (algorithm == "OLS") {
        const std::size_t m = train_norm[0].size();
        std::vector<OlsModel> models;
        models.reserve(m);
        for (std::size_t target = 0; target < m; ++target)
            models.push_back(ols_fit(train_norm, target));
        Mat preds(probe_norm.size(), Vec(m, 0.0));
        for (std::size_t k = 0; k < probe_norm.size(); ++k)
            for (std::size_t target = 0; target < m; ++target)
                preds[k][target] = ols_predict(models[target], probe_norm[k]);
        return preds;
    }
    if (algorithm == "FCM-RCGA") {
        Rng rng(cell_seed);
        FcmModel fcm = rcga_learn(train_norm, cfg.ga, rng, cfg.fcm_lambda);
        Mat preds;
        preds.reserve(probe_norm.size());
        for (const auto& row : probe_norm) preds.push_back(fcm_step(fcm, row));
        return preds;
    }
    if (algorithm == "Hopfield") {
        Mat W = hopfield_train(train_norm);
        Mat preds;
        preds.reserve(probe_norm.size());
        for (const auto& row : probe_norm) preds.push_back(hopfield_recall(W, row).state);
        return preds;
    }
    throw std::invalid_argument("unknown algorithm: " + algorithm);
}

// One (dataset, algorithm) cell end-to-end. Folds and corruption derive from
// dataset-level seeds, so every algorithm sees the same splits and the same
// corrupted probes (paired comparison); the training seed is per-cell. The
// function touches no shared state, so cells can run on any thread in any
// order with identical results.
inline BenchmarkCell run_cell(const Mat& sorted_rows, const std::string& ds_name,
                              const std::string& algorithm, const BenchmarkConfig& cfg,
                              std::uint64_t seed) {
    BenchmarkCell cell;
    try {
        Rng split_rng(mix_seed(seed, ds_name + "/kfold"));
        auto folds = kfold_split(sorted_rows.size(), cfg.folds, split_rng);
        for (std::size_t f = 0; f < folds.size(); ++f) {
            Mat train_rows = gather(sorted_rows, folds[f].first);
            Mat test_rows = gather(sorted_rows, folds[f].second);
            Bounds bounds = compute_bounds(train_rows);
            Mat train_norm = normalize_rows(train_rows, bounds);
            Mat test_norm = normalize_rows(test_rows, bounds);
            Mat probe_norm = test_norm;
            if (cfg.protocol == Protocol::associative) {
                Rng corrupt_rng(mix_seed(seed, ds_name + "/corrupt", f));
                probe_norm = normalize_rows(
                    corrupt(test_rows, cfg.corrupt_p, cfg.corrupt_mode, corrupt_rng), bounds);
            }
            std::uint64_t cell_seed = mix_seed(seed, ds_name + "/" + algorithm, f);
            Mat preds = predict_fold(algorithm, train_norm, probe_norm, bounds, cfg, cell_seed);
            cell.fold_mses.push_back(evaluate_mse(preds, test_norm));
        }
        double acc = 0.0;
        for (double v : cell.fold_mses) acc += v;
        cell.mean_mse = acc / static_cast<double>(cell.fold_mses.size());
    } catch (const std::exception& e) {
        cell.error = e.what();
        cell.fold_mses.clear();
        cell.mean_mse.reset();
    }
    return cell;
}

}  // namespace detail

// Cross-validated benchmark over datasets x algorithms. Rows are canonically
// sorted before the seeded shuffle, so reports do not depend on file row
// order; every (dataset, fold, algorithm) cell derives its own seed, so cells
// are independent of each other and of evaluation order (including parallel
// execution when cfg.jobs > 1).
inline BenchmarkReport run_benchmark(const std::vector<Dataset>& datasets,
                                     const std::vector<std::string>& algorithms,
                                     const BenchmarkConfig& cfg, std::uint64_t seed) {
    BenchmarkReport report;
    report.algorithms = algorithms;
    report.seed = seed;
    std::vector<Mat> sorted(datasets.size());
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        report.datasets.push_back(datasets[d].name);
        sorted[d] = datasets[d].rows;
        canonical_sort(sorted[d]);
    }
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // (dataset, algorithm) indices
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t a = 0; a < algorithms.size(); ++a) cells.emplace_back(d, a);
    std::vector<BenchmarkCell> results(cells.size());

    auto work = [&](std::size_t c) {
        const auto [d, a] = cells[c];
        results[c] = detail::run_cell(sorted[d], datasets[d].name, algorithms[a], cfg, seed);
    };
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    if (jobs == 1 || cells.size() <= 1) {
        for (std::size_t c = 0; c < cells.size(); ++c) work(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(jobs, cells.size()); ++w)
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < cells.size(); c = next.fetch_add(1))
                    work(c);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto [d, a] = cells[c];
        report.cells[datasets[d].name][algorithms[a]] = std::move(results[c]);
    }
    return report;
}

// Report matrix as CSV, 5 decimal places; failed cells print "failed".
inline std::string report_to_csv(const BenchmarkReport& report) {
    std::string out = "dataset";
    for (const auto& a : report.algorithms) out += "," + a;
    out += "\n";
    for (const auto& ds : report.datasets) {
        out += ds;
        for (const auto& a : report.algorithms) {
            const auto& cell = report.cells.at(ds).at(a);
            if (cell.mean_mse) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), ",%.5f", *cell.mean_mse);
                out += buf;
            } else {
                out += ",failed";
            }
        }
        out += "\n";
    }
    return out;
}

// An MSE table on disk: first column "dataset", remaining columns algorithms.
struct MseTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    Mat rows;
};

inline MseTable load_mse_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    auto header = detail::split_csv_line(line);
    if (header.size() < 3) throw DataError(path + ": need a dataset column and >= 2 algorithms");
    MseTable table;
    table.algorithms.assign(header.begin() + 1, header.end());
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(path + ": row " + std::to_string(row_no) + " has wrong cell count");
        table.datasets.push_back(cells[0]);
        Vec row;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            try {
                row.push_back(std::stod(cells[c]));
            } catch (const std::exception&) {
                throw DataError(path + ": non-numeric MSE at row " + std::to_string(row_no));
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw DataError(path + ": no data rows");
    return table;
}

}  // namespace stcn
