// Command-line interface for the short-term cognitive network library:
// training, simulation, benchmarking, gradient checking, significance
// analysis, and activation-bound reports. Every run writes a manifest echoing
// the fully resolved configuration so results can be reproduced exactly.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stcn/stcn.hpp"

namespace fs = std::filesystem;
using stcn::Json;

namespace {

struct CliOptions {
    std::vector<std::string> data;
    std::string weights;
    std::string model;
    std::optional<std::uint64_t> seed;
    double eta = 0.001;
    double beta = 0.85;
    int epochs = 500;
    int max_iterations = 20;
    double xi1 = 1e-5;
    double xi2 = 1e-4;
    std::string init = "regression";
    std::string protocol = "regression";
    double corrupt_p = 0.2;
    std::string corrupt_mode = "field";
    std::size_t folds = 10;
    std::string control = "STCN";
    std::string out = ".";
    int class_column = -1;
    double fcm_lambda = 1.0;
    std::size_t jobs = 1;
};

std::uint64_t resolve_seed(const CliOptions& opt) {
    if (opt.seed) return *opt.seed;
    if (const char* env = std::getenv("STCN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("STCN_SEED is not a valid integer: " + std::string(env));
        }
    }
    return 0;
}

stcn::LearnerConfig learner_config(const CliOptions& opt) {
    stcn::LearnerConfig cfg;
    cfg.eta = opt.eta;
    cfg.beta = opt.beta;
    cfg.epochs = opt.epochs;
    cfg.max_iterations = opt.max_iterations;
    cfg.xi1 = opt.xi1;
    cfg.xi2 = opt.xi2;
    cfg.validate();
    return cfg;
}

Json config_json(const std::string& command, const CliOptions& opt, std::uint64_t seed) {
    Json j;
    j["command"] = command;
    j["data"] = opt.data;
    j["weights"] = opt.weights;
    j["model"] = opt.model;
    j["seed"] = seed;
    j["eta"] = opt.eta;
    j["beta"] = opt.beta;
    j["epochs"] = opt.epochs;
    j["max_iterations"] = opt.max_iterations;
    j["xi1"] = opt.xi1;
    j["xi2"] = opt.xi2;
    j["init"] = opt.init;
    j["protocol"] = opt.protocol;
    j["corrupt_p"] = opt.corrupt_p;
    j["corrupt_mode"] = opt.corrupt_mode;
    j["folds"] = opt.folds;
    j["control"] = opt.control;
    j["out"] = opt.out;
    j["class_column"] = opt.class_column;
    j["fcm_lambda"] = opt.fcm_lambda;
    j["jobs"] = opt.jobs;
    return j;
}

void write_manifest(const fs::path& dir, Json config, const std::vector<std::string>& outputs) {
    config["outputs"] = outputs;
    stcn::write_text_file((dir / "manifest.json").string(), config.dump(2) + "\n");
}

fs::path prepare_out_dir(const CliOptions& opt) {
    fs::path dir(opt.out);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double x, int precision = 12) { return stcn::format_double(x, precision); }

int cmd_train(const CliOptions& opt) {
    if (opt.data.size() != 1)
        throw std::invalid_argument("train: exactly one --data file is required");
    const std::uint64_t seed = resolve_seed(opt);
    const auto cfg = learner_config(opt);
    const auto dir = prepare_out_dir(opt);

    stcn::Dataset ds = stcn::load_csv(opt.data[0], opt.class_column);
    auto [norm, bounds] = stcn::to_sigmoid_space(ds.rows);

    const stcn::Mat* expert = nullptr;
    stcn::Mat expert_weights;
    std::string input_hash;
    if (!opt.weights.empty()) {
        auto wf = stcn::load_weights_file(opt.weights);
        expert_weights = wf.weights;
        input_hash = stcn::weights_hash(expert_weights);
        expert = &expert_weights;
    }

    stcn::StcnModel model = stcn::build_initial_model(norm, bounds, stcn::parse_init_mode(opt.init),
                                                      seed, expert);
    const std::string hash_before = stcn::weights_hash(model.weights);
    stcn::TrainingTrace trace = stcn::train_network(model, norm, cfg);
    const std::string hash_after = stcn::weights_hash(model.weights);

    stcn::save_model(model, (dir / "model.json").string());

    // one JSON record per trained iteration, then a summary record
    std::string trace_lines;
    for (std::size_t t = 1; t <= trace.per_iteration_error.size(); ++t) {
        Json line;
        line["t"] = t;
        line["E"] = trace.per_iteration_error[t - 1];
        line["stationary"] = (trace.stop_reason == stcn::StopReason::stationary &&
                              t == trace.per_iteration_error.size());
        trace_lines += line.dump() + "\n";
    }
    Json summary;
    summary["stop_reason"] = stcn::to_string(trace.stop_reason);
    summary["chosen_T"] = trace.chosen_T;
    trace_lines += summary.dump() + "\n";
    stcn::write_text_file((dir / "trace.jsonl").string(), trace_lines);

    // transfer-function shapes: 256 samples per neuron per iteration
    {
        std::string shapes = "iteration,neuron,x,f\n";
        const double bound = static_cast<double>(model.m);
        for (std::size_t t = 1; t <= model.iterations(); ++t)
            for (std::size_t i = 0; i < model.m; ++i)
                for (int s = 0; s < 256; ++s) {
                    const double x = -bound + 2.0 * bound * s / 255.0;
                    shapes += std::to_string(t) + "," + std::to_string(i) + "," + fmt(x, 9) + "," +
                              fmt(stcn::generalized_sigmoid(x, model.layers[t - 1][i]), 9) + "\n";
                }
        stcn::write_text_file((dir / "shapes.csv").string(), shapes);
    }

    Json config = config_json("train", opt, seed);
    config["weights_hash_before_training"] = hash_before;
    config["weights_hash_after_training"] = hash_after;
    if (!input_hash.empty()) config["weights_hash_input"] = input_hash;
    write_manifest(dir, config, {"model.json", "trace.jsonl", "shapes.csv"});

    std::cout << "trained " << model.iterations() << " iterations (stop: "
              << stcn::to_string(trace.stop_reason) << ", chosen_T: " << trace.chosen_T
              << ", final E: " << fmt(trace.per_iteration_error[trace.chosen_T - 1], 9) << ")\n";
    return 0;
}

int cmd_simulate(const CliOptions& opt) {
    if (opt.model.empty()) throw std::invalid_argument("simulate: --model is required");
    if (opt.data.size() != 1)
        throw std::invalid_argument("simulate: exactly one --data file is required");
    const auto dir = prepare_out_dir(opt);
    stcn::StcnModel model = stcn::load_model(opt.model);
    stcn::Dataset probes = stcn::load_csv(opt.data[0], opt.class_column);
    if (probes.variable_count() != model.m)
        throw stcn::DataError("simulate: probe file has " +
                              std::to_string(probes.variable_count()) + " columns, model expects " +
                              std::to_string(model.m));

    std::string csv;
    for (std::size_t c = 0; c < probes.columns.size(); ++c)
        csv += (c ? "," : "") + probes.columns[c];
    csv += "\n";
    for (const auto& row : probes.rows) {
        stcn::Vec a0(model.m);
        for (std::size_t i = 0; i < model.m; ++i)
            a0[i] = stcn::normalize_value(row[i], model.bounds.lower[i], model.bounds.upper[i]);
        stcn::Vec pred = stcn::to_original_units(model, stcn::stcn_predict(model, a0));
        for (std::size_t i = 0; i < pred.size(); ++i) csv += (i ? "," : "") + fmt(pred[i]);
        csv += "\n";
    }
    stcn::write_text_file((dir / "predictions.csv").string(), csv);
    write_manifest(dir, config_json("simulate", opt, resolve_seed(opt)), {"predictions.csv"});
    std::cout << "simulated " << probes.rows.size() << " probes\n";
    return 0;
}

int cmd_benchmark(const CliOptions& opt) {
    if (opt.data.empty()) throw std::invalid_argument("benchmark: at least one --data file");
    const std::uint64_t seed = resolve_seed(opt);
    const auto dir = prepare_out_dir(opt);
    stcn::BenchmarkConfig cfg;
    cfg.learner = learner_config(opt);
    cfg.init = stcn::parse_init_mode(opt.init);
    cfg.protocol = stcn::parse_protocol(opt.protocol);
    cfg.folds = opt.folds;
    cfg.corrupt_p = opt.corrupt_p;
    cfg.corrupt_mode = stcn::parse_corrupt_mode(opt.corrupt_mode);
    cfg.fcm_lambda = opt.fcm_lambda;
    cfg.jobs = opt.jobs;

    std::vector<stcn::Dataset> datasets;
    for (const auto& path : opt.data) datasets.push_back(stcn::load_csv(path, opt.class_column));
    const auto algorithms = stcn::default_algorithms(cfg.protocol);
    stcn::BenchmarkReport report = stcn::run_benchmark(datasets, algorithms, cfg, seed);

    stcn::write_text_file((dir / "report.csv").string(), stcn::report_to_csv(report));
    Json j;
    j["seed"] = seed;
    j["protocol"] = opt.protocol;
    j["algorithms"] = report.algorithms;
    for (const auto& ds : report.datasets) {
        for (const auto& a : report.algorithms) {
            const auto& cell = report.cells.at(ds).at(a);
            Json c;
            if (cell.mean_mse) c["mean_mse"] = *cell.mean_mse;
            if (!cell.error.empty()) c["error"] = cell.error;
            c["fold_mses"] = cell.fold_mses;
            j["cells"][ds][a] = std::move(c);
        }
    }
    stcn::write_text_file((dir / "report.json").string(), j.dump(2) + "\n");
    write_manifest(dir, config_json("benchmark", opt, seed), {"report.csv", "report.json"});
    std::cout << stcn::report_to_csv(report);
    return 0;
}

int cmd_gradcheck(const CliOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt);
    const auto dir = prepare_out_dir(opt);
    stcn::Rng rng(stcn::mix_seed(seed, "gradcheck"));
    double worst_rel = 0.0;
    int worst_component = -1;
    bool pass = true;
    for (int instance = 0; instance < 200; ++instance) {
        stcn::TransferParams p{rng.uniform(0.5, 5.0), rng.uniform(-1.0, 1.0),
                               rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
        const std::size_t K = 5 + rng.below(20);
        stcn::Vec raw(K), targets(K);
        for (std::size_t k = 0; k < K; ++k) {
            raw[k] = rng.uniform(-3.0, 3.0);
            targets[k] = rng.uniform(0.05, 0.95);
        }
        auto analytic = stcn::error_gradient(p, raw, targets).partials;
        auto numeric = stcn::finite_difference_gradient(p, raw, targets, 1e-6);
        for (int d = 0; d < 4; ++d) {
            const double denom = std::max(std::abs(numeric[d]), 1e-3);
            const double rel = std::abs(analytic[d] - numeric[d]) / denom;
            if (rel > worst_rel) {
                worst_rel = rel;
                worst_component = d;
            }
            if (rel > 1e-5 && std::abs(analytic[d] - numeric[d]) > 1e-8) pass = false;
        }
    }
    std::string verdict = pass ? "pass" : "fail";
    std::string text = "gradcheck: " + verdict + "\ninstances: 200\nworst_relative_error: " +
                       fmt(worst_rel, 6) + "\nworst_component: " +
                       std::string(1, "lhqv"[worst_component < 0 ? 0 : worst_component]) + "\n";
    stcn::write_text_file((dir / "gradcheck.txt").string(), text);
    write_manifest(dir, config_json("gradcheck", opt, seed), {"gradcheck.txt"});
    std::cout << text;
    if (!pass) throw std::runtime_error("gradcheck: analytic and numeric gradients disagree");
    return 0;
}

int cmd_stats(const CliOptions& opt) {
    if (opt.data.size() != 1)
        throw std::invalid_argument("stats: exactly one --data MSE table is required");
    const auto dir = prepare_out_dir(opt);
    stcn::MseTable table = stcn::load_mse_table(opt.data[0]);
    stcn::SignificanceTable sig =
        stcn::significance_analysis(table.algorithms, table.rows, opt.control);

    std::string csv = "algorithm,p_unadjusted,bonferroni,holm,holland\n";
    for (const auto& row : sig.rows)
        csv += row.algorithm + "," + fmt(row.p_unadjusted, 6) + "," + fmt(row.p_bonferroni, 6) +
               "," + fmt(row.p_holm, 6) + "," + fmt(row.p_holland, 6) + "\n";
    stcn::write_text_file((dir / "significance.csv").string(), csv);

    Json j;
    j["control"] = sig.control;
    j["friedman_statistic"] = sig.friedman.statistic;
    j["friedman_p"] = sig.friedman.p_value;
    j["mean_ranks"] = Json::object();
    for (std::size_t a = 0; a < table.algorithms.size(); ++a)
        j["mean_ranks"][table.algorithms[a]] = sig.friedman.mean_ranks[a];
    for (const auto& row : sig.rows)
        j["pairwise"][row.algorithm] = {{"unadjusted", row.p_unadjusted},
                                        {"bonferroni", row.p_bonferroni},
                                        {"holm", row.p_holm},
                                        {"holland", row.p_holland}};
    stcn::write_text_file((dir / "significance.json").string(), j.dump(2) + "\n");
    write_manifest(dir, config_json("stats", opt, resolve_seed(opt)),
                   {"significance.csv", "significance.json"});

    std::cout << "friedman statistic " << fmt(sig.friedman.statistic, 9) << ", p "
              << fmt(sig.friedman.p_value, 9) << "\n" << csv;
    return 0;
}

int cmd_bounds(const CliOptions& opt) {
    if (opt.weights.empty()) throw std::invalid_argument("bounds: --weights is required");
    const auto dir = prepare_out_dir(opt);
    auto wf = stcn::load_weights_file(opt.weights);
    stcn::FcmModel fcm{wf.weights, wf.kind == "fcm" ? wf.lambda : opt.fcm_lambda};
    for (std::size_t i = 0; i < fcm.size(); ++i) fcm.weights[i][i] = 0.0;
    fcm.check();
    std::string csv = "neuron,lower,upper\n";
    for (std::size_t i = 0; i < fcm.size(); ++i) {
        auto [lo, hi] = stcn::activation_bounds(fcm, i);
        csv += std::to_string(i) + "," + fmt(lo) + "," + fmt(hi) + "\n";
    }
    stcn::write_text_file((dir / "bounds.csv").string(), csv);
    write_manifest(dir, config_json("bounds", opt, resolve_seed(opt)), {"bounds.csv"});
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-term cognitive network toolkit"};
    app.require_subcommand(1);
    CliOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--data", opt.data, "input CSV file(s)");
        sub->add_option("--weights", opt.weights, "weight-matrix JSON file");
        sub->add_option("--model", opt.model, "model JSON file");
        sub->add_option("--seed", opt.seed, "RNG seed (fallback: STCN_SEED, then 0)");
        sub->add_option("--eta", opt.eta, "learning rate");
        sub->add_option("--beta", opt.beta, "momentum coefficient");
        sub->add_option("--epochs", opt.epochs, "gradient steps per neuron per iteration");
        sub->add_option("--max-iterations", opt.max_iterations, "network iteration cap");
        sub->add_option("--xi1", opt.xi1, "stationarity tolerance on squared error delta");
        sub->add_option("--xi2", opt.xi2, "stationarity tolerance on shape distance");
        sub->add_option("--init", opt.init, "initializer: regression|paper|random")
            ->check(CLI::IsMember({"regression", "paper", "random"}));
        sub->add_option("--protocol", opt.protocol, "benchmark protocol: regression|associative")
            ->check(CLI::IsMember({"regression", "associative"}));
        sub->add_option("--corrupt-p", opt.corrupt_p, "corruption probability");
        sub->add_option("--corrupt-mode", opt.corrupt_mode, "corruption unit: field|record")
            ->check(CLI::IsMember({"field", "record"}));
        sub->add_option("--folds", opt.folds, "cross-validation folds");
        sub->add_option("--control", opt.control, "control algorithm for stats");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--class-column", opt.class_column,
                        "0-based column dropped before modeling (-1: none)");
        sub->add_option("--fcm-lambda", opt.fcm_lambda, "FCM sigmoid slope");
        sub->add_option("--jobs", opt.jobs, "worker threads for benchmark cells");
    };

    CLI::App* train = app.add_subcommand("train", "fit an STCN on a dataset");
    CLI::App* simulate = app.add_subcommand("simulate", "predict probe instances with a model");
    CLI::App* benchmark = app.add_subcommand("benchmark", "cross-validated model comparison");
    CLI::App* gradcheck = app.add_subcommand("gradcheck", "verify analytic gradients");
    CLI::App* stats = app.add_subcommand("stats", "significance analysis of an MSE table");
    CLI::App* bounds = app.add_subcommand("bounds", "activation bounds of an FCM");
    for (auto* sub : {train, simulate, benchmark, gradcheck, stats, bounds}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage error
    }

    try {
        if (train->parsed()) return cmd_train(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (benchmark->parsed()) return cmd_benchmark(opt);
        if (gradcheck->parsed()) return cmd_gradcheck(opt);
        if (stats->parsed()) return cmd_stats(opt);
        if (bounds->parsed()) return cmd_bounds(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const stcn::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
