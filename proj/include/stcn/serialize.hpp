#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stcn/dataset.hpp"
#include "stcn/fcm.hpp"
#include "stcn/model.hpp"
#include "stcn/sha256.hpp"

namespace stcn {

using Json = nlohmann::json;

// Canonical textual form of a weight matrix; the basis of the immutability
// fingerprint (training must never change it).
inline std::string weights_canonical(const Mat& w) {
    std::string out;
    for (const auto& row : w) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out.push_back(',');
            out += format_double(row[c], 17);
        }
        out.push_back(';');
    }
    return out;
}

inline std::string weights_hash(const Mat& w) { return sha256_hex(weights_canonical(w)); }

inline Json model_to_json(const StcnModel& model) {
    Json j;
    j["m"] = model.m;
    j["t"] = model.iterations();
    j["weights"] = model.weights;
    Json layers = Json::array();
    for (const auto& layer : model.layers) {
        Json l = Json::array();
        for (const auto& p : layer)
            l.push_back({{"lambda", p.lambda}, {"h", p.h}, {"q", p.q}, {"v", p.v}});
        layers.push_back(std::move(l));
    }
    j["layers"] = std::move(layers);
    Json bounds = Json::array();
    for (std::size_t i = 0; i < model.bounds.size(); ++i)
        bounds.push_back({{"lower", model.bounds.lower[i]}, {"upper", model.bounds.upper[i]}});
    j["bounds"] = std::move(bounds);
    j["seed"] = model.seed;
    return j;
}

inline StcnModel model_from_json(const Json& j) {
    StcnModel model;
    model.m = j.at("m").get<std::size_t>();
    model.weights = j.at("weights").get<Mat>();
    for (const auto& l : j.at("layers")) {
        std::vector<TransferParams> layer;
        for (const auto& p : l)
            layer.push_back({p.at("lambda").get<double>(), p.at("h").get<double>(),
                             p.at("q").get<double>(), p.at("v").get<double>()});
        model.layers.push_back(std::move(layer));
    }
    for (const auto& b : j.at("bounds")) {
        model.bounds.lower.push_back(b.at("lower").get<double>());
        model.bounds.upper.push_back(b.at("upper").get<double>());
    }
    model.seed = j.value("seed", std::uint64_t{0});
    if (j.at("t").get<std::size_t>() != model.iterations())
        throw DataError("model file: t does not match layer count");
    model.check_consistent();
    return model;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void save_model(const StcnModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model).dump(2) + "\n");
}

inline StcnModel load_model(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw DataError(path + ": invalid JSON (" + e.what() + ")");
    }
    const std::string kind = j.value("kind", std::string("stcn"));
    if (kind != "stcn") throw DataError(path + ": expected an stcn model, found kind=" + kind);
    try {
        return model_from_json(j);
    } catch (const Json::exception& e) {
        throw DataError(path + ": malformed model (" + e.what() + ")");
    }
}

// Baseline models share the same JSON weight schema with a "kind"
// discriminator; a weights-only file (kind absent or "stcn") can also seed an
// expert-knowledge STCN.
struct WeightsFile {
    std::string kind;  // "stcn", "fcm", or "hopfield"
    Mat weights;
    double lambda = 1.0;  // fcm only
};

inline WeightsFile load_weights_file(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw DataError(path + ": invalid JSON (" + e.what() + ")");
    }
    WeightsFile out;
    out.kind = j.value("kind", std::string("stcn"));
    try {
        out.weights = j.at("weights").get<Mat>();
        out.lambda = j.value("lambda", 1.0);
    } catch (const Json::exception& e) {
        throw DataError(path + ": malformed weights file (" + e.what() + ")");
    }
    const std::size_t m = out.weights.size();
    if (j.contains("m") && j.at("m").get<std::size_t>() != m)
        throw DataError(path + ": m does not match weight matrix size");
    for (const auto& row : out.weights)
        if (row.size() != m) throw DataError(path + ": weight matrix not square");
    return out;
}

inline void save_fcm(const FcmModel& model, const std::string& path) {
    Json j;
    j["kind"] = "fcm";
    j["m"] = model.size();
    j["weights"] = model.weights;
    j["lambda"] = model.lambda;
    write_text_file(path, j.dump(2) + "\n");
}

inline void save_weights_kind(const Mat& weights, const std::string& kind,
                              const std::string& path) {
    Json j;
    j["kind"] = kind;
    j["m"] = weights.size();
    j["weights"] = weights;
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace stcn
