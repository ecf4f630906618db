#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "idsim/error.hpp"
#include "idsim/kmeans.hpp"
#include "idsim/similarity.hpp"
#include "idsim/vocabulary.hpp"

namespace idsim {

inline constexpr int kModelFormatVersion = 1;

// On-disk form of a trained model: everything classification needs, plus an
// echo of the configuration that produced it. Iteration history is not
// persisted.
struct ModelFile {
    int format_version = kModelFormatVersion;
    Vocabulary vocabulary;
    std::size_t k = 0;
    std::vector<Centroid> centroids;
    Assignment assignment;
    SimilarityConfig similarity;
    ClusterConfig clustering;

    ClusterModel to_cluster_model() const {
        ClusterModel m;
        m.k = k;
        m.centroids = centroids;
        m.assignment = assignment;
        return m;
    }
};

inline ModelFile make_model_file(const Vocabulary& vocabulary, const ClusterModel& model,
                                 const ClusterConfig& cfg) {
    ModelFile f;
    f.vocabulary = vocabulary;
    f.k = model.k;
    f.centroids = model.centroids;
    f.assignment = model.assignment;
    f.similarity = cfg.similarity;
    f.clustering = cfg;
    return f;
}

namespace detail {

inline std::string sigma_strategy_name(SimilarityConfig::Sigma s) {
    return s == SimilarityConfig::Sigma::Constant ? "constant" : "per_call_training_std";
}

inline SimilarityConfig::Sigma sigma_strategy_from(const std::string& s) {
    if (s == "constant") return SimilarityConfig::Sigma::Constant;
    if (s == "per_call_training_std") return SimilarityConfig::Sigma::PerCallTrainingStd;
    throw Error("model: unknown sigma strategy '" + s + "'");
}

inline std::string seeding_name(Seeding::Kind k) {
    switch (k) {
        case Seeding::Kind::FirstK: return "first_k";
        case Seeding::Kind::Indices: return "indices";
        case Seeding::Kind::Random: return "random";
    }
    throw Error("model: bad seeding kind");
}

inline Seeding::Kind seeding_from(const std::string& s) {
    if (s == "first_k") return Seeding::Kind::FirstK;
    if (s == "indices") return Seeding::Kind::Indices;
    if (s == "random") return Seeding::Kind::Random;
    throw Error("model: unknown seeding '" + s + "'");
}

}  // namespace detail

inline nlohmann::json similarity_config_to_json(const SimilarityConfig& cfg) {
    return nlohmann::json{{"sigma_strategy", detail::sigma_strategy_name(cfg.strategy)},
                          {"sigma", cfg.sigma0},
                          {"zero_sigma_epsilon", cfg.zero_sigma_epsilon},
                          {"per_call_sigma", cfg.per_call_sigma}};
}

inline SimilarityConfig similarity_config_from_json(const nlohmann::json& j) {
    SimilarityConfig cfg;
    cfg.strategy = detail::sigma_strategy_from(j.at("sigma_strategy").get<std::string>());
    cfg.sigma0 = j.at("sigma").get<double>();
    cfg.zero_sigma_epsilon = j.at("zero_sigma_epsilon").get<double>();
    cfg.per_call_sigma = j.at("per_call_sigma").get<std::vector<double>>();
    return cfg;
}

inline nlohmann::json model_to_json(const ModelFile& f) {
    nlohmann::json centroids = nlohmann::json::array();
    for (const auto& c : f.centroids) centroids.push_back(c.values);
    return nlohmann::json{
        {"format_version", f.format_version},
        {"vocabulary", f.vocabulary.names},
        {"k", f.k},
        {"centroids", centroids},
        {"assignment", f.assignment},
        {"similarity_config", similarity_config_to_json(f.similarity)},
        {"clustering_config",
         {{"k", f.clustering.k},
          {"seeding", detail::seeding_name(f.clustering.seeding.kind)},
          {"indices", f.clustering.seeding.indices},
          {"seed", f.clustering.seeding.seed},
          {"max_iterations", f.clustering.max_iterations}}},
    };
}

inline ModelFile model_from_json(const nlohmann::json& j) {
    ModelFile f;
    f.format_version = j.at("format_version").get<int>();
    if (f.format_version != kModelFormatVersion)
        throw Error("model: unsupported format_version " + std::to_string(f.format_version));
    f.vocabulary.names = j.at("vocabulary").get<std::vector<std::string>>();
    f.vocabulary.validate();
    f.k = j.at("k").get<std::size_t>();
    for (const auto& c : j.at("centroids"))
        f.centroids.push_back(Centroid{c.get<std::vector<double>>()});
    f.assignment = j.at("assignment").get<Assignment>();
    f.similarity = similarity_config_from_json(j.at("similarity_config"));
    const auto& cc = j.at("clustering_config");
    f.clustering.k = cc.at("k").get<std::size_t>();
    f.clustering.seeding.kind = detail::seeding_from(cc.at("seeding").get<std::string>());
    f.clustering.seeding.indices = cc.at("indices").get<std::vector<std::size_t>>();
    f.clustering.seeding.seed = cc.at("seed").get<std::uint64_t>();
    f.clustering.max_iterations = cc.at("max_iterations").get<std::size_t>();
    f.clustering.similarity = f.similarity;

    if (f.centroids.size() != f.k)
        throw Error("model: centroid count does not match k");
    for (const auto& c : f.centroids)
        if (c.values.size() != f.vocabulary.size())
            throw Error("model: centroid dimension does not match vocabulary");
    for (std::size_t a : f.assignment)
        if (a >= f.k) throw Error("model: assignment index out of range");
    return f;
}

// Doubles round-trip exactly: the JSON writer emits the shortest decimal
// form that parses back to the same value.
inline void save_model(const ModelFile& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << model_to_json(f).dump(2) << '\n';
    if (!out.good()) throw Error("write failed for '" + path.string() + "'");
}

inline ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("model '" + path.string() + "': " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error("model '" + path.string() + "': " + e.what());
    }
}

}  // namespace idsim
