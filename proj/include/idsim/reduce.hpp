#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "idsim/dataset.hpp"
#include "idsim/error.hpp"
#include "idsim/kmeans.hpp"
#include "idsim/parallel.hpp"
#include "idsim/similarity.hpp"

namespace idsim {

// One process collapsed to a single scalar: the mean of its k cluster-center
// similarities and its nearest-neighbor similarity.
struct ReducedFeature {
    std::string process_id;
    std::vector<double> cluster_sims;  // one per cluster center, index order
    std::string nn_id;
    double nn_sim = 0.0;
    double total = 0.0;     // sum of cluster_sims, then nn_sim, left to right
    double feature = 0.0;   // total / (k + 1), in [0.5, 1]
    double distance = 0.0;  // 1 - feature
};

struct Neighbor {
    std::size_t index = 0;
    double similarity = 0.0;
};

namespace detail {

// Highest-similarity candidate, ties to the lowest index. Candidates whose
// count vector equals `probe` are skipped in a first pass: a zero-distance
// neighbor is the sample itself in all but name, and the reference feature
// tables are produced without them. Only when every candidate is identical
// does the lowest-index one win with similarity 1.
inline Neighbor nearest_distinct(const std::vector<double>& probe, const LabeledDataset& ds,
                                 std::span<const std::size_t> candidates,
                                 const SimilarityConfig& cfg) {
    Neighbor best{ds.size(), -1.0};
    for (std::size_t i : candidates) {
        if (ds.processes[i].counts == probe) continue;
        const double sim = pair_similarity(std::span<const double>(probe),
                                           std::span<const double>(ds.processes[i].counts), cfg);
        if (sim > best.similarity) best = Neighbor{i, sim};
    }
    if (best.index < ds.size()) return best;
    if (!candidates.empty()) return Neighbor{candidates.front(), 1.0};
    throw Error("nearest neighbor: no candidate processes");
}

}  // namespace detail

// Nearest neighbor of process `index` among the other members of its
// cluster. A process alone in its cluster falls back to the whole training
// set, as does one whose cluster mates are all exact duplicates of it.
inline Neighbor nearest_neighbor_within_cluster(std::size_t index, const ClusterModel& model,
                                                const LabeledDataset& ds,
                                                const SimilarityConfig& cfg = {}) {
    if (ds.size() == 0) throw Error("nearest neighbor: empty dataset");
    if (index >= ds.size()) throw Error("nearest neighbor: process index out of range");
    if (model.assignment.size() != ds.size())
        throw Error("nearest neighbor: model assignment does not cover dataset");
    const auto& probe = ds.processes[index].counts;

    std::vector<std::size_t> mates;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (i != index && model.assignment[i] == model.assignment[index]) mates.push_back(i);
    bool any_distinct = false;
    for (std::size_t i : mates)
        if (ds.processes[i].counts != probe) any_distinct = true;

    if (!mates.empty() && any_distinct)
        return detail::nearest_distinct(probe, ds, mates, cfg);

    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (i != index) all.push_back(i);
    if (all.empty()) throw Error("nearest neighbor: dataset has a single process");
    return detail::nearest_distinct(probe, ds, all, cfg);
}

namespace detail {

inline ReducedFeature make_feature(std::string id, const std::vector<double>& counts,
                                   const ClusterModel& model, const Neighbor& nn,
                                   const std::string& nn_id, const SimilarityConfig& cfg) {
    ReducedFeature f;
    f.process_id = std::move(id);
    f.cluster_sims.reserve(model.centroids.size());
    for (const auto& c : model.centroids)
        f.cluster_sims.push_back(pair_similarity(std::span<const double>(counts),
                                                 std::span<const double>(c.values), cfg));
    f.nn_id = nn_id;
    f.nn_sim = nn.similarity;
    f.total = 0.0;
    for (double s : f.cluster_sims) f.total += s;
    f.total += f.nn_sim;
    f.feature = f.total / static_cast<double>(model.centroids.size() + 1);
    f.distance = 1.0 - f.feature;
    return f;
}

}  // namespace detail

// Reduces every training process against the fitted model: similarities to
// all k final centers plus the within-cluster nearest neighbor. Output order
// follows the dataset.
inline std::vector<ReducedFeature> reduce_training(const ClusterModel& model,
                                                   const LabeledDataset& ds,
                                                   const SimilarityConfig& cfg = {},
                                                   unsigned threads = 1) {
    if (model.assignment.size() != ds.size())
        throw Error("reduce_training: model assignment does not cover dataset");
    std::vector<ReducedFeature> out(ds.size());
    parallel_for(ds.size(), threads, [&](std::size_t i) {
        const auto nn = nearest_neighbor_within_cluster(i, model, ds, cfg);
        out[i] = detail::make_feature(ds.processes[i].id, ds.processes[i].counts, model, nn,
                                      ds.processes[nn.index].id, cfg);
    });
    return out;
}

// Reduces a test process: center similarities against the trained model and
// the nearest neighbor over the entire training set (a test process has no
// cluster membership). Same duplicate-skipping rule as training, so a test
// vector equal to a training vector reproduces that vector's feature.
inline ReducedFeature reduce_test(const ProcessVector& p, const ClusterModel& model,
                                  const LabeledDataset& training,
                                  const SimilarityConfig& cfg = {}) {
    if (training.size() == 0) throw Error("reduce_test: empty training set");
    if (p.counts.size() != training.vocabulary.size())
        throw Error("reduce_test: vocabulary mismatch for process '" + p.id + "'");
    std::vector<std::size_t> all(training.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto nn = detail::nearest_distinct(p.counts, training, all, cfg);
    return detail::make_feature(p.id, p.counts, model, nn, training.processes[nn.index].id, cfg);
}

// CSV export: id,cluster_sim_0..k-1,nn_id,nn_sim,total,feature,distance
inline void write_features_csv(std::span<const ReducedFeature> features, std::ostream& out,
                               std::size_t k) {
    out << "id";
    for (std::size_t j = 0; j < k; ++j) out << ",cluster_sim_" << j;
    out << ",nn_id,nn_sim,total,feature,distance\n";
    const auto old_precision = out.precision(17);
    for (const auto& f : features) {
        out << f.process_id;
        for (double s : f.cluster_sims) out << ',' << s;
        out << ',' << f.nn_id << ',' << f.nn_sim << ',' << f.total << ',' << f.feature << ','
            << f.distance << '\n';
    }
    out.precision(old_precision);
}

}  // namespace idsim
