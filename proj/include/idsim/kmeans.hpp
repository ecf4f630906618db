#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "idsim/dataset.hpp"
#include "idsim/error.hpp"
#include "idsim/parallel.hpp"
#include "idsim/similarity.hpp"

namespace idsim {

// Real-valued cluster center, one entry per vocabulary call.
struct Centroid {
    std::vector<double> values;

    bool operator==(const Centroid&) const = default;
};

// Similarity between a process and a cluster center; same formula as
// pair_similarity, with the center's entries active whenever strictly
// positive.
inline double centroid_similarity(const ProcessVector& p, const Centroid& c,
                                  const SimilarityConfig& cfg = {}) {
    return pair_similarity(std::span<const double>(p.counts),
                           std::span<const double>(c.values), cfg);
}

// How initial centers are picked. first_k copies the first k process
// vectors; indices copies the named ones; random draws k distinct processes
// reproducibly from the seed.
struct Seeding {
    enum class Kind { FirstK, Indices, Random };

    Kind kind = Kind::FirstK;
    std::vector<std::size_t> indices;
    std::uint64_t seed = 0;

    static Seeding first_k() { return {}; }
    static Seeding at(std::vector<std::size_t> idx) {
        return Seeding{Kind::Indices, std::move(idx), 0};
    }
    static Seeding random(std::uint64_t seed) { return Seeding{Kind::Random, {}, seed}; }

    bool operator==(const Seeding&) const = default;
};

struct ClusterConfig {
    std::size_t k = 2;
    Seeding seeding;
    std::size_t max_iterations = 100;
    SimilarityConfig similarity;
    unsigned threads = 1;

    void validate() const {
        if (k < 1) throw Error("cluster config: k must be at least 1");
        if (max_iterations < 1) throw Error("cluster config: max_iterations must be at least 1");
    }
};

using Assignment = std::vector<std::size_t>;

// Result of a clustering run. centroids are the per-call means of the final
// assignment; history holds the assignment produced by every iteration, so
// converged == true implies its last two entries are equal.
struct ClusterModel {
    std::size_t k = 0;
    std::vector<Centroid> centroids;
    Assignment assignment;
    std::vector<Assignment> history;
    bool converged = false;
    std::size_t iterations_run = 0;
};

inline std::vector<Centroid> seed(const LabeledDataset& ds, const ClusterConfig& cfg) {
    cfg.validate();
    if (cfg.k > ds.size())
        throw Error("seed: k exceeds dataset size (" + std::to_string(cfg.k) + " > " +
                    std::to_string(ds.size()) + ")");
    std::vector<std::size_t> picks;
    switch (cfg.seeding.kind) {
        case Seeding::Kind::FirstK:
            picks.resize(cfg.k);
            std::iota(picks.begin(), picks.end(), 0);
            break;
        case Seeding::Kind::Indices: {
            if (cfg.seeding.indices.size() != cfg.k)
                throw Error("seed: expected " + std::to_string(cfg.k) + " indices, got " +
                            std::to_string(cfg.seeding.indices.size()));
            std::unordered_set<std::size_t> seen;
            for (std::size_t i : cfg.seeding.indices) {
                if (i >= ds.size())
                    throw Error("seed: index " + std::to_string(i) + " out of range");
                if (!seen.insert(i).second)
                    throw Error("seed: duplicate index " + std::to_string(i));
            }
            picks = cfg.seeding.indices;
            break;
        }
        case Seeding::Kind::Random: {
            // Partial Fisher-Yates over the index list; modulo keeps the draw
            // identical across standard library implementations.
            std::vector<std::size_t> pool(ds.size());
            std::iota(pool.begin(), pool.end(), 0);
            std::mt19937_64 rng(cfg.seeding.seed);
            for (std::size_t i = 0; i < cfg.k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
                std::swap(pool[i], pool[j]);
            }
            picks.assign(pool.begin(), pool.begin() + cfg.k);
            break;
        }
    }
    std::vector<Centroid> centroids;
    centroids.reserve(cfg.k);
    for (std::size_t i : picks) centroids.push_back(Centroid{ds.processes[i].counts});
    return centroids;
}

// Full process-by-center similarity matrix (row i = process i). Rows are
// independent and may be computed in parallel; output is identical for any
// thread count.
inline std::vector<std::vector<double>> similarity_table(const LabeledDataset& ds,
                                                         std::span<const Centroid> centroids,
                                                         const ClusterConfig& cfg) {
    if (centroids.empty())
        throw Error("similarity_table: no centroids");
    for (const auto& c : centroids)
        if (c.values.size() != ds.vocabulary.size())
            throw Error("similarity_table: centroid dimension mismatch");
    std::vector<std::vector<double>> table(ds.size());
    parallel_for(ds.size(), cfg.threads, [&](std::size_t i) {
        auto& row = table[i];
        row.resize(centroids.size());
        for (std::size_t j = 0; j < centroids.size(); ++j)
            row[j] = centroid_similarity(ds.processes[i], centroids[j], cfg.similarity);
    });
    return table;
}

// Maps every process to its most similar center; ties go to the lowest
// cluster index.
inline Assignment assign(const LabeledDataset& ds, std::span<const Centroid> centroids,
                         const ClusterConfig& cfg) {
    const auto table = similarity_table(ds, centroids, cfg);
    Assignment out(ds.size(), 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < centroids.size(); ++j)
            if (table[i][j] > table[i][best]) best = j;
        out[i] = best;
    }
    return out;
}

// Per-call mean of each cluster's members, accumulated in process-index
// order. An empty cluster is re-seeded with the not-yet-taken process least
// similar to its own cluster's mean (farthest-point rule), so the step is
// total for every assignment.
inline std::vector<Centroid> update_centroids(const LabeledDataset& ds,
                                              const Assignment& assignment, std::size_t k,
                                              const SimilarityConfig& cfg = {}) {
    if (assignment.size() != ds.size())
        throw Error("update_centroids: assignment length mismatch");
    const std::size_t m = ds.vocabulary.size();
    std::vector<Centroid> centroids(k, Centroid{std::vector<double>(m, 0.0)});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::size_t j = assignment[i];
        if (j >= k) throw Error("update_centroids: assignment index out of range");
        for (std::size_t s = 0; s < m; ++s) centroids[j].values[s] += ds.processes[i].counts[s];
        ++counts[j];
    }
    for (std::size_t j = 0; j < k; ++j)
        if (counts[j] > 0)
            for (std::size_t s = 0; s < m; ++s)
                centroids[j].values[s] /= static_cast<double>(counts[j]);

    std::vector<bool> taken(ds.size(), false);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] > 0) continue;
        std::size_t pick = ds.size();
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (taken[i]) continue;
            const double sim = centroid_similarity(ds.processes[i], centroids[assignment[i]], cfg);
            if (sim < worst) {
                worst = sim;
                pick = i;
            }
        }
        if (pick == ds.size())
            throw Error("update_centroids: no process available to re-seed empty cluster");
        taken[pick] = true;
        centroids[j].values = ds.processes[pick].counts;
    }
    return centroids;
}

// Alternates assign / update until the assignment repeats or max_iterations
// is reached. Deterministic for a fixed dataset and config, including the
// random seeding mode and any thread count.
inline ClusterModel cluster(const LabeledDataset& ds, const ClusterConfig& cfg) {
    cfg.validate();
    cfg.similarity.validate(ds.vocabulary.size());
    auto centroids = seed(ds, cfg);
    ClusterModel model;
    model.k = cfg.k;
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        auto a = assign(ds, centroids, cfg);
        model.history.push_back(std::move(a));
        const std::size_t h = model.history.size();
        if (h >= 2 && model.history[h - 1] == model.history[h - 2]) {
            model.converged = true;
            break;
        }
        centroids = update_centroids(ds, model.history.back(), cfg.k, cfg.similarity);
    }
    model.iterations_run = model.history.size();
    model.assignment = model.history.back();
    model.centroids = update_centroids(ds, model.assignment, cfg.k, cfg.similarity);
    return model;
}

}  // namespace idsim
