#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "idsim/dataset.hpp"
#include "idsim/error.hpp"

namespace idsim {

// Width configuration for the Gaussian similarity. The default is a single
// constant width of 0.5 for every call, which is what the bundled reference
// values were produced with. The alternative derives one width per call from
// the training set (population standard deviation of that call's counts);
// calls whose counts never vary get the epsilon substitute instead of a zero
// width.
struct SimilarityConfig {
    enum class Sigma { Constant, PerCallTrainingStd };

    Sigma strategy = Sigma::Constant;
    double sigma0 = 0.5;
    double zero_sigma_epsilon = 1e-6;
    std::vector<double> per_call_sigma;  // filled only for PerCallTrainingStd

    static SimilarityConfig constant(double sigma = 0.5) {
        SimilarityConfig cfg;
        cfg.strategy = Sigma::Constant;
        cfg.sigma0 = sigma;
        return cfg;
    }

    static SimilarityConfig per_call_training_std(const LabeledDataset& training,
                                                  double epsilon = 1e-6) {
        if (!(epsilon > 0.0))
            throw Error("similarity config: epsilon must be positive");
        if (training.size() == 0)
            throw Error("similarity config: cannot fit per-call widths on an empty dataset");
        SimilarityConfig cfg;
        cfg.strategy = Sigma::PerCallTrainingStd;
        cfg.zero_sigma_epsilon = epsilon;
        const std::size_t m = training.vocabulary.size();
        const double n = static_cast<double>(training.size());
        cfg.per_call_sigma.resize(m);
        for (std::size_t s = 0; s < m; ++s) {
            double mean = 0.0;
            for (const auto& p : training.processes) mean += p.counts[s];
            mean /= n;
            double var = 0.0;
            for (const auto& p : training.processes) {
                const double d = p.counts[s] - mean;
                var += d * d;
            }
            var /= n;
            const double sd = std::sqrt(var);
            cfg.per_call_sigma[s] = sd > 0.0 ? sd : epsilon;
        }
        return cfg;
    }

    double sigma_at(std::size_t call) const {
        return strategy == Sigma::Constant ? sigma0 : per_call_sigma[call];
    }

    void validate(std::size_t dims) const {
        if (!(zero_sigma_epsilon > 0.0))
            throw Error("similarity config: epsilon must be positive");
        if (strategy == Sigma::Constant) {
            if (!(sigma0 > 0.0))
                throw Error("similarity config: sigma must be positive");
        } else {
            if (per_call_sigma.size() != dims)
                throw Error("similarity config: per-call widths fitted for " +
                            std::to_string(per_call_sigma.size()) + " calls, vectors have " +
                            std::to_string(dims));
            for (double s : per_call_sigma)
                if (!(s > 0.0))
                    throw Error("similarity config: non-positive per-call width");
        }
    }

    bool operator==(const SimilarityConfig&) const = default;
};

// Single-call Gaussian term exp(-((a-b)/sigma)^2). Always in (0, 1]; exactly
// 1 when a == b.
inline double gaussian_term(double a, double b, double sigma) {
    if (!(sigma > 0.0))
        throw Error("gaussian_term: sigma must be positive");
    const double z = (a - b) / sigma;
    return std::exp(-(z * z));
}

// Indices where at least one of the two vectors is nonzero. Only these calls
// contribute to the similarity; its size is the averaging denominator.
inline std::vector<std::size_t> active_union(std::span<const double> a,
                                             std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("active_union: length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < a.size(); ++s)
        if (a[s] > 0.0 || b[s] > 0.0) idx.push_back(s);
    return idx;
}

// Bounded Gaussian similarity between two count vectors:
//
//   F = mean over the active union of exp(-((a_s-b_s)/sigma_s)^2)
//   similarity = (1 + F) / 2
//
// Values lie in [0.5, 1]; identical vectors give exactly 1. Two all-zero
// vectors have an empty active union and are identical, so the result is 1.
inline double pair_similarity(std::span<const double> a, std::span<const double> b,
                              const SimilarityConfig& cfg = {}) {
    if (a.size() != b.size())
        throw Error("pair_similarity: length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    cfg.validate(a.size());
    double sum = 0.0;
    std::size_t active = 0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s] > 0.0 || b[s] > 0.0) {
            sum += gaussian_term(a[s], b[s], cfg.sigma_at(s));
            ++active;
        }
    }
    if (active == 0) return 1.0;
    return (1.0 + sum / static_cast<double>(active)) / 2.0;
}

inline double pair_similarity(const ProcessVector& a, const ProcessVector& b,
                              const SimilarityConfig& cfg = {}) {
    return pair_similarity(std::span<const double>(a.counts),
                           std::span<const double>(b.counts), cfg);
}

// Distance complement 1 - similarity, in [0, 0.5].
inline double distance(std::span<const double> a, std::span<const double> b,
                       const SimilarityConfig& cfg = {}) {
    return 1.0 - pair_similarity(a, b, cfg);
}

inline double distance(const ProcessVector& a, const ProcessVector& b,
                       const SimilarityConfig& cfg = {}) {
    return 1.0 - pair_similarity(a, b, cfg);
}

}  // namespace idsim
