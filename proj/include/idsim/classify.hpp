#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "idsim/dataset.hpp"
#include "idsim/error.hpp"
#include "idsim/reduce.hpp"
#include "idsim/similarity.hpp"

namespace idsim {

// A classified test process. score is the nearest-neighbor similarity in raw
// mode and the absolute feature difference in reduced mode.
struct Prediction {
    std::string process_id;
    Label predicted = Label::Normal;
    std::string nn_id;
    double score = 0.0;
};

// Raw-vector nearest neighbor: the test process takes the label of its most
// similar training process. An exact match (similarity 1) wins outright, so
// any training member classified against its own set returns itself.
inline Prediction classify_raw(const ProcessVector& p, const LabeledDataset& training,
                               const SimilarityConfig& cfg = {}) {
    if (training.size() == 0) throw Error("classify_raw: empty training set");
    if (!training.labeled()) throw Error("classify_raw: training set has no labels");
    if (p.counts.size() != training.vocabulary.size())
        throw Error("classify_raw: vocabulary mismatch for process '" + p.id + "'");
    std::size_t best = 0;
    double best_sim = -1.0;
    for (std::size_t i = 0; i < training.size(); ++i) {
        const double sim = pair_similarity(std::span<const double>(p.counts),
                                           std::span<const double>(training.processes[i].counts),
                                           cfg);
        if (sim > best_sim) {
            best = i;
            best_sim = sim;
        }
    }
    return Prediction{p.id, training.labels[best], training.processes[best].id, best_sim};
}

// Reduced-feature k-NN: the test process is reduced to its scalar feature,
// matched against the training features by absolute difference, and takes
// the majority label of the k_nn closest. Distance ties go to the lower
// process index; split votes go to Abnormal.
inline Prediction classify_reduced(const ProcessVector& p, const ClusterModel& model,
                                   std::span<const ReducedFeature> training_features,
                                   const LabeledDataset& training,
                                   const SimilarityConfig& cfg = {}, std::size_t k_nn = 1) {
    if (training_features.empty()) throw Error("classify_reduced: no training features");
    if (!training.labeled()) throw Error("classify_reduced: training set has no labels");
    if (training_features.size() != training.size())
        throw Error("classify_reduced: training features do not cover training set");
    if (k_nn < 1 || k_nn > training_features.size())
        throw Error("classify_reduced: k_nn out of range");

    const ReducedFeature f = reduce_test(p, model, training, cfg);
    std::vector<std::size_t> order(training_features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = std::abs(f.feature - training_features[a].feature);
        const double db = std::abs(f.feature - training_features[b].feature);
        if (da != db) return da < db;
        return a < b;
    });

    std::size_t abnormal = 0;
    for (std::size_t r = 0; r < k_nn; ++r)
        if (training.labels[order[r]] == Label::Abnormal) ++abnormal;
    const Label verdict = (2 * abnormal >= k_nn) ? Label::Abnormal : Label::Normal;
    const std::size_t nearest = order.front();
    return Prediction{p.id, verdict, training_features[nearest].process_id,
                      std::abs(f.feature - training_features[nearest].feature)};
}

// Confusion counts with Abnormal as the positive class. Rates with a zero
// denominator are reported as absent rather than zero.
struct EvalReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }

    std::optional<double> detection_rate() const {
        if (tp + fn == 0) return std::nullopt;
        return static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    std::optional<double> false_positive_rate() const {
        if (fp + tn == 0) return std::nullopt;
        return static_cast<double>(fp) / static_cast<double>(fp + tn);
    }
    std::optional<double> accuracy() const {
        if (total() == 0) return std::nullopt;
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

// Scores predictions against a labeled truth set. The two id sets must
// coincide; order is irrelevant.
inline EvalReport evaluate(std::span<const Prediction> predictions,
                           const LabeledDataset& truth) {
    if (!truth.labeled()) throw Error("evaluate: truth set has no labels");
    if (predictions.size() != truth.size())
        throw Error("evaluate: " + std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(truth.size()) + " truth processes");
    EvalReport r;
    std::vector<bool> used(truth.size(), false);
    for (const auto& p : predictions) {
        const std::size_t i = truth.index_of(p.process_id);
        if (used[i]) throw Error("evaluate: duplicate prediction for '" + p.process_id + "'");
        used[i] = true;
        const bool pred_abnormal = p.predicted == Label::Abnormal;
        const bool true_abnormal = truth.labels[i] == Label::Abnormal;
        if (pred_abnormal && true_abnormal) ++r.tp;
        else if (pred_abnormal && !true_abnormal) ++r.fp;
        else if (!pred_abnormal && !true_abnormal) ++r.tn;
        else ++r.fn;
    }
    return r;
}

inline void write_predictions_csv(std::span<const Prediction> predictions, std::ostream& out) {
    out << "id,predicted,nn_id,score\n";
    const auto old_precision = out.precision(17);
    for (const auto& p : predictions)
        out << p.process_id << ',' << to_string(p.predicted) << ',' << p.nn_id << ',' << p.score
            << '\n';
    out.precision(old_precision);
}

inline std::vector<Prediction> read_predictions_csv(std::istream& in,
                                                    const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) throw Error(source + ": missing header row");
    if (detail::split_csv_line(line) != std::vector<std::string>{"id", "predicted", "nn_id", "score"})
        throw Error(source + ": expected header 'id,predicted,nn_id,score'");
    std::vector<Prediction> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 4)
            throw Error(source + ": line " + std::to_string(line_no) + ": ragged row");
        Prediction p;
        p.process_id = cells[0];
        p.predicted = parse_label(cells[1]);
        p.nn_id = cells[2];
        try {
            p.score = std::stod(cells[3]);
        } catch (const std::exception&) {
            throw Error(source + ": line " + std::to_string(line_no) + ": bad score '" +
                        cells[3] + "'");
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Fixed-key text block, one key per line; absent rates print as n/a.
inline std::string format_report(const EvalReport& r) {
    std::ostringstream out;
    out.precision(17);
    auto rate = [&](std::optional<double> v) {
        return v ? [&] { std::ostringstream s; s.precision(17); s << *v; return s.str(); }()
                 : std::string("n/a");
    };
    out << "tp: " << r.tp << '\n'
        << "fp: " << r.fp << '\n'
        << "tn: " << r.tn << '\n'
        << "fn: " << r.fn << '\n'
        << "total: " << r.total() << '\n'
        << "detection_rate: " << rate(r.detection_rate()) << '\n'
        << "false_positive_rate: " << rate(r.false_positive_rate()) << '\n'
        << "accuracy: " << rate(r.accuracy()) << '\n';
    return out.str();
}

inline nlohmann::json report_to_json(const EvalReport& r) {
    auto rate = [](std::optional<double> v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    return nlohmann::json{{"tp", r.tp},
                          {"fp", r.fp},
                          {"tn", r.tn},
                          {"fn", r.fn},
                          {"total", r.total()},
                          {"detection_rate", rate(r.detection_rate())},
                          {"false_positive_rate", rate(r.false_positive_rate())},
                          {"accuracy", rate(r.accuracy())}};
}

}  // namespace idsim
