#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "idsim/case_study.hpp"
#include "idsim/classify.hpp"
#include "idsim/error.hpp"
#include "idsim/kmeans.hpp"
#include "idsim/reduce.hpp"
#include "idsim/similarity.hpp"

namespace idsim {

// Default tolerance against the four-decimal reference values.
inline constexpr double kReferenceTolerance = 5e-4;

enum class Verdict { Ok, ExpectedDivergence, Fail };

struct CellCheck {
    std::string cell;
    double computed = 0.0;
    double recorded = 0.0;
    double tolerance = kReferenceTolerance;
    Verdict verdict = Verdict::Ok;
    std::string note;
};

struct SetCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

// Cell-by-cell comparison of a fresh pipeline run against the recorded
// reference values for the bundled demo dataset.
struct CaseStudyReport {
    std::vector<CellCheck> cells;
    std::vector<SetCheck> sets;

    std::size_t count(Verdict v) const {
        std::size_t n = 0;
        for (const auto& c : cells)
            if (c.verdict == v) ++n;
        return n;
    }
    bool sets_ok() const {
        for (const auto& s : sets)
            if (!s.ok) return false;
        return true;
    }
    bool passed() const { return count(Verdict::Fail) == 0 && sets_ok(); }
};

namespace detail {

inline void check_cell(CaseStudyReport& report, std::string cell, double computed,
                       double recorded, double tolerance, bool divergence_expected,
                       std::string note = {}) {
    CellCheck c{std::move(cell), computed, recorded, tolerance, Verdict::Ok, std::move(note)};
    if (std::abs(computed - recorded) > tolerance)
        c.verdict = divergence_expected ? Verdict::ExpectedDivergence : Verdict::Fail;
    report.cells.push_back(std::move(c));
}

inline std::string format_cluster_sets(const Assignment& assignment, std::size_t k) {
    std::string out;
    for (std::size_t j = 0; j < k; ++j) {
        out += j == 0 ? "[" : " [";
        bool first = true;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == j) {
                if (!first) out += ",";
                out += std::to_string(i);
                first = false;
            }
        out += "]";
    }
    return out;
}

inline void check_clusters(CaseStudyReport& report, const std::string& name,
                           const Assignment& assignment,
                           const std::array<std::vector<std::size_t>, 2>& expected) {
    std::array<std::set<std::size_t>, 2> got;
    for (std::size_t i = 0; i < assignment.size(); ++i) got[assignment[i]].insert(i);
    std::array<std::set<std::size_t>, 2> want;
    for (std::size_t j = 0; j < 2; ++j) want[j] = {expected[j].begin(), expected[j].end()};
    SetCheck s{name, got == want, format_cluster_sets(assignment, 2)};
    report.sets.push_back(std::move(s));
}

}  // namespace detail

inline CaseStudyReport reproduce_case_study(unsigned threads = 1) {
    const LabeledDataset ds = builtin_case_study();
    ClusterConfig cfg = case_study_config();
    cfg.threads = threads;
    const CaseStudyReference& ref = case_study_reference();
    CaseStudyReport report;

    // Initial centers must be exact copies of the first two rows.
    const auto seeds = seed(ds, cfg);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t s = 0; s < ds.vocabulary.size(); ++s)
            detail::check_cell(report, "seed[c" + std::to_string(j) + "][" +
                                           ds.vocabulary.names[s] + "]",
                               seeds[j].values[s], ds.processes[j].counts[s], 0.0, false);

    // Replay the clustering stage by stage against the recorded trace.
    auto centroids = seeds;
    Assignment assignment;
    for (std::size_t stage = 0; stage < ref.stages.size(); ++stage) {
        const auto table = similarity_table(ds, centroids, cfg);
        const std::string tag = "stage" + std::to_string(stage + 1);
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (std::size_t j = 0; j < 2; ++j)
                detail::check_cell(report,
                                   tag + ".sim[" + ds.processes[i].id + "][c" +
                                       std::to_string(j) + "]",
                                   table[i][j], ref.stages[stage].rows[i].sims[j],
                                   kReferenceTolerance, false);
        assignment = assign(ds, centroids, cfg);
        detail::check_clusters(report, tag + ".clusters", assignment, ref.stages[stage].clusters);
        centroids = update_centroids(ds, assignment, cfg.k, cfg.similarity);
    }

    // The full run must converge right after the recorded stages, with the
    // last stage repeated as the convergence check.
    const ClusterModel model = cluster(ds, cfg);
    report.sets.push_back(SetCheck{"clustering.converged", model.converged,
                                   model.converged ? "converged" : "hit iteration cap"});
    report.sets.push_back(
        SetCheck{"clustering.iterations",
                 model.iterations_run == ref.stages.size() + 1,
                 std::to_string(model.iterations_run) + " iterations"});
    detail::check_clusters(report, "final.clusters", model.assignment, ref.final_clusters);

    // Final center similarities and cluster allotment per process.
    const auto final_table = similarity_table(ds, model.centroids, cfg);
    bool allotment_ok = true;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < 2; ++j)
            detail::check_cell(report,
                               "final.sim[" + ds.processes[i].id + "][c" + std::to_string(j) +
                                   "]",
                               final_table[i][j], ref.final_rows[i].cluster_sims[j],
                               kReferenceTolerance, false);
        if (model.assignment[i] != ref.final_rows[i].cluster) allotment_ok = false;
    }
    report.sets.push_back(SetCheck{"final.allotment", allotment_ok, ""});

    // Pairwise similarities among the recorded cluster-0 members, plus the
    // lone P2/P3 pair.
    for (std::size_t a = 0; a < ref.pair_ids.size(); ++a)
        for (std::size_t b = a + 1; b < ref.pair_ids.size(); ++b) {
            const auto& pa = ds.processes[ds.index_of(ref.pair_ids[a])];
            const auto& pb = ds.processes[ds.index_of(ref.pair_ids[b])];
            detail::check_cell(report, "pair[" + pa.id + "][" + pb.id + "]",
                               pair_similarity(pa, pb, cfg.similarity), ref.pair_matrix[a][b],
                               kReferenceTolerance, false);
        }
    detail::check_cell(report, "pair[P2][P3]",
                       pair_similarity(ds.processes[2], ds.processes[3], cfg.similarity),
                       ref.p2_p3_similarity, kReferenceTolerance, false);

    // Reduction: nearest neighbors, totals, features, distances. The rows
    // named in nn_inconsistent carry recorded values that contradict the
    // recorded pairwise matrix; recomputation is expected to diverge there.
    const auto features = reduce_training(model, ds, cfg.similarity, threads);
    bool nn_ids_ok = true;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& row = ref.final_rows[i];
        const auto& f = features[i];
        const bool transposed =
            std::find(ref.nn_inconsistent.begin(), ref.nn_inconsistent.end(), f.process_id) !=
            ref.nn_inconsistent.end();
        const std::string note =
            transposed ? "recorded value contradicts the recorded pairwise matrix" : "";
        if (f.nn_id != row.nn_id) nn_ids_ok = false;
        detail::check_cell(report, "reduced[" + f.process_id + "].nn_sim", f.nn_sim, row.nn_sim,
                           kReferenceTolerance, transposed, note);
        detail::check_cell(report, "reduced[" + f.process_id + "].total", f.total, row.total,
                           kReferenceTolerance, transposed, note);
        detail::check_cell(report, "reduced[" + f.process_id + "].feature", f.feature,
                           row.feature, kReferenceTolerance, transposed, note);
        detail::check_cell(report, "reduced[" + f.process_id + "].distance", f.distance,
                           row.distance, kReferenceTolerance, transposed, note);
    }
    report.sets.push_back(SetCheck{"reduced.nn_ids", nn_ids_ok, ""});

    // New-process classification through the raw nearest-neighbor path.
    bool tests_ok = true;
    for (const auto& t : ref.tests) {
        const Prediction pred = classify_raw(t.process, ds, cfg.similarity);
        detail::check_cell(report, "test[" + t.process.id + "].nn_sim", pred.score, t.nn_sim,
                           0.0, false);
        if (pred.nn_id != t.nn_id || pred.predicted != t.label) tests_ok = false;
    }
    report.sets.push_back(SetCheck{"test.classification", tests_ok, ""});

    return report;
}

inline void print_case_study_report(const CaseStudyReport& report, std::ostream& out) {
    const auto flags = out.flags();
    for (const auto& c : report.cells) {
        const char* verdict = c.verdict == Verdict::Ok ? "ok  "
                              : c.verdict == Verdict::ExpectedDivergence ? "DIV " : "FAIL";
        out << verdict << ' ' << std::left << std::setw(28) << c.cell << std::right
            << " computed=" << std::fixed << std::setprecision(6) << c.computed
            << " recorded=" << std::setprecision(4) << c.recorded << std::defaultfloat
            << " tol=" << c.tolerance;
        if (!c.note.empty()) out << "  (" << c.note << ')';
        out << '\n';
    }
    for (const auto& s : report.sets) {
        out << (s.ok ? "ok  " : "FAIL") << ' ' << std::left << std::setw(28) << s.name
            << std::right;
        if (!s.detail.empty()) out << ' ' << s.detail;
        out << '\n';
    }
    out << "summary: " << report.cells.size() << " cells, " << report.count(Verdict::Ok)
        << " ok, " << report.count(Verdict::ExpectedDivergence) << " expected divergences, "
        << report.count(Verdict::Fail) << " failures; "
        << (report.sets_ok() ? "all" : "NOT all") << " structural checks passed\n";
    out.flags(flags);
}

}  // namespace idsim
