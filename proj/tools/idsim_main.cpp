// Command-line front end: validate CSV matrices, train a clustering model,
// classify test processes, score predictions, and replay the bundled demo
// dataset against its recorded reference values.
//
// Exit codes: 0 success, 1 validation/input failure, 2 reproduction failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idsim/idsim.hpp"

namespace {

idsim::SimilarityConfig make_similarity(const std::string& sigma, double epsilon,
                                        const idsim::LabeledDataset& training) {
    if (sigma == "std")
        return idsim::SimilarityConfig::per_call_training_std(training, epsilon);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(sigma, &used);
        if (used != sigma.size()) throw std::invalid_argument(sigma);
    } catch (const std::exception&) {
        throw idsim::Error("--sigma expects a positive number or 'std', got '" + sigma + "'");
    }
    if (!(value > 0.0)) throw idsim::Error("--sigma must be positive");
    auto cfg = idsim::SimilarityConfig::constant(value);
    cfg.zero_sigma_epsilon = epsilon;
    return cfg;
}

// Data goes to --out when given, otherwise to standard output.
template <typename WriteFn>
void emit(const std::string& out_path, WriteFn&& write) {
    if (out_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw idsim::Error("cannot write '" + out_path + "'");
    write(out);
    if (!out.good()) throw idsim::Error("write failed for '" + out_path + "'");
}

struct TrainArgs {
    std::string train_path;
    bool builtin = false;
    std::string model_path;
    std::string features_path;
    std::size_t k = 2;
    std::string seeding = "first_k";
    std::vector<std::size_t> indices;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t max_iter = 100;
    std::string sigma = "0.5";
    double epsilon = 1e-6;
    unsigned threads = 1;
};

idsim::LabeledDataset load_training(const std::string& path, bool builtin) {
    if (builtin && !path.empty())
        throw idsim::Error("give either a training CSV or --builtin, not both");
    if (builtin) return idsim::builtin_case_study();
    if (path.empty()) throw idsim::Error("missing training data (CSV path or --builtin)");
    return idsim::load_matrix(path, /*expect_labels=*/true);
}

int run_train(const TrainArgs& a) {
    const auto ds = load_training(a.train_path, a.builtin);

    idsim::ClusterConfig cfg;
    cfg.k = a.k;
    cfg.max_iterations = a.max_iter;
    cfg.threads = a.threads;
    cfg.similarity = make_similarity(a.sigma, a.epsilon, ds);
    if (a.seeding == "first_k") {
        cfg.seeding = idsim::Seeding::first_k();
    } else if (a.seeding == "indices") {
        cfg.seeding = idsim::Seeding::at(a.indices);
    } else if (a.seeding == "random") {
        if (!a.seed_given)
            throw idsim::Error("random seeding requires an explicit --seed");
        cfg.seeding = idsim::Seeding::random(a.seed);
    } else {
        throw idsim::Error("unknown seeding '" + a.seeding + "'");
    }

    const auto model = idsim::cluster(ds, cfg);
    idsim::save_model(idsim::make_model_file(ds.vocabulary, model, cfg), a.model_path);
    std::cerr << "trained k=" << cfg.k << " on " << ds.size() << " processes: "
              << (model.converged ? "converged" : "iteration cap") << " after "
              << model.iterations_run << " iterations\n";

    const auto features = idsim::reduce_training(model, ds, cfg.similarity, a.threads);
    emit(a.features_path,
         [&](std::ostream& out) { idsim::write_features_csv(features, out, model.k); });
    return 0;
}

struct ClassifyArgs {
    std::string test_path;
    std::string model_path;
    std::string train_path;
    bool builtin_train = false;
    bool no_labels = false;
    std::string mode = "raw";
    std::size_t k_nn = 1;
    std::string out_path;
    unsigned threads = 1;
};

int run_classify(const ClassifyArgs& a) {
    const auto mf = idsim::load_model(a.model_path);
    const auto training = load_training(a.train_path, a.builtin_train);
    if (training.vocabulary != mf.vocabulary)
        throw idsim::Error("training data vocabulary does not match the model");
    if (mf.assignment.size() != training.size())
        throw idsim::Error("model was fitted on " + std::to_string(mf.assignment.size()) +
                           " processes, training data has " + std::to_string(training.size()));
    const auto test = idsim::load_matrix(a.test_path, /*expect_labels=*/!a.no_labels);
    if (test.vocabulary != mf.vocabulary)
        throw idsim::Error("test data vocabulary does not match the model");

    std::vector<idsim::Prediction> predictions(test.size());
    if (a.mode == "raw") {
        idsim::parallel_for(test.size(), a.threads, [&](std::size_t i) {
            predictions[i] = idsim::classify_raw(test.processes[i], training, mf.similarity);
        });
    } else if (a.mode == "reduced") {
        const auto model = mf.to_cluster_model();
        const auto features = idsim::reduce_training(model, training, mf.similarity, a.threads);
        idsim::parallel_for(test.size(), a.threads, [&](std::size_t i) {
            predictions[i] = idsim::classify_reduced(test.processes[i], model, features,
                                                     training, mf.similarity, a.k_nn);
        });
    } else {
        throw idsim::Error("unknown mode '" + a.mode + "' (expected raw or reduced)");
    }

    std::cerr << "classified " << predictions.size() << " processes (" << a.mode << " mode)\n";
    emit(a.out_path,
         [&](std::ostream& out) { idsim::write_predictions_csv(predictions, out); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anomaly detection over system-call count matrices"};
    app.require_subcommand(1);
    int rc = 0;

    // validate
    auto* validate = app.add_subcommand("validate", "Check a CSV matrix and report its shape");
    std::string v_path;
    bool v_no_labels = false;
    validate->add_option("csv", v_path, "matrix to check")->required();
    validate->add_flag("--no-labels", v_no_labels, "matrix has no class column");
    validate->callback([&] {
        const auto ds = idsim::load_matrix(v_path, !v_no_labels);
        std::cout << "ok: " << ds.size() << " processes, " << ds.vocabulary.size() << " calls, "
                  << (ds.labeled() ? "labeled" : "unlabeled") << '\n';
    });

    // train
    auto* train = app.add_subcommand("train", "Cluster a labeled training matrix and reduce it");
    TrainArgs t;
    train->add_option("train_csv", t.train_path, "labeled training matrix");
    train->add_flag("--builtin", t.builtin, "train on the bundled demo dataset");
    train->add_option("--model", t.model_path, "output model JSON")->required();
    train->add_option("--features", t.features_path,
                      "output features CSV (standard output when omitted)");
    train->add_option("--k", t.k, "number of clusters")->default_val(2);
    train->add_option("--seeding", t.seeding, "first_k, indices or random")
        ->default_val("first_k");
    train->add_option("--indices", t.indices, "seed process indices for --seeding indices")
        ->delimiter(',');
    auto* seed_opt = train->add_option("--seed", t.seed, "seed for --seeding random");
    train->add_option("--max-iter", t.max_iter, "iteration cap")->default_val(100);
    train->add_option("--sigma", t.sigma, "Gaussian width: positive number or 'std'")
        ->default_val("0.5");
    train->add_option("--epsilon", t.epsilon, "substitute for zero per-call widths")
        ->default_val(1e-6);
    train->add_option("--threads", t.threads, "worker threads")->default_val(1);
    train->callback([&] {
        t.seed_given = seed_opt->count() > 0;
        rc = run_train(t);
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Label test processes by nearest neighbor");
    ClassifyArgs c;
    classify->add_option("test_csv", c.test_path, "test matrix")->required();
    classify->add_option("--model", c.model_path, "trained model JSON")->required();
    classify->add_option("--train", c.train_path, "labeled training matrix the model was fit on");
    classify->add_flag("--builtin-train", c.builtin_train,
                       "use the bundled demo dataset as training data");
    classify->add_flag("--no-labels", c.no_labels, "test matrix has no class column");
    classify->add_option("--mode", c.mode, "raw or reduced")->default_val("raw");
    classify->add_option("--knn", c.k_nn, "neighbors for reduced mode")->default_val(1);
    classify->add_option("--out", c.out_path, "output predictions CSV (standard output when omitted)");
    classify->add_option("--threads", c.threads, "worker threads")->default_val(1);
    classify->callback([&] { rc = run_classify(c); });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against labeled truth");
    std::string e_pred, e_truth;
    bool e_json = false;
    evaluate->add_option("--predictions", e_pred, "predictions CSV")->required();
    evaluate->add_option("--truth", e_truth, "labeled truth matrix")->required();
    evaluate->add_flag("--json", e_json, "emit JSON instead of the text block");
    evaluate->callback([&] {
        std::ifstream in(e_pred);
        if (!in) throw idsim::Error("cannot open '" + e_pred + "'");
        const auto predictions = idsim::read_predictions_csv(in, e_pred);
        const auto truth = idsim::load_matrix(e_truth, /*expect_labels=*/true);
        const auto report = idsim::evaluate(predictions, truth);
        if (e_json)
            std::cout << idsim::report_to_json(report).dump(2) << '\n';
        else
            std::cout << idsim::format_report(report);
    });

    // casestudy
    auto* casestudy = app.add_subcommand(
        "casestudy", "Recompute the bundled demo dataset against its reference values");
    unsigned cs_threads = 1;
    casestudy->add_option("--threads", cs_threads, "worker threads")->default_val(1);
    casestudy->callback([&] {
        const auto report = idsim::reproduce_case_study(cs_threads);
        idsim::print_case_study_report(report, std::cout);
        rc = report.passed() ? 0 : 2;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const idsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
