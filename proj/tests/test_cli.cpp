#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef IDSIM_CLI_PATH
#error "IDSIM_CLI_PATH must point at the built binary"
#endif
#ifndef IDSIM_DATA_DIR
#error "IDSIM_DATA_DIR must point at the bundled demo CSVs"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "idsim_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout_" + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string("\"") + IDSIM_CLI_PATH + "\" " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string data(const std::string& name) {
    return (fs::path(IDSIM_DATA_DIR) / name).string();
}

}  // namespace

TEST_CASE("cli: validate") {
    auto ok = run_cli("validate " + data("demo_train.csv"));
    REQUIRE(ok.exit_code == 0);
    REQUIRE(ok.out == "ok: 10 processes, 10 calls, labeled\n");

    auto unlabeled = run_cli("validate " + data("demo_test_unlabeled.csv") + " --no-labels");
    REQUIRE(unlabeled.exit_code == 0);
    REQUIRE(unlabeled.out.find("unlabeled") != std::string::npos);

    auto missing_flag = run_cli("validate " + data("demo_test_unlabeled.csv"));
    REQUIRE(missing_flag.exit_code == 1);
    REQUIRE(missing_flag.err.starts_with("error: "));

    auto gone = run_cli("validate /nonexistent.csv");
    REQUIRE(gone.exit_code == 1);
    REQUIRE(gone.err.starts_with("error: "));
}

TEST_CASE("cli: train on the builtin demo") {
    const auto model = (work_dir() / "model.json").string();
    const auto features = (work_dir() / "features.csv").string();

    auto r = run_cli("train --builtin --model " + model + " --features " + features);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.err.find("converged after 4 iterations") != std::string::npos);

    const std::string f = slurp(features);
    REQUIRE(f.starts_with("id,cluster_sim_0,cluster_sim_1,nn_id,nn_sim,total,feature,distance"));
    // P0 feature 0.7626...
    const auto p0 = f.find("\nP0,");
    REQUIRE(p0 != std::string::npos);
    REQUIRE(f.substr(p0).find("0.76260") != std::string::npos);

    // the same training data from CSV yields a byte-identical model
    const auto model2 = (work_dir() / "model2.json").string();
    auto r2 = run_cli("train " + data("demo_train.csv") + " --model " + model2 +
                      " --features " + (work_dir() / "f2.csv").string());
    REQUIRE(r2.exit_code == 0);
    REQUIRE(slurp(model) == slurp(model2));

    // thread count does not change the artifacts
    const auto model4 = (work_dir() / "model4.json").string();
    auto r4 = run_cli("train --builtin --threads 4 --model " + model4 + " --features " +
                      (work_dir() / "f4.csv").string());
    REQUIRE(r4.exit_code == 0);
    REQUIRE(slurp(model) == slurp(model4));
    REQUIRE(slurp(features) == slurp((work_dir() / "f4.csv")));
}

TEST_CASE("cli: train argument errors") {
    const auto model = (work_dir() / "unused.json").string();
    auto k_too_big = run_cli("train --builtin --k 11 --model " + model);
    REQUIRE(k_too_big.exit_code == 1);
    REQUIRE(k_too_big.err.find("k exceeds dataset size") != std::string::npos);

    auto no_seed = run_cli("train --builtin --seeding random --model " + model);
    REQUIRE(no_seed.exit_code == 1);
    REQUIRE(no_seed.err.find("--seed") != std::string::npos);

    auto bad_sigma = run_cli("train --builtin --sigma nope --model " + model);
    REQUIRE(bad_sigma.exit_code == 1);

    auto no_input = run_cli("train --model " + model);
    REQUIRE(no_input.exit_code == 1);
}

TEST_CASE("cli: indices seeding of the first two rows matches first_k") {
    const auto a = (work_dir() / "seed_a.json").string();
    const auto b = (work_dir() / "seed_b.json").string();
    REQUIRE(run_cli("train --builtin --model " + a + " --features " +
                    (work_dir() / "seed_a.csv").string())
                .exit_code == 0);
    REQUIRE(run_cli("train --builtin --seeding indices --indices 0,1 --model " + b +
                    " --features " + (work_dir() / "seed_b.csv").string())
                .exit_code == 0);
    // same seeds, same trajectory; only the config echo differs
    REQUIRE(slurp(work_dir() / "seed_a.csv") == slurp(work_dir() / "seed_b.csv"));
}

TEST_CASE("cli: classify and evaluate the demo test set") {
    const auto model = (work_dir() / "clf_model.json").string();
    REQUIRE(run_cli("train --builtin --model " + model + " --features " +
                    (work_dir() / "clf_feat.csv").string())
                .exit_code == 0);

    const auto preds = (work_dir() / "preds.csv").string();
    auto r = run_cli("classify " + data("demo_test.csv") + " --model " + model +
                     " --builtin-train --out " + preds);
    REQUIRE(r.exit_code == 0);
    const std::string p = slurp(preds);
    REQUIRE(p.find("Ptest,Normal,P3,1") != std::string::npos);
    REQUIRE(p.find("Pnew,Abnormal,P4,1") != std::string::npos);

    // unlabeled input with --no-labels gives the same predictions
    auto unlabeled = run_cli("classify " + data("demo_test_unlabeled.csv") +
                             " --no-labels --model " + model + " --builtin-train");
    REQUIRE(unlabeled.exit_code == 0);
    REQUIRE(unlabeled.out == p);

    // reduced mode agrees on the demo
    auto reduced = run_cli("classify " + data("demo_test.csv") + " --model " + model +
                           " --builtin-train --mode reduced --knn 1");
    REQUIRE(reduced.exit_code == 0);
    REQUIRE(reduced.out.find("Ptest,Normal,P3,0") != std::string::npos);
    REQUIRE(reduced.out.find("Pnew,Abnormal,P4,0") != std::string::npos);

    auto eval = run_cli("evaluate --predictions " + preds + " --truth " + data("demo_test.csv"));
    REQUIRE(eval.exit_code == 0);
    REQUIRE(eval.out.find("tp: 1") != std::string::npos);
    REQUIRE(eval.out.find("detection_rate: 1") != std::string::npos);
    REQUIRE(eval.out.find("false_positive_rate: 0") != std::string::npos);
    REQUIRE(eval.out.find("accuracy: 1") != std::string::npos);

    auto json = run_cli("evaluate --json --predictions " + preds + " --truth " +
                        data("demo_test.csv"));
    REQUIRE(json.exit_code == 0);
    REQUIRE(json.out.find("\"tp\": 1") != std::string::npos);
    REQUIRE(json.out.find("\"accuracy\": 1.0") != std::string::npos);
}

TEST_CASE("cli: classify edge cases") {
    const auto model = (work_dir() / "edge_model.json").string();
    REQUIRE(run_cli("train --builtin --model " + model + " --features " +
                    (work_dir() / "edge_feat.csv").string())
                .exit_code == 0);

    const auto empty = work_dir() / "empty_test.csv";
    std::ofstream(empty) << "id,fchdir,login,pipe,logout,munmap,sysinfo,audition,chdir,pathconf,boom\n";
    auto r = run_cli("classify " + empty.string() + " --no-labels --model " + model +
                     " --builtin-train");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "id,predicted,nn_id,score\n");

    const auto ragged = work_dir() / "ragged_test.csv";
    std::ofstream(ragged)
        << "id,fchdir,login,pipe,logout,munmap,sysinfo,audition,chdir,pathconf,boom\n"
        << "T0,1,2,3,4,5,6,7,8,9,10,11\n";
    auto bad = run_cli("classify " + ragged.string() + " --no-labels --model " + model +
                       " --builtin-train");
    REQUIRE(bad.exit_code == 1);
    REQUIRE(bad.err.find("ragged row") != std::string::npos);

    const auto wrong_vocab = work_dir() / "wrong_vocab.csv";
    std::ofstream(wrong_vocab) << "id,a,b\nT0,1,2\n";
    auto mismatch = run_cli("classify " + wrong_vocab.string() + " --no-labels --model " +
                            model + " --builtin-train");
    REQUIRE(mismatch.exit_code == 1);
    REQUIRE(mismatch.err.find("vocabulary") != std::string::npos);

    auto bad_mode = run_cli("classify " + data("demo_test.csv") + " --model " + model +
                            " --builtin-train --mode fancy");
    REQUIRE(bad_mode.exit_code == 1);
    REQUIRE(bad_mode.err.find("unknown mode") != std::string::npos);
}

TEST_CASE("cli: casestudy reproduction") {
    auto r = run_cli("casestudy");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("0 failures") != std::string::npos);
    REQUIRE(r.out.find("all structural checks passed") != std::string::npos);
    // the two recorded inconsistencies surface as expected divergences
    REQUIRE(r.out.find("8 expected divergences") != std::string::npos);
    REQUIRE(r.out.find("DIV  reduced[P1].nn_sim") != std::string::npos);
    REQUIRE(r.out.find("DIV  reduced[P3].feature") != std::string::npos);
}

TEST_CASE("cli: repeated runs are byte-identical") {
    const auto model = (work_dir() / "det_model.json").string();
    REQUIRE(run_cli("train --builtin --model " + model + " --features " +
                    (work_dir() / "det_feat.csv").string())
                .exit_code == 0);
    const auto a =
        run_cli("classify " + data("demo_test.csv") + " --model " + model + " --builtin-train");
    const auto b = run_cli("classify " + data("demo_test.csv") + " --model " + model +
                           " --builtin-train --threads 4");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE(a.out == b.out);
}
