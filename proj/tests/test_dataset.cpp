#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idsim/case_study.hpp"
#include "idsim/dataset.hpp"

using namespace idsim;

namespace {

LabeledDataset parse(const std::string& csv, bool expect_labels) {
    std::istringstream in(csv);
    return parse_matrix(in, expect_labels, "<test>");
}

}  // namespace

TEST_CASE("builtin case study matches the recorded matrix") {
    const auto ds = builtin_case_study();
    REQUIRE(ds.size() == 10);
    REQUIRE(ds.vocabulary.size() == 10);
    REQUIRE(ds.labeled());
    REQUIRE_NOTHROW(ds.validate());

    REQUIRE(ds.processes[1].counts == std::vector<double>{0, 0, 1, 1, 1, 6, 0, 0, 0, 0});
    REQUIRE(ds.processes[7].counts == ds.processes[8].counts);

    std::size_t normal = 0;
    for (auto l : ds.labels)
        if (l == Label::Normal) ++normal;
    REQUIRE(normal == 4);
    REQUIRE(ds.labels.size() - normal == 6);
    for (std::size_t i = 0; i < 4; ++i) REQUIRE(ds.labels[i] == Label::Normal);
}

TEST_CASE("parse_matrix reads the demo matrix format") {
    const auto ds = parse(
        "id,S1,S2,S3,S4,S5,S6,S7,S8,S9,S10,class\n"
        "P0,1,1,0,1,1,1,1,0,0,1,Normal\n"
        "P1,0,0,1,1,1,6,0,0,0,0,normal\n"
        "P4,1,2,0,1,0,0,0,0,0,1,ABNORMAL\n",
        true);
    REQUIRE(ds.size() == 3);
    REQUIRE(ds.vocabulary.names.front() == "S1");
    REQUIRE(ds.processes[0].counts == std::vector<double>{1, 1, 0, 1, 1, 1, 1, 0, 0, 1});
    REQUIRE(ds.labels == std::vector<Label>{Label::Normal, Label::Normal, Label::Abnormal});
    // order preserved
    REQUIRE(ds.processes[0].id == "P0");
    REQUIRE(ds.processes[2].id == "P4");
}

TEST_CASE("header-only file is an empty, valid dataset") {
    const auto ds = parse("id,S1,S2,class\n", true);
    REQUIRE(ds.size() == 0);
    REQUIRE(ds.vocabulary.size() == 2);
    const auto unlabeled = parse("id,S1,S2\n", false);
    REQUIRE(unlabeled.size() == 0);
    REQUIRE_FALSE(unlabeled.labeled());
}

TEST_CASE("parse_matrix error paths") {
    SECTION("ragged row") {
        REQUIRE_THROWS_WITH(parse("id,S1,S2,class\nP0,1,Normal\n", true),
                            Catch::Matchers::ContainsSubstring("ragged row"));
    }
    SECTION("negative count") {
        REQUIRE_THROWS_WITH(parse("id,S1,class\nP0,-1,Normal\n", true),
                            Catch::Matchers::ContainsSubstring("negative count"));
    }
    SECTION("non-integer count") {
        REQUIRE_THROWS_WITH(parse("id,S1,class\nP0,1.5,Normal\n", true),
                            Catch::Matchers::ContainsSubstring("nonnegative integer"));
    }
    SECTION("duplicate process id") {
        REQUIRE_THROWS_WITH(parse("id,S1,class\nP0,1,Normal\nP0,2,Normal\n", true),
                            Catch::Matchers::ContainsSubstring("duplicate process id"));
    }
    SECTION("unknown label token") {
        REQUIRE_THROWS_WITH(parse("id,S1,class\nP0,1,weird\n", true),
                            Catch::Matchers::ContainsSubstring("unknown label token"));
    }
    SECTION("missing class column when labels expected") {
        REQUIRE_THROWS_WITH(parse("id,S1,S2\nP0,1,2\n", true),
                            Catch::Matchers::ContainsSubstring("class"));
    }
    SECTION("unexpected class column in no-labels mode") {
        REQUIRE_THROWS_WITH(parse("id,S1,class\nP0,1,Normal\n", false),
                            Catch::Matchers::ContainsSubstring("class"));
    }
    SECTION("bad header") {
        REQUIRE_THROWS_WITH(parse("process,S1,class\n", true),
                            Catch::Matchers::ContainsSubstring("header"));
    }
    SECTION("duplicate call names") {
        REQUIRE_THROWS_AS(parse("id,S1,S1,class\n", true), Error);
    }
}

TEST_CASE("load_matrix reports a missing file") {
    REQUIRE_THROWS_WITH(load_matrix("/nonexistent/never.csv", true),
                        Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("CSV round trip is lossless") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> count(0, 10);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int rep = 0; rep < 20; ++rep) {
        LabeledDataset ds;
        const std::size_t calls = 1 + rng() % 12;
        for (std::size_t s = 0; s < calls; ++s) ds.vocabulary.names.push_back("c" + std::to_string(s));
        const std::size_t n = rng() % 8;
        const bool labeled = coin(rng) == 1;
        for (std::size_t i = 0; i < n; ++i) {
            ProcessVector p;
            p.id = "proc" + std::to_string(i);
            for (std::size_t s = 0; s < calls; ++s) p.counts.push_back(count(rng));
            ds.processes.push_back(std::move(p));
            if (labeled) ds.labels.push_back(coin(rng) ? Label::Abnormal : Label::Normal);
        }
        ds.validate();

        std::ostringstream out;
        write_matrix(ds, out);
        REQUIRE(parse(out.str(), ds.labeled()) == ds);
    }
}

TEST_CASE("shipped demo CSV equals the builtin fixture cell for cell") {
    const auto from_file =
        load_matrix(std::filesystem::path(IDSIM_DATA_DIR) / "demo_train.csv", true);
    REQUIRE(from_file == builtin_case_study());
}

TEST_CASE("builtin case study survives a CSV round trip") {
    const auto ds = builtin_case_study();
    std::ostringstream out;
    write_matrix(ds, out);
    REQUIRE(parse(out.str(), true) == ds);
}

TEST_CASE("label parsing is case-insensitive, everything else rejected") {
    REQUIRE(parse_label("Normal") == Label::Normal);
    REQUIRE(parse_label("abnormal") == Label::Abnormal);
    REQUIRE(parse_label("ABNORMAL") == Label::Abnormal);
    REQUIRE_THROWS_AS(parse_label("attack"), Error);
    REQUIRE_THROWS_AS(parse_label(""), Error);
}
