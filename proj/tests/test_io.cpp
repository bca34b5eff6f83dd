#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "corrclust/rng.hpp"
#include "corrclust/synth.hpp"
#include "corrclust/text_io.hpp"

using namespace corrclust;

namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("corrclust-io-" + std::to_string(Catch::rngSeed()) + "-" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }

    static int& counter() {
        static int value = 0;
        return value;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("logit file roundtrip is bit-exact") {
    TempDir dir;
    Rng rng(61);
    LogitMatrix m(9);
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j)
            m.set(i, j, rng.normal(0.0, 2.0) * std::exp2(double(int(rng.below(41)) - 20)));
    // extreme but finite magnitudes must survive as well
    m.set(0, 1, std::numeric_limits<double>::max());
    m.set(0, 2, -std::numeric_limits<double>::denorm_min());
    m.set(0, 3, 0.1);  // not exactly representable
    const auto path = dir.file("scores.tsv");
    write_logits(m, path);
    const auto back = read_logits(path);
    REQUIRE(back.size() == m.size());
    REQUIRE(back.values() == m.values());
}

TEST_CASE("logit file error cases") {
    TempDir dir;
    SECTION("missing pair") {
        const auto path = dir.file("missing.tsv");
        write_text(path, "#logits n=3\n0\t1\t1.5\n1\t2\t-0.5\n");
        REQUIRE_THROWS_MATCHES(read_logits(path), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::missing_pair;
                               }));
    }
    SECTION("duplicate pair") {
        const auto path = dir.file("duplicate.tsv");
        write_text(path, "#logits n=2\n0\t1\t1.5\n0\t1\t2.5\n");
        REQUIRE_THROWS_MATCHES(read_logits(path), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::duplicate_pair;
                               }));
    }
    SECTION("non-finite value") {
        const auto path = dir.file("inf.tsv");
        write_text(path, "#logits n=2\n0\t1\tinf\n");
        REQUIRE_THROWS_MATCHES(read_logits(path), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::non_finite;
                               }));
    }
    SECTION("garbled value") {
        const auto path = dir.file("garbled.tsv");
        write_text(path, "#logits n=2\n0\t1\tpotato\n");
        REQUIRE_THROWS_MATCHES(read_logits(path), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::parse_error;
                               }));
    }
    SECTION("wrong header") {
        const auto path = dir.file("header.tsv");
        write_text(path, "#partition n=2\n0\t1\t0.5\n");
        REQUIRE_THROWS_AS(read_logits(path), Error);
    }
    SECTION("missing file") {
        REQUIRE_THROWS_MATCHES(read_logits(dir.file("nope.tsv")), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::io_error;
                               }));
    }
}

TEST_CASE("partition file roundtrip and cluster ids") {
    TempDir dir;
    const auto p = Partition::from_clusters(5, {{1, 3}, {0, 4}, {2}});
    const auto path = dir.file("partition.tsv");
    write_partition(p, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "#partition n=5");
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "0\t0");  // cluster ids are positions in smallest-member order

    REQUIRE(read_partition(path) == p);
}

TEST_CASE("pair labeling roundtrip, including inconsistent labelings") {
    TempDir dir;
    PairLabeling y(4);
    y.set(0, 1, 1);
    y.set(1, 2, 1);  // inconsistent on purpose; the format does not care
    const auto path = dir.file("pairs.tsv");
    write_pair_labeling(y, path);
    REQUIRE(read_pair_labeling(path) == y);
}

TEST_CASE("cross scores roundtrip") {
    TempDir dir;
    Rng rng(62);
    CrossScores cross(3, 5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) cross.set(i, j, rng.normal());
    const auto path = dir.file("cross.tsv");
    write_cross(cross, path);
    const auto back = read_cross(path);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 5);
    REQUIRE(back.values() == cross.values());

    write_text(dir.file("short.tsv"), "#cross n1=2 n2=2\n0\t0\t1.0\n");
    REQUIRE_THROWS_MATCHES(read_cross(dir.file("short.tsv")), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == errc::incomplete_cross;
                           }));
}

TEST_CASE("groups, features, classes, assignments roundtrip") {
    TempDir dir;
    GroupLabels groups{{"B", "U", "N", "B"}};
    write_groups(groups, dir.file("groups.tsv"));
    REQUIRE(read_groups(dir.file("groups.tsv")).tags == groups.tags);

    const auto data = sample_embeddings({2, 2}, 3, 5.0, 1.0, 63);
    write_features(data.features, dir.file("features.tsv"));
    const auto features = read_features(dir.file("features.tsv"));
    REQUIRE(features.n == data.features.n);
    REQUIRE(features.m == data.features.m);
    REQUIRE(features.x == data.features.x);

    write_classes(data.class_of, dir.file("classes.tsv"));
    REQUIRE(read_classes(dir.file("classes.tsv")) == data.class_of);

    const std::vector<int> assignment{2, 0, 1};
    write_assignments(assignment, dir.file("assign.tsv"));
    REQUIRE(read_assignments(dir.file("assign.tsv")) == assignment);
}

TEST_CASE("model file roundtrip") {
    TempDir dir;
    const auto params = ModelParams::validated(2, {0.5, -0.25, 1.0 / 3.0, 2.0, -1.75}, 100.0);
    write_model(params, dir.file("model.tsv"));
    const auto back = read_model(dir.file("model.tsv"));
    REQUIRE(back.m == params.m);
    REQUIRE(back.tau == params.tau);
    REQUIRE(back.theta == params.theta);

    write_text(dir.file("bad.tsv"), "#model m=1\ntau\t1.0\n0\t2.0\n1\t0.0\n2\t0.0\n");
    REQUIRE_THROWS_MATCHES(read_model(dir.file("bad.tsv")), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == errc::out_of_range;  // theta outside [-tau,tau]
                           }));
}
