#include <catch_amalgamated.hpp>

#include "corrclust/partition.hpp"
#include "corrclust/rng.hpp"

using namespace corrclust;

namespace {

Partition random_partition(Rng& rng, int n) {
    std::vector<int> labels(n);
    const int k = int(rng.below(n)) + 1;
    for (int e = 0; e < n; ++e) labels[e] = int(rng.below(k));
    return Partition::from_assignments(labels);
}

PairLabeling random_labeling(Rng& rng, int n) {
    PairLabeling y(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) y.set(i, j, std::uint8_t(rng.below(2)));
    return y;
}

// direct check of all triangle inequalities y_ab + y_bc - 1 <= y_ac
bool transitive_by_enumeration(const PairLabeling& y) {
    const int n = y.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                if (int(y(a, b)) + int(y(b, c)) - 1 > int(y(a, c))) return false;
            }
    return true;
}

}  // namespace

TEST_CASE("pair indexing is a dense bijection") {
    const int n = 7;
    std::vector<char> hit(pair_count(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const std::size_t k = pair_index(i, j, n);
            REQUIRE(k < hit.size());
            REQUIRE(!hit[k]);
            hit[k] = 1;
        }
    REQUIRE(pair_index(0, 1, n) == 0);
    REQUIRE(pair_index(n - 2, n - 1, n) == pair_count(n) - 1);
}

TEST_CASE("labeling_from_partition") {
    SECTION("singletons carry no joins") {
        const auto y = labeling_from_partition(Partition::singletons(3));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) REQUIRE(y(i, j) == 0);
    }
    SECTION("one cluster joins everything") {
        const auto p = Partition::from_clusters(3, {{0, 1, 2}});
        const auto y = labeling_from_partition(p);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) REQUIRE(y(i, j) == 1);
    }
    SECTION("two pairs: exactly the within-cluster pairs are joins") {
        const auto p = Partition::from_clusters(4, {{0, 1}, {2, 3}});
        const auto y = labeling_from_partition(p);
        REQUIRE(y(0, 1) == 1);
        REQUIRE(y(2, 3) == 1);
        REQUIRE(y(0, 2) == 0);
        REQUIRE(y(0, 3) == 0);
        REQUIRE(y(1, 2) == 0);
        REQUIRE(y(1, 3) == 0);
    }
}

TEST_CASE("is_consistent") {
    SECTION("transitivity violation is detected") {
        PairLabeling y(3);
        y.set(0, 1, 1);
        y.set(1, 2, 1);
        REQUIRE_FALSE(is_consistent(y));
    }
    SECTION("partition labelings are consistent by construction") {
        Rng rng(41);
        for (int round = 0; round < 50; ++round) {
            const int n = 2 + int(rng.below(7));
            REQUIRE(is_consistent(labeling_from_partition(random_partition(rng, n))));
        }
    }
    SECTION("all-zeros is the singleton partition") {
        REQUIRE(is_consistent(PairLabeling(5)));
    }
    SECTION("agrees with triangle-inequality enumeration for n <= 6") {
        Rng rng(42);
        for (int round = 0; round < 300; ++round) {
            const int n = 3 + int(rng.below(4));
            const auto y = random_labeling(rng, n);
            REQUIRE(is_consistent(y) == transitive_by_enumeration(y));
        }
    }
}

TEST_CASE("partition_from_labeling") {
    SECTION("all ones yields one cluster") {
        PairLabeling y(3);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) y.set(i, j, 1);
        REQUIRE(partition_from_labeling(y) == Partition::from_clusters(3, {{0, 1, 2}}));
    }
    SECTION("one join among four elements") {
        PairLabeling y(4);
        y.set(0, 1, 1);
        REQUIRE(partition_from_labeling(y) == Partition::from_clusters(4, {{0, 1}, {2}, {3}}));
    }
    SECTION("inconsistent labeling is rejected") {
        PairLabeling y(3);
        y.set(0, 1, 1);
        y.set(1, 2, 1);
        REQUIRE_THROWS_MATCHES(partition_from_labeling(y), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::inconsistent_labeling;
                               }));
    }
    SECTION("roundtrip over random partitions") {
        Rng rng(43);
        for (int round = 0; round < 100; ++round) {
            const int n = 1 + int(rng.below(10));
            const auto p = random_partition(rng, n);
            REQUIRE(partition_from_labeling(labeling_from_partition(p)) == p);
        }
    }
    SECTION("succeeds exactly when consistent") {
        Rng rng(44);
        for (int round = 0; round < 200; ++round) {
            const int n = 3 + int(rng.below(4));
            const auto y = random_labeling(rng, n);
            bool ok = true;
            try {
                const auto p = partition_from_labeling(y);
                REQUIRE(labeling_from_partition(p) == y);
            } catch (const Error& e) {
                REQUIRE(e.code() == errc::inconsistent_labeling);
                ok = false;
            }
            REQUIRE(ok == is_consistent(y));
        }
    }
}

TEST_CASE("partition validation and normal form") {
    REQUIRE_THROWS_AS(Partition::from_clusters(3, {{0, 1}}), Error);           // uncovered
    REQUIRE_THROWS_AS(Partition::from_clusters(3, {{0, 1, 2}, {}}), Error);    // empty cluster
    REQUIRE_THROWS_AS(Partition::from_clusters(3, {{0, 1}, {1, 2}}), Error);   // overlap
    REQUIRE_THROWS_AS(Partition::from_clusters(3, {{0, 1}, {2, 3}}), Error);   // out of range

    const auto p = Partition::from_clusters(5, {{4, 2}, {3, 0}, {1}});
    REQUIRE(p.clusters() == std::vector<std::vector<int>>{{0, 3}, {1}, {2, 4}});
    REQUIRE(p.cluster_of() == std::vector<int>{0, 1, 2, 0, 2});
}

TEST_CASE("restrict_to_prefix keeps the leading elements") {
    const auto p = Partition::from_clusters(6, {{0, 3, 4}, {1, 5}, {2}});
    REQUIRE(restrict_to_prefix(p, 4) == Partition::from_clusters(4, {{0, 3}, {1}, {2}}));
    REQUIRE(restrict_to_prefix(p, 6) == p);
    REQUIRE_THROWS_AS(restrict_to_prefix(p, 0), Error);
}
