#include <catch_amalgamated.hpp>

#include "corrclust/classify.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/synth.hpp"

using namespace corrclust;

TEST_CASE("assign_to_clusters") {
    SECTION("sums of log-odds decide the cluster") {
        // cluster 0 = {0,1} with scores {+1,+2}, cluster 1 = {2,3} with {-1,+1}
        const auto train = Partition::from_clusters(4, {{0, 1}, {2, 3}});
        CrossScores cross(1, 4);
        cross.set(0, 0, 1.0);
        cross.set(0, 1, 2.0);
        cross.set(0, 2, -1.0);
        cross.set(0, 3, 1.0);
        REQUIRE(assign_to_clusters(cross, train) == std::vector<int>{0});
    }
    SECTION("an overwhelming cluster wins") {
        const auto train = Partition::from_clusters(4, {{0, 1}, {2, 3}});
        CrossScores cross(2, 4);
        for (int a = 0; a < 2; ++a)
            for (int u = 0; u < 4; ++u) cross.set(a, u, u >= 2 ? 30.0 : -30.0);
        REQUIRE(assign_to_clusters(cross, train) == std::vector<int>{1, 1});
    }
    SECTION("exact ties go to the lower cluster id") {
        const auto train = Partition::from_clusters(2, {{0}, {1}});
        CrossScores cross(1, 2);
        cross.set(0, 0, 0.5);
        cross.set(0, 1, 0.5);
        REQUIRE(assign_to_clusters(cross, train) == std::vector<int>{0});
    }
    SECTION("invariant under positive scaling") {
        const auto train = Partition::from_clusters(5, {{0, 1}, {2}, {3, 4}});
        Rng rng(51);
        CrossScores cross(6, 5), scaled(6, 5);
        for (int a = 0; a < 6; ++a)
            for (int u = 0; u < 5; ++u) {
                const double v = rng.normal(0.0, 2.0);
                cross.set(a, u, v);
                scaled.set(a, u, 8.0 * v);
            }
        REQUIRE(assign_to_clusters(cross, train) == assign_to_clusters(scaled, train));
    }
    SECTION("noiseless cross scores recover the true classes") {
        const std::vector<int> test_classes{2, 0, 1, 1};
        const std::vector<int> train_classes{0, 0, 1, 1, 2, 2};
        const auto cross = sample_cross_logits(test_classes, train_classes, {1.5, 1.5, 0.0}, 3);
        const auto train_truth = Partition::from_clusters(6, {{0, 1}, {2, 3}, {4, 5}});
        REQUIRE(assign_to_clusters(cross, train_truth) == test_classes);
    }
    SECTION("wrong cross width is rejected") {
        const auto train = Partition::singletons(3);
        CrossScores cross(2, 4);
        REQUIRE_THROWS_MATCHES(assign_to_clusters(cross, train), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::incomplete_cross;
                               }));
    }
}

TEST_CASE("induced_pair_labeling") {
    SECTION("one class joins everything") {
        const auto y = induced_pair_labeling({3, 3, 3});
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) REQUIRE(y(i, j) == 1);
    }
    SECTION("distinct classes cut everything") {
        const auto y = induced_pair_labeling({0, 1, 2});
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) REQUIRE(y(i, j) == 0);
    }
    SECTION("matches the partition of equal labels") {
        REQUIRE(induced_pair_labeling({0, 0, 1, 1}) ==
                labeling_from_partition(Partition::from_clusters(4, {{0, 1}, {2, 3}})));
    }
    SECTION("always consistent") {
        Rng rng(52);
        for (int round = 0; round < 50; ++round) {
            std::vector<int> assignment(6);
            for (int& a : assignment) a = int(rng.below(4));
            REQUIRE(is_consistent(induced_pair_labeling(assignment)));
        }
    }
    SECTION("unassigned elements are rejected") {
        REQUIRE_THROWS_MATCHES(induced_pair_labeling({0, -1, 2}), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::unassigned;
                               }));
    }
}

TEST_CASE("classification_accuracy") {
    REQUIRE(classification_accuracy({1, 2, 3}, {1, 2, 3}) == 1.0);
    REQUIRE(classification_accuracy({1, 2, 3}, {2, 3, 1}) == 0.0);
    REQUIRE(classification_accuracy({1, 2, 3, 4}, {1, 2, 3, 0}) == 0.75);
    REQUIRE_THROWS_AS(classification_accuracy({1}, {1, 2}), Error);
}
