#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "corrclust/instance.hpp"
#include "corrclust/rng.hpp"

using namespace corrclust;
using Catch::Matchers::WithinAbs;

TEST_CASE("logit_to_prob") {
    REQUIRE(logit_to_prob(0.0) == 0.5);
    REQUIRE_THAT(logit_to_prob(1.0), WithinAbs(2.0 / 3.0, 1e-15));
    REQUIRE_THAT(logit_to_prob(2.0), WithinAbs(0.8, 1e-15));
    REQUIRE_THROWS_AS(logit_to_prob(std::numeric_limits<double>::quiet_NaN()), Error);
    REQUIRE_THROWS_AS(logit_to_prob(std::numeric_limits<double>::infinity()), Error);

    SECTION("strictly increasing") {
        double previous = 0.0;
        for (int k = -60; k <= 60; ++k) {
            const double p = logit_to_prob(0.5 * k);
            REQUIRE(p > 0.0);
            REQUIRE(p < 1.0);
            if (k > -60) REQUIRE(p > previous);
            previous = p;
        }
    }
}

TEST_CASE("prob_to_logit") {
    REQUIRE(prob_to_logit(0.5) == 0.0);
    REQUIRE_THAT(prob_to_logit(0.8), WithinAbs(2.0, 1e-15));
    REQUIRE_THROWS_AS(prob_to_logit(0.0), Error);
    REQUIRE_THROWS_AS(prob_to_logit(1.0), Error);
    REQUIRE_THROWS_AS(prob_to_logit(-0.1), Error);

    // Roundtrip. Exactness is limited by the spacing of doubles near p = 1:
    // recovering x from p loses about 2^(|x|-53) of absolute precision, so
    // the bound widens for large |x| (at |x| = 30 it is about 2e-7).
    SECTION("roundtrip") {
        Rng rng(7);
        for (int k = 0; k < 500; ++k) {
            const double x = -30.0 + 60.0 * rng.uniform01();
            const double back = prob_to_logit(logit_to_prob(x));
            const double bound =
                std::max(1e-12, std::exp2(std::abs(x) - 53.0) * 8.0 / std::log(2.0));
            REQUIRE_THAT(back, WithinAbs(x, bound));
        }
        for (int k = -12; k <= 12; ++k) {
            const double x = double(k);
            REQUIRE_THAT(prob_to_logit(logit_to_prob(x)), WithinAbs(x, 1e-12));
        }
    }
}

TEST_CASE("objective_value") {
    LogitMatrix m(3);
    m.set(0, 1, 2.0);
    m.set(1, 2, 2.0);
    m.set(0, 2, -1.0);

    SECTION("empty join set scores zero") {
        REQUIRE(objective_value(m, PairLabeling(3)) == 0.0);
    }
    SECTION("all ones sums everything") {
        PairLabeling ones(3, 1);
        REQUIRE(objective_value(m, ones) == 3.0);
    }
    SECTION("single join picks one term") {
        PairLabeling y(3);
        y.set(0, 1, 1);
        REQUIRE(objective_value(m, y) == 2.0);
    }
    SECTION("partition overload agrees with labeling overload") {
        const auto p = Partition::from_clusters(3, {{0, 1}, {2}});
        REQUIRE(objective_value(m, p) == objective_value(m, labeling_from_partition(p)));
    }
    SECTION("linear in y: flipping one pair moves the value by that score") {
        Rng rng(11);
        LogitMatrix r(6);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) r.set(i, j, rng.normal(0.0, 2.0));
        PairLabeling y(6);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) y.set(i, j, std::uint8_t(rng.below(2)));
        const double base = objective_value(r, y);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                PairLabeling flipped = y;
                flipped.set(i, j, 1 - y(i, j));
                const double delta = objective_value(r, flipped) - base;
                const double expected = y(i, j) ? -r(i, j) : r(i, j);
                REQUIRE_THAT(delta, WithinAbs(expected, 1e-12));
            }
    }
    SECTION("size mismatch is reported with both sizes") {
        REQUIRE_THROWS_WITH(objective_value(m, PairLabeling(4)),
                            Catch::Matchers::ContainsSubstring("n=3") &&
                                Catch::Matchers::ContainsSubstring("n=4"));
    }
}

TEST_CASE("threshold_decisions") {
    SECTION("sign pattern, boundary joins, possible inconsistency") {
        LogitMatrix m(3);
        m.set(0, 1, 0.5);
        m.set(1, 2, 0.2);
        m.set(0, 2, -0.3);
        const auto y = threshold_decisions(m);
        REQUIRE(y(0, 1) == 1);
        REQUIRE(y(1, 2) == 1);
        REQUIRE(y(0, 2) == 0);
        REQUIRE_FALSE(is_consistent(y));
    }
    SECTION("all negative cuts everything") {
        LogitMatrix m(4, -1.0);
        const auto y = threshold_decisions(m);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) REQUIRE(y(i, j) == 0);
    }
    SECTION("exact zero joins") {
        LogitMatrix m(2, 0.0);
        REQUIRE(threshold_decisions(m)(0, 1) == 1);
    }
    SECTION("dominates every labeling, consistent or not") {
        Rng rng(13);
        LogitMatrix m(7);
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j) m.set(i, j, rng.normal(0.0, 2.0));
        const double best = objective_value(m, threshold_decisions(m));
        for (int round = 0; round < 100; ++round) {
            PairLabeling y(7);
            for (int i = 0; i < 7; ++i)
                for (int j = i + 1; j < 7; ++j) y.set(i, j, std::uint8_t(rng.below(2)));
            REQUIRE(best >= objective_value(m, y));
        }
    }
}

TEST_CASE("merge_instances") {
    SECTION("two singletons and one cross score") {
        LogitMatrix a(1), b(1);
        CrossScores cross(1, 1);
        cross.set(0, 0, 3.0);
        const auto merged = merge_instances(a, b, cross);
        REQUIRE(merged.size() == 2);
        REQUIRE(merged(0, 1) == 3.0);
    }
    SECTION("blocks are preserved and cross pairs counted") {
        LogitMatrix a(2), b(2);
        a.set(0, 1, 1.5);
        b.set(0, 1, -2.5);
        CrossScores cross(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) cross.set(i, j, 10.0 * i + j);
        const auto merged = merge_instances(a, b, cross);
        REQUIRE(merged.size() == 4);
        REQUIRE(merged.num_pairs() == 6);
        REQUIRE(merged(0, 1) == a(0, 1));
        REQUIRE(merged(2, 3) == b(0, 1));
        int cross_pairs = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                REQUIRE(merged(i, 2 + j) == cross(i, j));
                ++cross_pairs;
            }
        REQUIRE(cross_pairs == 4);
    }
    SECTION("wrong cross shape is rejected") {
        LogitMatrix a(2), b(3);
        CrossScores cross(2, 2);
        REQUIRE_THROWS_MATCHES(merge_instances(a, b, cross), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::incomplete_cross;
                               }));
    }
}

TEST_CASE("logit matrix rejects non-finite values") {
    LogitMatrix m(2);
    REQUIRE_THROWS_AS(m.set(0, 1, std::numeric_limits<double>::infinity()), Error);
    REQUIRE_THROWS_AS(LogitMatrix::from_values(2, {std::nan("")}), Error);
}
