#pragma once

#include <string>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/partition.hpp"

namespace corrclust {

// Assign each test element to the training cluster for which the assignment
// is maximally probable. Log-odds of independent pair decisions add, so the
// most probable cluster U for element a maximizes sum_{u in U} f(a,u).
// Exact ties go to the lowest cluster id.
inline std::vector<int> assign_to_clusters(const CrossScores& cross,
                                           const Partition& train_truth) {
    require(cross.cols() == train_truth.size(), errc::incomplete_cross,
            "cross block has " + std::to_string(cross.cols()) + " training columns, partition has n=" +
                std::to_string(train_truth.size()));
    const auto& clusters = train_truth.clusters();
    std::vector<int> assignment(cross.rows());
    for (int a = 0; a < cross.rows(); ++a) {
        int best_cluster = 0;
        double best_sum = 0.0;
        for (int k = 0; k < int(clusters.size()); ++k) {
            double sum = 0.0;
            for (int u : clusters[k]) sum += cross(a, u);
            if (k == 0 || sum > best_sum) {
                best_sum = sum;
                best_cluster = k;
            }
        }
        assignment[a] = best_cluster;
    }
    return assignment;
}

// The clustering induced by a classification: elements are joined iff they
// carry the same class. Always transitive.
inline PairLabeling induced_pair_labeling(const std::vector<int>& assignment) {
    require(!assignment.empty(), errc::invalid_argument, "empty assignment");
    for (std::size_t e = 0; e < assignment.size(); ++e)
        require(assignment[e] >= 0, errc::unassigned,
                "element " + std::to_string(e) + " has no class");
    const int n = int(assignment.size());
    PairLabeling y(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (assignment[i] == assignment[j]) y.set(i, j, 1);
    return y;
}

inline double classification_accuracy(const std::vector<int>& assignment,
                                      const std::vector<int>& truth) {
    require(assignment.size() == truth.size(), errc::size_mismatch,
            "assignment has n=" + std::to_string(assignment.size()) + ", truth has n=" +
                std::to_string(truth.size()));
    require(!assignment.empty(), errc::empty_instance, "nothing to compare");
    std::size_t hits = 0;
    for (std::size_t e = 0; e < assignment.size(); ++e)
        if (assignment[e] == truth[e]) ++hits;
    return double(hits) / double(assignment.size());
}

}  // namespace corrclust
