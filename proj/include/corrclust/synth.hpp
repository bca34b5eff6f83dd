#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/learn.hpp"
#include "corrclust/partition.hpp"
#include "corrclust/rng.hpp"

namespace corrclust {

// Gaussian stand-in for the score distribution of a trained pairwise model:
// join pairs score around +mu_join, cut pairs around -mu_cut, both with
// standard deviation sigma.
struct NoiseModel {
    double mu_join = 1.5;
    double mu_cut = 1.5;
    double sigma = 1.0;
};

struct PlantedSpec {
    std::vector<int> cluster_sizes;
    std::uint64_t seed = 0;
};

namespace detail {

inline void validate(const NoiseModel& nm) {
    require(nm.mu_join > 0.0 && nm.mu_cut > 0.0, errc::invalid_argument,
            "noise means must be positive");
    require(nm.sigma >= 0.0, errc::invalid_argument, "sigma must be >= 0");
}

}  // namespace detail

// Ground-truth partition with contiguous id blocks of the given sizes.
inline Partition make_planted_partition(const PlantedSpec& spec) {
    require(!spec.cluster_sizes.empty(), errc::empty_spec, "no cluster sizes given");
    std::vector<std::vector<int>> clusters;
    clusters.reserve(spec.cluster_sizes.size());
    int next = 0;
    for (int size : spec.cluster_sizes) {
        require(size > 0, errc::invalid_argument, "cluster sizes must be positive");
        std::vector<int> cluster(size);
        for (int k = 0; k < size; ++k) cluster[k] = next++;
        clusters.push_back(std::move(cluster));
    }
    return Partition::from_clusters(next, std::move(clusters));
}

// Noisy scores for a known partition; pairs are sampled independently in
// row-major pair order from the seeded generator.
inline LogitMatrix sample_logits(const Partition& truth, const NoiseModel& nm,
                                 std::uint64_t seed) {
    detail::validate(nm);
    Rng rng(seed);
    const int n = truth.size();
    const auto& cluster_of = truth.cluster_of();
    LogitMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool join = cluster_of[i] == cluster_of[j];
            m.set(i, j, join ? rng.normal(nm.mu_join, nm.sigma)
                             : rng.normal(-nm.mu_cut, nm.sigma));
        }
    return m;
}

// Refinement of a planted partition that splits every cluster into `parts`
// contiguous sub-modes of near-equal size (clusters smaller than `parts`
// split into singletons).
inline Partition make_subtype_partition(const Partition& truth, int parts) {
    require(parts >= 1, errc::invalid_argument, "parts must be >= 1");
    std::vector<std::vector<int>> subtypes;
    for (const auto& cluster : truth.clusters()) {
        const int size = int(cluster.size());
        const int pieces = std::min(parts, size);
        int taken = 0;
        for (int p = 0; p < pieces; ++p) {
            const int share = (size - taken) / (pieces - p);
            subtypes.emplace_back(cluster.begin() + taken, cluster.begin() + taken + share);
            taken += share;
        }
    }
    return Partition::from_clusters(truth.size(), std::move(subtypes));
}

// Noisy scores for a partition whose clusters contain sub-modes, the way a
// class can contain distinct signal types a pairwise model only partially
// links. Pairs in the same sub-mode score around +nm.mu_join, pairs in the
// same cluster but different sub-modes around mu_weak (which may be zero or
// negative), and cut pairs around -nm.mu_cut. `subtypes` must refine `truth`.
inline LogitMatrix sample_logits_with_subtypes(const Partition& truth, const Partition& subtypes,
                                               const NoiseModel& nm, double mu_weak,
                                               std::uint64_t seed) {
    detail::validate(nm);
    require(std::isfinite(mu_weak), errc::non_finite, "mu_weak must be finite");
    require(truth.size() == subtypes.size(), errc::size_mismatch,
            "truth has n=" + std::to_string(truth.size()) + ", subtypes have n=" +
                std::to_string(subtypes.size()));
    for (const auto& sub : subtypes.clusters()) {
        const int owner = truth.cluster_of()[sub.front()];
        for (int e : sub)
            require(truth.cluster_of()[e] == owner, errc::invalid_argument,
                    "subtype cluster crosses a truth cluster at element " + std::to_string(e));
    }
    Rng rng(seed);
    const int n = truth.size();
    LogitMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool same_cluster = truth.cluster_of()[i] == truth.cluster_of()[j];
            const bool same_subtype = subtypes.cluster_of()[i] == subtypes.cluster_of()[j];
            const double mean =
                same_subtype ? nm.mu_join : (same_cluster ? mu_weak : -nm.mu_cut);
            m.set(i, j, rng.normal(mean, nm.sigma));
        }
    return m;
}

// Noisy scores between two element sets with known class labels; a pair is a
// join iff the class labels agree.
inline CrossScores sample_cross_logits(const std::vector<int>& class_a,
                                       const std::vector<int>& class_b, const NoiseModel& nm,
                                       std::uint64_t seed) {
    detail::validate(nm);
    require(!class_a.empty() && !class_b.empty(), errc::invalid_argument, "empty class lists");
    Rng rng(seed);
    CrossScores cross(int(class_a.size()), int(class_b.size()));
    for (int i = 0; i < cross.rows(); ++i)
        for (int j = 0; j < cross.cols(); ++j) {
            const bool join = class_a[i] == class_b[j];
            cross.set(i, j, join ? rng.normal(nm.mu_join, nm.sigma)
                                 : rng.normal(-nm.mu_cut, nm.sigma));
        }
    return cross;
}

struct Embeddings {
    FeatureSet features;
    std::vector<int> class_of;
};

// Class centers sit on a scaled integer lattice (distinct lattice points are
// at least `separation` apart); elements are the center plus independent
// Gaussian coordinate noise.
inline Embeddings sample_embeddings(const std::vector<int>& class_sizes, int m, double separation,
                                    double sigma, std::uint64_t seed) {
    require(m >= 1, errc::invalid_argument, "embedding dimension must be >= 1");
    require(!class_sizes.empty(), errc::empty_spec, "no class sizes given");
    require(separation >= 0.0 && sigma >= 0.0, errc::invalid_argument,
            "separation and sigma must be >= 0");
    const int num_classes = int(class_sizes.size());

    // smallest lattice base with base^m >= num_classes
    int base = 1;
    while (true) {
        long long capacity = 1;
        bool enough = false;
        for (int d = 0; d < m; ++d) {
            capacity *= base;
            if (capacity >= num_classes) {
                enough = true;
                break;
            }
        }
        if (enough || base > num_classes) break;
        ++base;
    }
    std::vector<std::vector<double>> centers(num_classes, std::vector<double>(m, 0.0));
    for (int k = 0; k < num_classes; ++k) {
        int rest = k;
        for (int d = 0; d < m && rest > 0; ++d) {
            centers[k][d] = double(rest % base) * separation;
            rest /= base;
        }
    }

    Rng rng(seed);
    int n = 0;
    for (int size : class_sizes) {
        require(size > 0, errc::invalid_argument, "class sizes must be positive");
        n += size;
    }
    std::vector<double> x;
    x.reserve(std::size_t(n) * m);
    std::vector<int> class_of;
    class_of.reserve(n);
    for (int k = 0; k < num_classes; ++k)
        for (int e = 0; e < class_sizes[k]; ++e) {
            class_of.push_back(k);
            for (int d = 0; d < m; ++d) x.push_back(centers[k][d] + rng.normal(0.0, sigma));
        }
    return {FeatureSet::from_values(n, m, std::move(x)), std::move(class_of)};
}

// Per-element group tags derived from the true class (cluster id) of each
// element via a class -> tag map.
inline GroupLabels make_group_labels(const Partition& truth,
                                     const std::map<int, std::string>& group_of_class) {
    GroupLabels labels;
    labels.tags.resize(truth.size());
    for (int k = 0; k < truth.num_clusters(); ++k) {
        auto it = group_of_class.find(k);
        if (it == group_of_class.end())
            fail(errc::unmapped_class, "class " + std::to_string(k) + " has no group tag");
        for (int e : truth.clusters()[k]) labels.tags[e] = it->second;
    }
    return labels;
}

}  // namespace corrclust
