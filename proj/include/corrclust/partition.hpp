#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "corrclust/error.hpp"

namespace corrclust {

// Elements carry dense ids 0..n-1. Unordered pairs {i,j}, i<j, are laid out
// row-major over the upper triangle so all per-pair data lives in one flat
// array with O(1) lookup.
inline std::size_t pair_count(int n) {
    return std::size_t(n) * std::size_t(n - 1) / 2;
}

inline std::size_t pair_index(int i, int j, int n) {
    // requires 0 <= i < j < n
    return std::size_t(i) * std::size_t(n) - std::size_t(i) * (std::size_t(i) + 1) / 2
         + std::size_t(j) - std::size_t(i) - 1;
}

// A partition of {0..n-1} into non-empty disjoint clusters covering all
// elements. Clusters are stored sorted by smallest member, members ascending,
// so equal partitions compare equal and cluster ids are reproducible: the id
// of a cluster is its position in that order.
class Partition {
public:
    static Partition from_clusters(int n, std::vector<std::vector<int>> clusters) {
        require(n >= 1, errc::invalid_argument, "partition needs n >= 1, got n=" + std::to_string(n));
        std::vector<char> seen(n, 0);
        for (auto& cluster : clusters) {
            require(!cluster.empty(), errc::invalid_argument, "empty cluster");
            for (int e : cluster) {
                require(e >= 0 && e < n, errc::invalid_argument,
                        "element id " + std::to_string(e) + " outside [0," + std::to_string(n) + ")");
                require(!seen[e], errc::invalid_argument,
                        "element " + std::to_string(e) + " appears in two clusters");
                seen[e] = 1;
            }
            std::sort(cluster.begin(), cluster.end());
        }
        for (int e = 0; e < n; ++e)
            require(seen[e], errc::invalid_argument, "element " + std::to_string(e) + " uncovered");
        std::sort(clusters.begin(), clusters.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return Partition(n, std::move(clusters));
    }

    // Arbitrary integer labels per element; clusters are renumbered by
    // smallest member.
    static Partition from_assignments(const std::vector<int>& label_of) {
        require(!label_of.empty(), errc::invalid_argument, "empty assignment");
        std::map<int, std::vector<int>> groups;
        for (int e = 0; e < int(label_of.size()); ++e) groups[label_of[e]].push_back(e);
        std::vector<std::vector<int>> clusters;
        clusters.reserve(groups.size());
        for (auto& [label, members] : groups) clusters.push_back(std::move(members));
        return from_clusters(int(label_of.size()), std::move(clusters));
    }

    static Partition singletons(int n) {
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        return from_assignments(ids);
    }

    int size() const { return n_; }
    int num_clusters() const { return int(clusters_.size()); }
    const std::vector<std::vector<int>>& clusters() const { return clusters_; }

    // element -> cluster id (position in the sorted cluster list)
    const std::vector<int>& cluster_of() const { return cluster_of_; }

    bool operator==(const Partition& other) const {
        return n_ == other.n_ && clusters_ == other.clusters_;
    }
    bool operator!=(const Partition& other) const { return !(*this == other); }

private:
    Partition(int n, std::vector<std::vector<int>> clusters)
        : n_(n), clusters_(std::move(clusters)), cluster_of_(n, -1) {
        for (int k = 0; k < int(clusters_.size()); ++k)
            for (int e : clusters_[k]) cluster_of_[e] = k;
    }

    int n_;
    std::vector<std::vector<int>> clusters_;
    std::vector<int> cluster_of_;
};

// Sub-partition over the elements 0..k-1 (ids preserved). Used to read off
// the test-set part of a jointly clustered merged instance.
inline Partition restrict_to_prefix(const Partition& p, int k) {
    require(k >= 1 && k <= p.size(), errc::invalid_argument,
            "prefix length " + std::to_string(k) + " outside [1," + std::to_string(p.size()) + "]");
    std::vector<int> labels(p.cluster_of().begin(), p.cluster_of().begin() + k);
    return Partition::from_assignments(labels);
}

// A 0/1 decision for every unordered pair of elements. Unlike a Partition,
// the decisions need not be transitive.
class PairLabeling {
public:
    explicit PairLabeling(int n, std::uint8_t fill = 0) : n_(n) {
        require(n >= 1, errc::invalid_argument, "pair labeling needs n >= 1");
        require(fill == 0 || fill == 1, errc::invalid_argument, "labels must be 0 or 1");
        y_.assign(pair_count(n), fill);
    }

    static PairLabeling from_values(int n, std::vector<std::uint8_t> values) {
        require(values.size() == pair_count(n), errc::size_mismatch,
                "expected " + std::to_string(pair_count(n)) + " pair labels, got " +
                    std::to_string(values.size()));
        for (std::uint8_t v : values)
            require(v == 0 || v == 1, errc::invalid_argument, "labels must be 0 or 1");
        PairLabeling y(n);
        y.y_ = std::move(values);
        return y;
    }

    int size() const { return n_; }
    std::size_t num_pairs() const { return y_.size(); }

    std::uint8_t operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return y_[pair_index(i, j, n_)];
    }

    void set(int i, int j, std::uint8_t v) {
        require(v == 0 || v == 1, errc::invalid_argument, "labels must be 0 or 1");
        if (i > j) std::swap(i, j);
        require(i >= 0 && i < j && j < n_, errc::invalid_argument, "bad pair index");
        y_[pair_index(i, j, n_)] = v;
    }

    const std::vector<std::uint8_t>& values() const { return y_; }

    bool operator==(const PairLabeling& other) const {
        return n_ == other.n_ && y_ == other.y_;
    }

private:
    int n_;
    std::vector<std::uint8_t> y_;
};

namespace detail {

// Connected components of the join edges, plus whether the labeling agrees
// with its own components on every pair (the transitivity test).
struct JoinComponents {
    std::vector<int> root_of;
    bool consistent = true;
    int witness_i = -1, witness_j = -1;
};

inline JoinComponents join_components(const PairLabeling& y) {
    const int n = y.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (y(i, j)) {
                int ri = find(i), rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
    JoinComponents result;
    result.root_of.resize(n);
    for (int i = 0; i < n; ++i) result.root_of[i] = find(i);
    for (int i = 0; i < n && result.consistent; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((result.root_of[i] == result.root_of[j]) != bool(y(i, j))) {
                result.consistent = false;
                result.witness_i = i;
                result.witness_j = j;
                break;
            }
    return result;
}

}  // namespace detail

inline PairLabeling labeling_from_partition(const Partition& p) {
    PairLabeling y(p.size());
    const auto& cluster_of = p.cluster_of();
    for (int i = 0; i < p.size(); ++i)
        for (int j = i + 1; j < p.size(); ++j)
            if (cluster_of[i] == cluster_of[j]) y.set(i, j, 1);
    return y;
}

// True iff y is transitive, i.e. the pair labeling of some partition.
inline bool is_consistent(const PairLabeling& y) {
    return detail::join_components(y).consistent;
}

inline Partition partition_from_labeling(const PairLabeling& y) {
    auto components = detail::join_components(y);
    if (!components.consistent)
        fail(errc::inconsistent_labeling,
             "labeling is not transitive: pair (" + std::to_string(components.witness_i) + "," +
                 std::to_string(components.witness_j) + ") contradicts the join components");
    return Partition::from_assignments(components.root_of);
}

}  // namespace corrclust
