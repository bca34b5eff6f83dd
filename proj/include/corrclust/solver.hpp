#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/partition.hpp"

namespace corrclust {

struct SolverConfig {
    int max_klj_passes = 100;   // hard cap on refinement passes
    int exact_limit = 14;       // largest n the enumeration oracle accepts
    double epsilon_gain = 0.0;  // a move must improve by more than this
};

namespace detail {

// Greedy additive edge contraction on a complete instance. The quotient of a
// complete graph under contraction stays complete, so inter-cluster weights
// live in a flat upper-triangular array indexed by cluster slots. A cluster
// occupies the slot of its smallest member: merging always keeps the smaller
// slot, which makes slot order equal to smallest-member order and gives the
// deterministic tie-break (min cluster id, max cluster id).
struct GaecEdge {
    double weight;
    int a, b;  // live cluster slots, a < b
};

struct GaecEdgeOrder {
    bool operator()(const GaecEdge& x, const GaecEdge& y) const {
        if (x.weight != y.weight) return x.weight < y.weight;  // max-heap on weight
        if (x.a != y.a) return x.a > y.a;                      // then smallest pair first
        return x.b > y.b;
    }
};

}  // namespace detail

inline Partition solve_gaec(const LogitMatrix& m) {
    const int n = m.size();
    std::vector<double> weight = m.values();  // summed weights of the contracted graph
    std::vector<std::uint8_t> live(n, 1);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);

    std::priority_queue<detail::GaecEdge, std::vector<detail::GaecEdge>, detail::GaecEdgeOrder> heap;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double w = weight[pair_index(i, j, n)];
            if (w > 0.0) heap.push({w, i, j});
        }

    while (!heap.empty()) {
        const auto edge = heap.top();
        heap.pop();
        if (!live[edge.a] || !live[edge.b]) continue;
        if (weight[pair_index(edge.a, edge.b, n)] != edge.weight) continue;  // stale entry

        // contract: slot b dissolves into slot a
        live[edge.b] = 0;
        parent[edge.b] = edge.a;
        for (int c = 0; c < n; ++c) {
            if (!live[c] || c == edge.a) continue;
            const std::size_t target =
                pair_index(std::min(edge.a, c), std::max(edge.a, c), n);
            weight[target] += weight[pair_index(std::min(edge.b, c), std::max(edge.b, c), n)];
            if (weight[target] > 0.0)
                heap.push({weight[target], std::min(edge.a, c), std::max(edge.a, c)});
        }
    }

    auto find = [&parent](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<int> assignment(n);
    for (int e = 0; e < n; ++e) assignment[e] = find(e);
    return Partition::from_assignments(assignment);
}

namespace detail {

// One Kernighan-Lin sequence of single-element moves between two clusters
// with best-prefix acceptance. Every element moves at most once; the prefix
// with the largest cumulative gain is applied if it exceeds epsilon_gain.
// Mutates the two member lists and returns the applied gain (0 if none).
// With an empty second cluster this doubles as the split move.
inline double kl_exchange(const LogitMatrix& m, std::vector<int>& side_a,
                          std::vector<int>& side_b, double epsilon_gain) {
    const int total = int(side_a.size() + side_b.size());
    if (total < 2) return 0.0;

    std::vector<int> element(total);
    std::vector<std::uint8_t> on_b(total);  // current side of each entry
    for (std::size_t k = 0; k < side_a.size(); ++k) element[k] = side_a[k];
    for (std::size_t k = 0; k < side_b.size(); ++k) {
        element[side_a.size() + k] = side_b[k];
        on_b[side_a.size() + k] = 1;
    }

    // gain[k] = objective change of moving element k to the other side
    std::vector<double> gain(total, 0.0);
    for (int k = 0; k < total; ++k)
        for (int l = 0; l < total; ++l) {
            if (k == l) continue;
            const double f = m(element[k], element[l]);
            gain[k] += on_b[k] == on_b[l] ? -f : f;
        }

    std::vector<std::uint8_t> moved(total, 0);
    std::vector<int> order;
    order.reserve(total);
    double cumulative = 0.0, best = 0.0;
    int best_length = 0;
    for (int step = 0; step < total; ++step) {
        int pick = -1;
        for (int k = 0; k < total; ++k)
            if (!moved[k] && (pick < 0 || gain[k] > gain[pick])) pick = k;
        if (pick < 0) break;
        moved[pick] = 1;
        order.push_back(pick);
        cumulative += gain[pick];
        if (cumulative > best) {
            best = cumulative;
            best_length = int(order.size());
        }
        for (int k = 0; k < total; ++k) {
            if (moved[k]) continue;
            const double f = m(element[k], element[pick]);
            gain[k] += on_b[k] == on_b[pick] ? 2.0 * f : -2.0 * f;
        }
    }

    // moving every element is a pure relabel of the two sides; its true gain
    // is zero even when rounding makes the bookkeeping slightly positive
    if (best_length == total) return 0.0;
    if (!(best > epsilon_gain) || best_length == 0) return 0.0;
    for (int k = 0; k < best_length; ++k) on_b[order[k]] ^= 1;
    side_a.clear();
    side_b.clear();
    for (int k = 0; k < total; ++k)
        (on_b[k] ? side_b : side_a).push_back(element[k]);
    std::sort(side_a.begin(), side_a.end());
    std::sort(side_b.begin(), side_b.end());
    return best;
}

// One best-prefix sequence of single-element relocations across the whole
// partition, tried from several candidate first moves. A pairwise exchange
// cannot coordinate three clusters (element x leaves A for C so that A can
// absorb the rest of B); this move can. Each element relocates at most once
// per sequence; the sequence continues greedily and the best prefix is
// applied if it improves by more than epsilon_gain. Candidate first moves
// are capped, as is the number of non-improving continuation steps, so one
// escape attempt costs O(candidates * plateau * n * k).
inline double migration_escape(const LogitMatrix& m, std::vector<std::vector<int>>& clusters,
                               double epsilon_gain) {
    const int n = m.size();
    std::vector<int> home(n, -1);
    for (int k = 0; k < int(clusters.size()); ++k)
        for (int e : clusters[k]) home[e] = k;
    const int base_clusters = int(clusters.size());

    // sums[k][e] = total score between e and the members of cluster k
    std::vector<std::vector<double>> base_sums(base_clusters, std::vector<double>(n, 0.0));
    for (int k = 0; k < base_clusters; ++k)
        for (int u : clusters[k])
            for (int e = 0; e < n; ++e)
                if (e != u) base_sums[k][e] += m(e, u);

    struct Candidate {
        double gain;
        int element, target;  // target == -1 opens a new cluster
    };
    std::vector<Candidate> candidates;
    for (int e = 0; e < n; ++e) {
        const double own = base_sums[home[e]][e];
        for (int k = 0; k < base_clusters; ++k)
            if (k != home[e] && !clusters[k].empty())
                candidates.push_back({base_sums[k][e] - own, e, k});
        if (int(clusters[home[e]].size()) > 1) candidates.push_back({-own, e, -1});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.gain != b.gain) return a.gain > b.gain;
        if (a.element != b.element) return a.element < b.element;
        return a.target < b.target;
    });
    const std::size_t max_candidates = 64;
    if (candidates.size() > max_candidates) candidates.resize(max_candidates);
    const int plateau = std::min(n, 32);

    std::vector<std::vector<int>> canonical_start;
    for (const auto& cluster : clusters)
        if (!cluster.empty()) canonical_start.push_back(cluster);
    for (auto& cluster : canonical_start) std::sort(cluster.begin(), cluster.end());
    std::sort(canonical_start.begin(), canonical_start.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<std::vector<double>> sums;
    std::vector<int> where(n), size_of;
    std::vector<std::uint8_t> moved(n);
    struct Move {
        int element, target;
    };
    std::vector<Move> sequence;

    for (const auto& candidate : candidates) {
        sums = base_sums;
        for (int e = 0; e < n; ++e) where[e] = home[e];
        size_of.assign(base_clusters, 0);
        for (int k = 0; k < base_clusters; ++k) size_of[k] = int(clusters[k].size());
        std::fill(moved.begin(), moved.end(), 0);
        sequence.clear();

        auto apply = [&](int e, int target) {
            if (target < 0) {
                target = int(sums.size());
                sums.emplace_back(n, 0.0);
                size_of.push_back(0);
            }
            const int from = where[e];
            for (int x = 0; x < n; ++x) {
                if (x == e) continue;
                const double f = m(x, e);
                sums[from][x] -= f;
                sums[target][x] += f;
            }
            --size_of[from];
            ++size_of[target];
            where[e] = target;
            moved[e] = 1;
            sequence.push_back({e, target});
            return target;
        };

        double cumulative = candidate.gain;
        apply(candidate.element, candidate.target);
        double best = cumulative;
        int best_length = 1, since_best = 0;
        while (since_best < plateau) {
            int pick = -1, pick_target = -1;
            double pick_gain = 0.0;
            for (int e = 0; e < n; ++e) {
                if (moved[e]) continue;
                const double own = sums[where[e]][e];
                for (int k = 0; k < int(sums.size()); ++k) {
                    if (k == where[e] || size_of[k] == 0) continue;
                    const double gain = sums[k][e] - own;
                    if (pick < 0 || gain > pick_gain) {
                        pick = e;
                        pick_target = k;
                        pick_gain = gain;
                    }
                }
                if (size_of[where[e]] > 1) {
                    const double gain = -own;
                    if (pick < 0 || gain > pick_gain) {
                        pick = e;
                        pick_target = -1;
                        pick_gain = gain;
                    }
                }
            }
            if (pick < 0) break;
            cumulative += pick_gain;
            apply(pick, pick_target);
            if (cumulative > best) {
                best = cumulative;
                best_length = int(sequence.size());
                since_best = 0;
            } else {
                ++since_best;
            }
        }

        if (best > epsilon_gain) {
            // sequence targets are already resolved cluster indices; new
            // clusters were numbered contiguously in creation order
            std::vector<int> label(home);
            int top = base_clusters;
            for (int k = 0; k < best_length; ++k) {
                label[sequence[k].element] = sequence[k].target;
                top = std::max(top, sequence[k].target + 1);
            }
            std::vector<std::vector<int>> rebuilt(top);
            for (int e = 0; e < n; ++e) rebuilt[label[e]].push_back(e);
            std::erase_if(rebuilt, [](const auto& c) { return c.empty(); });
            for (auto& cluster : rebuilt) std::sort(cluster.begin(), cluster.end());
            std::sort(rebuilt.begin(), rebuilt.end(),
                      [](const auto& a, const auto& b) { return a.front() < b.front(); });
            // a prefix that merely relabels clusters has true gain zero even
            // when rounding makes the bookkeeping slightly positive
            if (rebuilt == canonical_start) continue;
            clusters = std::move(rebuilt);
            return best;
        }
    }
    return 0.0;
}

}  // namespace detail

// Local search over partitions with four move classes: joining two clusters
// outright, Kernighan-Lin element exchanges between cluster pairs, splitting
// elements off into a new cluster (exchange against an empty set), and, when
// a pass stalls, best-prefix migration sequences across the whole partition.
// Every accepted move strictly improves the objective, so the result never
// scores below the start; the search ends when a pass plus an escape attempt
// make no move, or at the configured pass cap.
inline Partition refine_klj(const LogitMatrix& m, const Partition& start,
                            const SolverConfig& cfg = {}) {
    require(m.size() == start.size(), errc::size_mismatch,
            "logits have n=" + std::to_string(m.size()) + ", partition has n=" +
                std::to_string(start.size()));
    require(cfg.max_klj_passes >= 1, errc::invalid_argument, "max_klj_passes must be >= 1");
    require(cfg.epsilon_gain >= 0.0, errc::invalid_argument, "epsilon_gain must be >= 0");

    std::vector<std::vector<int>> clusters = start.clusters();
    for (int pass = 0; pass < cfg.max_klj_passes; ++pass) {
        // canonical order so runs are reproducible
        std::erase_if(clusters, [](const auto& c) { return c.empty(); });
        for (auto& c : clusters) std::sort(c.begin(), c.end());
        std::sort(clusters.begin(), clusters.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });

        bool improved = false;
        const int before = int(clusters.size());
        for (int i = 0; i < before; ++i) {
            if (clusters[i].empty()) continue;
            for (int j = i + 1; j < before; ++j) {
                if (clusters[i].empty()) break;
                if (clusters[j].empty()) continue;
                double join_gain = 0.0;
                for (int u : clusters[i])
                    for (int v : clusters[j]) join_gain += m(u, v);
                if (join_gain > cfg.epsilon_gain) {
                    clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
                    std::sort(clusters[i].begin(), clusters[i].end());
                    clusters[j].clear();
                    improved = true;
                    continue;
                }
                if (detail::kl_exchange(m, clusters[i], clusters[j], cfg.epsilon_gain) > 0.0)
                    improved = true;
            }
        }
        const int splittable = int(clusters.size());
        for (int i = 0; i < splittable; ++i) {
            if (clusters[i].size() < 2) continue;
            std::vector<int> fresh;
            if (detail::kl_exchange(m, clusters[i], fresh, cfg.epsilon_gain) > 0.0) improved = true;
            if (!fresh.empty()) clusters.push_back(std::move(fresh));
        }
        if (!improved && detail::migration_escape(m, clusters, cfg.epsilon_gain) > 0.0)
            improved = true;
        if (!improved) break;
    }

    std::erase_if(clusters, [](const auto& c) { return c.empty(); });
    return Partition::from_clusters(m.size(), std::move(clusters));
}

// The inference pipeline: greedy contraction to build a clustering, then
// local search to refine it.
inline Partition solve(const LogitMatrix& m, const SolverConfig& cfg = {}) {
    return refine_klj(m, solve_gaec(m), cfg);
}

namespace detail {

// Depth-first enumeration of restricted-growth strings with incremental
// objective bookkeeping. Strict improvement keeps the first optimum in
// enumeration order.
struct ExactSearch {
    const LogitMatrix& m;
    int n;
    std::vector<int> assignment, best_assignment;
    double best = 0.0;
    bool found = false;
    std::vector<std::vector<int>> members;

    explicit ExactSearch(const LogitMatrix& matrix)
        : m(matrix), n(matrix.size()), assignment(matrix.size()), members(matrix.size()) {}

    void run(int i, int used, double value) {
        if (i == n) {
            if (!found || value > best) {
                found = true;
                best = value;
                best_assignment = assignment;
            }
            return;
        }
        for (int c = 0; c <= used && c < n; ++c) {
            double delta = 0.0;
            if (c < used)
                for (int u : members[c]) delta += m(u, i);
            assignment[i] = c;
            members[c].push_back(i);
            run(i + 1, std::max(used, c + 1), value + delta);
            members[c].pop_back();
        }
    }
};

}  // namespace detail

// Global maximizer of the clustering objective by exhausting all partitions.
// Bell(14) is around 1.9e8, which is the practical ceiling on a desktop.
inline Partition solve_exact(const LogitMatrix& m, int limit = 14) {
    require(m.size() <= limit, errc::too_large,
            "exact solver limited to n <= " + std::to_string(limit) + ", got n=" +
                std::to_string(m.size()));
    detail::ExactSearch search(m);
    search.run(0, 0, 0.0);
    return Partition::from_assignments(search.best_assignment);
}

}  // namespace corrclust
