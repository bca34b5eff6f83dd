#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/partition.hpp"

namespace corrclust {

// Agreement tallies between a true labeling y and a predicted labeling yhat:
//   TJ = sum y*yhat        TC = sum (1-y)*(1-yhat)
//   FC = sum y*(1-yhat)    FJ = sum (1-y)*yhat
struct PairCounts {
    std::size_t tj = 0, tc = 0, fc = 0, fj = 0;

    std::size_t total() const { return tj + tc + fc + fj; }
};

inline PairCounts pair_counts(const PairLabeling& truth, const PairLabeling& pred) {
    require(truth.size() == pred.size(), errc::size_mismatch,
            "truth has n=" + std::to_string(truth.size()) + ", prediction has n=" +
                std::to_string(pred.size()));
    PairCounts c;
    const auto& y = truth.values();
    const auto& yhat = pred.values();
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (y[k] && yhat[k]) ++c.tj;
        else if (y[k] && !yhat[k]) ++c.fc;
        else if (!y[k] && yhat[k]) ++c.fj;
        else ++c.tc;
    }
    return c;
}

inline double rand_index(const PairCounts& c) {
    require(c.total() > 0, errc::empty_instance, "no pairs to compare");
    return double(c.tj + c.tc) / double(c.total());
}

// Precision/recall of cuts and joins. A 0/0 ratio is reported as absent,
// never coerced to 0 or 1.
struct PrReport {
    std::optional<double> pc, rc, pj, rj;
};

inline PrReport cut_join_pr(const PairCounts& c) {
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return double(num) / double(den);
    };
    PrReport report;
    report.pc = ratio(c.tc, c.tc + c.fc);  // predicted cuts
    report.rc = ratio(c.tc, c.tc + c.fj);  // true cuts
    report.pj = ratio(c.tj, c.tj + c.fj);  // predicted joins
    report.rj = ratio(c.tj, c.tj + c.fc);  // true joins
    return report;
}

// Variation of information in bits, split into its two conditional
// entropies: vi_fj = H(truth | prediction) grows with false joins,
// vi_fc = H(prediction | truth) grows with false cuts.
struct ViReport {
    double vi = 0.0, vi_fc = 0.0, vi_fj = 0.0;
};

inline ViReport variation_of_information(const Partition& truth, const Partition& pred) {
    require(truth.size() == pred.size(), errc::size_mismatch,
            "truth has n=" + std::to_string(truth.size()) + ", prediction has n=" +
                std::to_string(pred.size()));
    const int n = truth.size();
    std::vector<std::pair<int, int>> cells(n);
    for (int e = 0; e < n; ++e) cells[e] = {truth.cluster_of()[e], pred.cluster_of()[e]};
    std::sort(cells.begin(), cells.end());

    ViReport report;
    std::size_t k = 0;
    while (k < cells.size()) {
        std::size_t next = k;
        while (next < cells.size() && cells[next] == cells[k]) ++next;
        const double overlap = double(next - k);
        const double share = overlap / double(n);
        const double truth_size = double(truth.clusters()[cells[k].first].size());
        const double pred_size = double(pred.clusters()[cells[k].second].size());
        // integer ratios >= 1, so each term is exactly non-negative
        report.vi_fj += share * std::log2(pred_size / overlap);
        report.vi_fc += share * std::log2(truth_size / overlap);
        k = next;
    }
    report.vi = report.vi_fc + report.vi_fj;
    return report;
}

// Per-bucket pair metrics, where a pair's bucket is the unordered pair of
// its endpoints' group tags (seen/seen, seen/unseen, ...).
struct SubgroupBucket {
    std::string tag_a, tag_b;  // tag_a <= tag_b
    PairCounts counts;
    PrReport pr;
};

inline std::vector<SubgroupBucket> subgroup_pr(const PairLabeling& truth,
                                               const PairLabeling& pred,
                                               const GroupLabels& groups) {
    require(truth.size() == pred.size(), errc::size_mismatch,
            "truth has n=" + std::to_string(truth.size()) + ", prediction has n=" +
                std::to_string(pred.size()));
    require(groups.size() == truth.size(), errc::size_mismatch,
            "labelings have n=" + std::to_string(truth.size()) + ", groups have n=" +
                std::to_string(groups.size()));
    const int n = truth.size();
    std::map<std::pair<std::string, std::string>, PairCounts> buckets;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto key = std::minmax(groups.tags[i], groups.tags[j]);
            auto& c = buckets[key];
            const bool y = truth(i, j), yhat = pred(i, j);
            if (y && yhat) ++c.tj;
            else if (y && !yhat) ++c.fc;
            else if (!y && yhat) ++c.fj;
            else ++c.tc;
        }
    std::vector<SubgroupBucket> result;
    result.reserve(buckets.size());
    for (const auto& [key, counts] : buckets)
        result.push_back({key.first, key.second, counts, cut_join_pr(counts)});
    return result;
}

// Overlap counts between predicted clusters (rows) and true classes
// (columns). Per-cell precision is count/row_sum, recall is count/col_sum.
struct Contingency {
    int n = 0;
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> row_sums, col_sums;

    int rows() const { return int(counts.size()); }
    int cols() const { return counts.empty() ? 0 : int(counts.front().size()); }
};

inline Contingency contingency(const Partition& truth, const Partition& pred) {
    require(truth.size() == pred.size(), errc::size_mismatch,
            "truth has n=" + std::to_string(truth.size()) + ", prediction has n=" +
                std::to_string(pred.size()));
    Contingency table;
    table.n = truth.size();
    table.counts.assign(pred.num_clusters(), std::vector<std::size_t>(truth.num_clusters(), 0));
    table.row_sums.assign(pred.num_clusters(), 0);
    table.col_sums.assign(truth.num_clusters(), 0);
    for (int e = 0; e < truth.size(); ++e) {
        const int k = pred.cluster_of()[e];
        const int s = truth.cluster_of()[e];
        ++table.counts[k][s];
        ++table.row_sums[k];
        ++table.col_sums[s];
    }
    return table;
}

namespace detail {

// Shortest-augmenting-path assignment (Hungarian) minimizing total cost over
// a dense rows x cols matrix with rows <= cols; every row ends up matched.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int nr = int(cost.size());
    const int nc = nr == 0 ? 0 : int(cost.front().size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(nr + 1, 0.0), v(nc + 1, 0.0);
    std::vector<int> match(nc + 1, 0), way(nc + 1, 0);
    for (int i = 1; i <= nr; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(nc + 1, inf);
        std::vector<char> used(nc + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= nc; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= nc; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> col_of_row(nr, -1);
    for (int j = 1; j <= nc; ++j)
        if (match[j] > 0) col_of_row[match[j] - 1] = j - 1;
    return col_of_row;
}

}  // namespace detail

// Maximum-weight one-to-one matching between predicted clusters and true
// classes, maximizing the total matched overlap. Matches with zero overlap
// are reported as unmatched. fp counts elements of a cluster outside its
// matched class, fn counts elements of a class outside its matched cluster.
struct ClusterMatching {
    std::vector<int> class_of_cluster;  // -1 when unmatched
    std::vector<int> cluster_of_class;  // -1 when unmatched
    std::vector<std::size_t> fp_of_cluster, fn_of_class;
    std::size_t matched_count = 0;
    double matched_fraction = 0.0;
};

inline ClusterMatching match_clusters(const Contingency& table) {
    const int nr = table.rows(), nc = table.cols();
    require(nr > 0 && nc > 0 && table.n > 0, errc::empty_instance, "empty contingency table");

    const bool transpose = nr > nc;
    const int small = transpose ? nc : nr;
    const int large = transpose ? nr : nc;
    std::vector<std::vector<double>> cost(small, std::vector<double>(large, 0.0));
    for (int r = 0; r < small; ++r)
        for (int c = 0; c < large; ++c)
            cost[r][c] = -double(transpose ? table.counts[c][r] : table.counts[r][c]);
    const std::vector<int> col_of_row = detail::min_cost_assignment(cost);

    ClusterMatching result;
    result.class_of_cluster.assign(nr, -1);
    result.cluster_of_class.assign(nc, -1);
    for (int r = 0; r < small; ++r) {
        const int c = col_of_row[r];
        if (c < 0) continue;
        const int cluster = transpose ? c : r;
        const int klass = transpose ? r : c;
        if (table.counts[cluster][klass] == 0) continue;  // zero overlap: leave unmatched
        result.class_of_cluster[cluster] = klass;
        result.cluster_of_class[klass] = cluster;
        result.matched_count += table.counts[cluster][klass];
    }
    result.matched_fraction = double(result.matched_count) / double(table.n);
    result.fp_of_cluster.assign(nr, 0);
    result.fn_of_class.assign(nc, 0);
    for (int k = 0; k < nr; ++k) {
        const int s = result.class_of_cluster[k];
        result.fp_of_cluster[k] = table.row_sums[k] - (s >= 0 ? table.counts[k][s] : 0);
    }
    for (int s = 0; s < nc; ++s) {
        const int k = result.cluster_of_class[s];
        result.fn_of_class[s] = table.col_sums[s] - (k >= 0 ? table.counts[k][s] : 0);
    }
    return result;
}

}  // namespace corrclust
