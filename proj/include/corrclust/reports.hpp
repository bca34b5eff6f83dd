#pragma once

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "corrclust/metrics.hpp"
#include "corrclust/partition.hpp"

namespace corrclust {

inline std::string format_number(double v, int precision = 6) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, result.ptr);
}

inline std::string format_optional(const std::optional<double>& v, int precision = 6) {
    return v ? format_number(*v, precision) : "n/a";
}

// Cluster-vs-class matrix with per-cell "precision,recall", rows ordered by
// the optimally matched class (unmatched clusters last, by smallest member).
// Footer lines carry the matched fraction and per-cluster/per-class false
// positive and false negative counts.
inline std::string render_fig3(const Partition& truth, const Partition& pred) {
    const auto table = contingency(truth, pred);
    const auto matching = match_clusters(table);

    std::vector<int> row_order;
    for (int s = 0; s < table.cols(); ++s)
        if (matching.cluster_of_class[s] >= 0) row_order.push_back(matching.cluster_of_class[s]);
    for (int k = 0; k < table.rows(); ++k)
        if (matching.class_of_cluster[k] < 0) row_order.push_back(k);

    std::ostringstream out;
    out << "#fig3 clusters=" << table.rows() << " classes=" << table.cols() << "\n";
    out << "cluster";
    for (int s = 0; s < table.cols(); ++s) out << "\tclass_" << s;
    out << "\tmatched_class\n";
    for (int k : row_order) {
        out << k;
        for (int s = 0; s < table.cols(); ++s) {
            const double precision = double(table.counts[k][s]) / double(table.row_sums[k]);
            const double recall = double(table.counts[k][s]) / double(table.col_sums[s]);
            out << '\t' << format_number(precision, 4) << ',' << format_number(recall, 4);
        }
        const int matched = matching.class_of_cluster[k];
        out << '\t' << (matched >= 0 ? std::to_string(matched) : std::string("-")) << "\n";
    }
    out << "#matched_fraction\t" << format_number(matching.matched_fraction) << "\n";
    for (int k = 0; k < table.rows(); ++k)
        out << "#cluster_fp\t" << k << '\t' << matching.fp_of_cluster[k] << "\n";
    for (int s = 0; s < table.cols(); ++s)
        out << "#class_fn\t" << s << '\t' << matching.fn_of_class[s] << "\n";
    return out.str();
}

}  // namespace corrclust
