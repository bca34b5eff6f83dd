#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/partition.hpp"

namespace corrclust {

// Pairwise scores in base-2 log-odds: the value f for pair {i,j} means the
// model assigns probability 1/(1+2^-f) to i and j belonging to the same
// cluster. Positive favors joining, negative favors cutting.
class LogitMatrix {
public:
    explicit LogitMatrix(int n, double fill = 0.0) : n_(n) {
        require(n >= 1, errc::invalid_argument, "logit matrix needs n >= 1");
        require(std::isfinite(fill), errc::non_finite, "fill value is not finite");
        f_.assign(pair_count(n), fill);
    }

    static LogitMatrix from_values(int n, std::vector<double> values) {
        require(values.size() == pair_count(n), errc::size_mismatch,
                "expected " + std::to_string(pair_count(n)) + " pair scores, got " +
                    std::to_string(values.size()));
        for (double v : values)
            require(std::isfinite(v), errc::non_finite, "pair score is not finite");
        LogitMatrix m(n);
        m.f_ = std::move(values);
        return m;
    }

    int size() const { return n_; }
    std::size_t num_pairs() const { return f_.size(); }

    double operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return f_[pair_index(i, j, n_)];
    }

    void set(int i, int j, double v) {
        require(std::isfinite(v), errc::non_finite, "pair score is not finite");
        if (i > j) std::swap(i, j);
        require(i >= 0 && i < j && j < n_, errc::invalid_argument, "bad pair index");
        f_[pair_index(i, j, n_)] = v;
    }

    const std::vector<double>& values() const { return f_; }

private:
    int n_;
    std::vector<double> f_;
};

// One categorical tag per element (e.g. seen/unseen/noise); pairs of tags
// define the subgroup buckets of the evaluation tables.
struct GroupLabels {
    std::vector<std::string> tags;

    int size() const { return int(tags.size()); }
};

// Dense scores between two disjoint element sets: value(i,j) scores the pair
// (element i of the first set, element j of the second set).
class CrossScores {
public:
    CrossScores(int n1, int n2, double fill = 0.0) : n1_(n1), n2_(n2) {
        require(n1 >= 1 && n2 >= 1, errc::invalid_argument, "cross scores need n1,n2 >= 1");
        require(std::isfinite(fill), errc::non_finite, "fill value is not finite");
        f_.assign(std::size_t(n1) * n2, fill);
    }

    static CrossScores from_values(int n1, int n2, std::vector<double> values) {
        require(values.size() == std::size_t(n1) * n2, errc::incomplete_cross,
                "expected " + std::to_string(std::size_t(n1) * n2) + " cross scores, got " +
                    std::to_string(values.size()));
        for (double v : values)
            require(std::isfinite(v), errc::non_finite, "cross score is not finite");
        CrossScores c(n1, n2);
        c.f_ = std::move(values);
        return c;
    }

    int rows() const { return n1_; }
    int cols() const { return n2_; }

    double operator()(int i, int j) const { return f_[std::size_t(i) * n2_ + j]; }
    void set(int i, int j, double v) {
        require(std::isfinite(v), errc::non_finite, "cross score is not finite");
        f_[std::size_t(i) * n2_ + j] = v;
    }

    const std::vector<double>& values() const { return f_; }

private:
    int n1_, n2_;
    std::vector<double> f_;
};

// p = 1 / (1 + 2^-f), strictly increasing, p(0) = 1/2.
inline double logit_to_prob(double f) {
    require(std::isfinite(f), errc::non_finite, "logit is not finite");
    return 1.0 / (1.0 + std::exp2(-f));
}

// f = log2(p / (1-p)), the exact inverse of logit_to_prob.
inline double prob_to_logit(double p) {
    require(p > 0.0 && p < 1.0, errc::out_of_range,
            "probability must lie strictly in (0,1), got " + std::to_string(p));
    return std::log2(p / (1.0 - p));
}

// Sum of scores over joined pairs. The inference problem maximizes this over
// all transitive labelings.
inline double objective_value(const LogitMatrix& m, const PairLabeling& y) {
    require(m.size() == y.size(), errc::size_mismatch,
            "logits have n=" + std::to_string(m.size()) + ", labeling has n=" +
                std::to_string(y.size()));
    const auto& f = m.values();
    const auto& labels = y.values();
    double total = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (labels[k]) total += f[k];
    return total;
}

inline double objective_value(const LogitMatrix& m, const Partition& p) {
    require(m.size() == p.size(), errc::size_mismatch,
            "logits have n=" + std::to_string(m.size()) + ", partition has n=" +
                std::to_string(p.size()));
    double total = 0.0;
    for (const auto& cluster : p.clusters())
        for (std::size_t a = 0; a < cluster.size(); ++a)
            for (std::size_t b = a + 1; b < cluster.size(); ++b)
                total += m(cluster[a], cluster[b]);
    return total;
}

// Independent per-pair decisions: join iff f >= 0. The result maximizes the
// objective over all (not necessarily transitive) labelings.
inline PairLabeling threshold_decisions(const LogitMatrix& m) {
    PairLabeling y(m.size());
    const auto& f = m.values();
    std::vector<std::uint8_t> values(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) values[k] = f[k] >= 0.0 ? 1 : 0;
    return PairLabeling::from_values(m.size(), std::move(values));
}

// Block matrix over n1+n2 elements; ids of the second instance are offset by
// n1 and the cross block supplies every score in between.
inline LogitMatrix merge_instances(const LogitMatrix& m1, const LogitMatrix& m2,
                                   const CrossScores& cross) {
    require(cross.rows() == m1.size() && cross.cols() == m2.size(), errc::incomplete_cross,
            "cross block is " + std::to_string(cross.rows()) + "x" + std::to_string(cross.cols()) +
                ", instances have n1=" + std::to_string(m1.size()) + ", n2=" +
                std::to_string(m2.size()));
    const int n1 = m1.size(), n = m1.size() + m2.size();
    LogitMatrix merged(n);
    for (int i = 0; i < n1; ++i)
        for (int j = i + 1; j < n1; ++j) merged.set(i, j, m1(i, j));
    for (int i = 0; i < m2.size(); ++i)
        for (int j = i + 1; j < m2.size(); ++j) merged.set(n1 + i, n1 + j, m2(i, j));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < m2.size(); ++j) merged.set(i, n1 + j, cross(i, j));
    return merged;
}

}  // namespace corrclust
