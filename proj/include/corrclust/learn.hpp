#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/partition.hpp"
#include "corrclust/rng.hpp"

namespace corrclust {

struct FeatureSet {
    int n = 0, m = 0;
    std::vector<double> x;  // n*m row-major

    static FeatureSet from_values(int n, int m, std::vector<double> values) {
        require(n >= 1 && m >= 1, errc::invalid_argument, "feature set needs n,m >= 1");
        require(values.size() == std::size_t(n) * m, errc::size_mismatch,
                "expected " + std::to_string(std::size_t(n) * m) + " feature values, got " +
                    std::to_string(values.size()));
        for (double v : values)
            require(std::isfinite(v), errc::non_finite, "feature value is not finite");
        return {n, m, std::move(values)};
    }

    std::span<const double> row(int a) const {
        return {x.data() + std::size_t(a) * m, std::size_t(m)};
    }
};

// Elements with features plus the pair labels induced by class annotations:
// a pair is a join iff both elements carry the same class.
struct PairDataset {
    FeatureSet features;
    PairLabeling y;

    static PairDataset from_classes(FeatureSet features, const std::vector<int>& class_of) {
        require(int(class_of.size()) == features.n, errc::size_mismatch,
                "features have n=" + std::to_string(features.n) + ", classes have n=" +
                    std::to_string(class_of.size()));
        PairLabeling y(features.n);
        for (int i = 0; i < features.n; ++i)
            for (int j = i + 1; j < features.n; ++j)
                if (class_of[i] == class_of[j]) y.set(i, j, 1);
        return {std::move(features), std::move(y)};
    }
};

// Order-free pair representation: component-wise |x_a - x_b| followed by
// x_a * x_b, length 2m. Symmetric in its arguments by construction.
inline void pair_features(std::span<const double> xa, std::span<const double> xb,
                          std::span<double> out) {
    require(xa.size() == xb.size(), errc::dimension_mismatch,
            "feature dimensions differ: " + std::to_string(xa.size()) + " vs " +
                std::to_string(xb.size()));
    require(out.size() == 2 * xa.size(), errc::dimension_mismatch, "output span has wrong length");
    const std::size_t m = xa.size();
    for (std::size_t d = 0; d < m; ++d) {
        out[d] = std::abs(xa[d] - xb[d]);
        out[m + d] = xa[d] * xb[d];
    }
}

inline std::vector<double> pair_features(std::span<const double> xa, std::span<const double> xb) {
    std::vector<double> out(2 * xa.size());
    pair_features(xa, xb, out);
    return out;
}

// Linear scorer over symmetric pair features: theta holds 2m weights
// followed by one bias, every coordinate box-constrained to [-tau, tau].
struct ModelParams {
    int m = 0;
    std::vector<double> theta;  // size 2m+1, bias last
    double tau = 1e6;

    double bias() const { return theta.back(); }

    static ModelParams validated(int m, std::vector<double> theta, double tau) {
        require(m >= 1, errc::invalid_argument, "model needs m >= 1");
        require(theta.size() == std::size_t(2 * m + 1), errc::dimension_mismatch,
                "expected " + std::to_string(2 * m + 1) + " parameters, got " +
                    std::to_string(theta.size()));
        require(tau >= 0.0 && std::isfinite(tau), errc::invalid_argument, "tau must be >= 0");
        for (double t : theta) {
            require(std::isfinite(t), errc::non_finite, "parameter is not finite");
            require(std::abs(t) <= tau, errc::out_of_range, "parameter outside [-tau, tau]");
        }
        return {m, std::move(theta), tau};
    }
};

inline double score(const ModelParams& params, std::span<const double> xa,
                    std::span<const double> xb) {
    require(int(xa.size()) == params.m && int(xb.size()) == params.m, errc::dimension_mismatch,
            "model has m=" + std::to_string(params.m) + ", features have m=" +
                std::to_string(xa.size()) + " and " + std::to_string(xb.size()));
    const std::size_t m = xa.size();
    double f = params.theta[2 * m];
    for (std::size_t d = 0; d < m; ++d) {
        f += params.theta[d] * std::abs(xa[d] - xb[d]);
        f += params.theta[m + d] * (xa[d] * xb[d]);
    }
    return f;
}

// Negative base-2 log-likelihood of label y under the logistic model:
//   loss(f, y) = -y*f + log2(1 + 2^f)
// evaluated in overflow-safe form. Equals 1 exactly at f = 0.
inline double pair_loss(double f, int y) {
    const double softplus2 =
        std::max(f, 0.0) + std::log1p(std::exp2(-std::abs(f))) / std::numbers::ln2;
    return -double(y) * f + softplus2;
}

struct PairRef {
    int a, b;
};

namespace detail {

// Mean loss over the batch and, if grad is non-null, its exact gradient in
// theta. d/df loss = p - y with p = 1/(1+2^-f); the base-2 logs cancel.
inline double batch_loss_impl(const ModelParams& params, const PairDataset& ds,
                              std::span<const PairRef> batch, std::vector<double>* grad) {
    require(!batch.empty(), errc::empty_batch, "batch is empty");
    const int m = ds.features.m;
    require(params.m == m, errc::dimension_mismatch,
            "model has m=" + std::to_string(params.m) + ", features have m=" + std::to_string(m));
    const std::size_t dim = params.theta.size();
    if (grad) grad->assign(dim, 0.0);
    std::vector<double> phi(2 * m);
    double loss = 0.0;
    for (const PairRef& pair : batch) {
        pair_features(ds.features.row(pair.a), ds.features.row(pair.b), phi);
        double f = params.theta[2 * m];
        for (int d = 0; d < 2 * m; ++d) f += params.theta[d] * phi[d];
        const int y = ds.y(pair.a, pair.b);
        loss += pair_loss(f, y);
        if (grad) {
            const double residual = logit_to_prob(f) - double(y);
            for (int d = 0; d < 2 * m; ++d) (*grad)[d] += residual * phi[d];
            (*grad)[2 * m] += residual;
        }
    }
    const double inv = 1.0 / double(batch.size());
    if (grad)
        for (double& g : *grad) g *= inv;
    return loss * inv;
}

}  // namespace detail

inline double batch_loss(const ModelParams& params, const PairDataset& ds,
                         std::span<const PairRef> batch) {
    return detail::batch_loss_impl(params, ds, batch, nullptr);
}

inline std::vector<double> gradient(const ModelParams& params, const PairDataset& ds,
                                    std::span<const PairRef> batch) {
    std::vector<double> grad;
    detail::batch_loss_impl(params, ds, batch, &grad);
    return grad;
}

// Streams batches with exactly half join pairs and half cut pairs, each half
// drawn uniformly without replacement per batch from the seeded generator.
class BalancedBatchSampler {
public:
    BalancedBatchSampler(const PairDataset& ds, int batch_size, std::uint64_t seed)
        : half_(batch_size / 2), rng_(seed, /*stream=*/1) {
        require(batch_size >= 2 && batch_size % 2 == 0, errc::invalid_argument,
                "batch size must be even and >= 2");
        const int n = ds.features.n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                (ds.y(i, j) ? joins_ : cuts_).push_back({i, j});
        require(int(joins_.size()) >= half_ && int(cuts_.size()) >= half_,
                errc::insufficient_pairs,
                "need at least " + std::to_string(half_) + " joins and cuts, have " +
                    std::to_string(joins_.size()) + " joins and " + std::to_string(cuts_.size()) +
                    " cuts");
    }

    std::vector<PairRef> next() {
        std::vector<PairRef> batch;
        batch.reserve(2 * half_);
        for (std::size_t k : rng_.sample_distinct(half_, joins_.size()))
            batch.push_back(joins_[k]);
        for (std::size_t k : rng_.sample_distinct(half_, cuts_.size()))
            batch.push_back(cuts_[k]);
        return batch;
    }

private:
    std::vector<PairRef> joins_, cuts_;
    int half_;
    Rng rng_;
};

struct TrainConfig {
    double learning_rate = 1e-4;
    int batch_size = 64;
    int iterations = 20000;
    std::uint64_t seed = 0;
    double weight_decay = 0.01;
    double tau = 1e6;
    double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history;  // pre-step batch loss per iteration
};

// AdamW from zero-initialized parameters with decoupled weight decay;
// coordinates are clipped to [-tau, tau] after every step.
inline TrainResult train(const PairDataset& ds, const TrainConfig& cfg) {
    require(cfg.learning_rate > 0.0, errc::invalid_argument, "learning rate must be positive");
    require(cfg.iterations >= 0, errc::invalid_argument, "iterations must be >= 0");
    require(cfg.weight_decay >= 0.0, errc::invalid_argument, "weight decay must be >= 0");
    require(cfg.tau >= 0.0, errc::invalid_argument, "tau must be >= 0");
    require(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0,
            errc::invalid_argument, "betas must lie in [0,1)");
    require(cfg.adam_eps > 0.0, errc::invalid_argument, "adam_eps must be positive");

    const int dim = 2 * ds.features.m + 1;
    ModelParams params{ds.features.m, std::vector<double>(dim, 0.0), cfg.tau};
    BalancedBatchSampler sampler(ds, cfg.batch_size, cfg.seed);

    std::vector<double> first_moment(dim, 0.0), second_moment(dim, 0.0), grad(dim);
    std::vector<double> loss_history;
    loss_history.reserve(cfg.iterations);
    double beta1_power = 1.0, beta2_power = 1.0;
    for (int t = 0; t < cfg.iterations; ++t) {
        const auto batch = sampler.next();
        loss_history.push_back(detail::batch_loss_impl(params, ds, batch, &grad));
        beta1_power *= cfg.beta1;
        beta2_power *= cfg.beta2;
        for (int d = 0; d < dim; ++d) {
            first_moment[d] = cfg.beta1 * first_moment[d] + (1.0 - cfg.beta1) * grad[d];
            second_moment[d] = cfg.beta2 * second_moment[d] + (1.0 - cfg.beta2) * grad[d] * grad[d];
            const double mhat = first_moment[d] / (1.0 - beta1_power);
            const double vhat = second_moment[d] / (1.0 - beta2_power);
            const double stepped =
                params.theta[d] - cfg.learning_rate * (mhat / (std::sqrt(vhat) + cfg.adam_eps) +
                                                       cfg.weight_decay * params.theta[d]);
            params.theta[d] = std::clamp(stepped, -cfg.tau, cfg.tau);
        }
    }
    return {std::move(params), std::move(loss_history)};
}

// Materialize the all-pairs score matrix of one feature set.
inline LogitMatrix score_all(const ModelParams& params, const FeatureSet& features) {
    LogitMatrix m(features.n);
    for (int i = 0; i < features.n; ++i)
        for (int j = i + 1; j < features.n; ++j)
            m.set(i, j, score(params, features.row(i), features.row(j)));
    return m;
}

// Scores between two feature sets, e.g. test elements against training data.
inline CrossScores score_cross(const ModelParams& params, const FeatureSet& a,
                               const FeatureSet& b) {
    require(a.m == b.m, errc::dimension_mismatch,
            "feature sets have m=" + std::to_string(a.m) + " and m=" + std::to_string(b.m));
    CrossScores cross(a.n, b.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j) cross.set(i, j, score(params, a.row(i), b.row(j)));
    return cross;
}

}  // namespace corrclust
