// Bradley-Terry preference fitting for a linear scorer over feature vectors:
// loss is the mean of -ln sigmoid(score(preferred) - score(rejected)).
// The bias cancels in the difference; it is kept so scoring single responses
// stays a complete API.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mixr/errors.hpp"

namespace mixr {

struct PreferencePair {
    std::vector<double> preferred;
    std::vector<double> rejected;
};

struct ScorerParams {
    std::vector<double> weights;
    double bias = 0.0;
};

using BtGradient = ScorerParams;

struct FitOptions {
    std::size_t steps = 500;
    double lr = 0.5;
    double l2 = 0.0;
    std::uint64_t seed = 0; // reserved for minibatching; full-batch descent ignores it
};

namespace detail {

inline void require_dims(const ScorerParams& params, std::span<const PreferencePair> pairs) {
    const std::size_t d = params.weights.size();
    if (d == 0) throw DimensionMismatchError("scorer has zero dimensions");
    for (const auto& p : pairs)
        if (p.preferred.size() != d || p.rejected.size() != d)
            throw DimensionMismatchError();
}

// Numerically stable -ln sigmoid(x) = softplus(-x).
inline double neg_log_sigmoid(double x) {
    return std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

} // namespace detail

inline double score(const ScorerParams& params, std::span<const double> features) {
    if (features.size() != params.weights.size()) throw DimensionMismatchError();
    double s = params.bias;
    for (std::size_t i = 0; i < features.size(); ++i) s += params.weights[i] * features[i];
    return s;
}

// Mean preference loss over the pairs.
inline double bt_loss(const ScorerParams& params, std::span<const PreferencePair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("bt_loss: empty pair list");
    detail::require_dims(params, pairs);

    double total = 0.0;
    for (const auto& p : pairs) {
        const double margin = score(params, p.preferred) - score(params, p.rejected);
        total += detail::neg_log_sigmoid(margin);
    }
    return total / static_cast<double>(pairs.size());
}

// Analytic gradient of bt_loss. Per pair the weight gradient is
// -(1 - sigmoid(margin)) * (f_preferred - f_rejected); the bias gradient is
// identically zero because the bias cancels in the margin.
inline BtGradient bt_grad(const ScorerParams& params, std::span<const PreferencePair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("bt_grad: empty pair list");
    detail::require_dims(params, pairs);

    const std::size_t d = params.weights.size();
    BtGradient grad;
    grad.weights.assign(d, 0.0);
    grad.bias = 0.0;

    for (const auto& p : pairs) {
        const double margin = score(params, p.preferred) - score(params, p.rejected);
        // d/dmargin of softplus(-margin) = -sigmoid(-margin)
        const double coeff = -1.0 / (1.0 + std::exp(margin));
        for (std::size_t i = 0; i < d; ++i)
            grad.weights[i] += coeff * (p.preferred[i] - p.rejected[i]);
    }
    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    for (double& w : grad.weights) w *= inv_n;
    return grad;
}

// Full-batch gradient descent from zero initialization. Deterministic; the
// optional L2 term penalizes weights only.
inline ScorerParams fit(std::span<const PreferencePair> pairs, const FitOptions& opts = {}) {
    if (pairs.empty()) throw std::invalid_argument("fit: empty pair list");
    const std::size_t d = pairs.front().preferred.size();

    ScorerParams params;
    params.weights.assign(d, 0.0);
    params.bias = 0.0;
    detail::require_dims(params, pairs);

    for (std::size_t step = 0; step < opts.steps; ++step) {
        const BtGradient grad = bt_grad(params, pairs);
        for (std::size_t i = 0; i < d; ++i)
            params.weights[i] -= opts.lr * (grad.weights[i] + opts.l2 * params.weights[i]);
    }
    return params;
}

} // namespace mixr
