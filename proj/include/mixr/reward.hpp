// Group-relative reward shaping with a dynamic violation penalty.
//
// A group holds the n responses sampled for one query. Each sample carries a
// raw quality reward and a boolean compliance verdict. Shaping subtracts one
// shared penalty
//
//     delta = max(0, (n * r_max_vio + n * gamma - sum(r)) / (n - k))
//
// from every violating sample (k = violator count, r_max_vio = highest raw
// reward among violators) before the usual group normalization
//
//     advantage_i = (r'_i - mean(r')) / std(r').
//
// delta is the smallest penalty that parks every violator at least gamma
// below the adjusted group mean, so violators always come out with strictly
// negative advantages while compliant samples keep their relative order.
// Compliant rewards are never touched.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mixr/errors.hpp"

namespace mixr {

inline constexpr double kDefaultGamma = 0.1;

// Variance below this is treated as zero signal.
inline constexpr double kDegenerateStdEps = 1e-12;

// One sampled response inside a group. `length` is a token-count proxy used
// only by simulation metrics.
struct SampleRecord {
    double raw_reward = 0.0;
    bool compliant = true;
    double adjusted_reward = 0.0;
    double advantage = 0.0;
    std::int64_t length = 0;
};

// The unit of group-relative computation: n >= 2 samples for one query plus
// the minimum-gap parameter gamma. `delta` is filled by penalty computation.
struct RewardGroup {
    std::vector<SampleRecord> samples;
    double gamma = kDefaultGamma;
    double delta = 0.0;

    std::size_t size() const noexcept { return samples.size(); }

    std::size_t violator_count() const noexcept {
        std::size_t k = 0;
        for (const auto& s : samples) k += s.compliant ? 0 : 1;
        return k;
    }

    double raw_sum() const noexcept {
        double sum = 0.0;
        for (const auto& s : samples) sum += s.raw_reward;
        return sum;
    }
};

// Convenience constructor used by tests and the I/O layer. vector<bool> is
// the parameter type because it cannot bind to a span.
inline RewardGroup make_group(std::span<const double> rewards,
                              const std::vector<bool>& compliant,
                              double gamma = kDefaultGamma) {
    if (rewards.size() != compliant.size())
        throw std::invalid_argument("make_group: rewards/compliant length mismatch");
    RewardGroup g;
    g.gamma = gamma;
    g.samples.reserve(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i)
        g.samples.push_back({rewards[i], compliant[i], rewards[i], 0.0, 0});
    return g;
}

struct AdvantageStats {
    double mean = 0.0;
    double stddev = 0.0; // population (divide-by-n)
    std::vector<double> advantages;
};

// Smallest penalty that places every violator at least gamma below the
// adjusted mean, clamped at zero when violators already sit that far down.
// Requires at least one violator and at least one compliant sample.
inline double compute_penalty(const RewardGroup& group) {
    const std::size_t n = group.size();
    if (n < 2) throw std::invalid_argument("compute_penalty: group needs at least 2 samples");
    if (!(group.gamma > 0.0)) throw std::invalid_argument("compute_penalty: gamma must be positive");

    std::size_t k = 0;
    double max_vio = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& s : group.samples) {
        sum += s.raw_reward;
        if (!s.compliant) {
            ++k;
            max_vio = std::max(max_vio, s.raw_reward);
        }
    }
    if (k == n) throw AllViolatingError();
    if (k == 0) throw NoViolatorsError();

    const double nd = static_cast<double>(n);
    const double bound = (nd * max_vio + nd * group.gamma - sum) / static_cast<double>(n - k);
    return std::max(0.0, bound);
}

// Subtracts the shared penalty from every violator and stores it in `delta`.
// Compliant samples pass through untouched; a group with no violators is the
// identity. Advantage fields are left for normalization.
inline RewardGroup adjust_group(RewardGroup group) {
    const std::size_t k = group.violator_count();
    if (!group.samples.empty() && k == group.size()) throw AllViolatingError();

    const double delta = (k == 0) ? 0.0 : compute_penalty(group);
    group.delta = delta;
    for (auto& s : group.samples)
        s.adjusted_reward = s.compliant ? s.raw_reward : s.raw_reward - delta;
    return group;
}

// Standard group normalization: (r - mean) / std with population std.
// Throws DegenerateGroupError when the rewards carry no variance.
inline AdvantageStats normalize_advantages(std::span<const double> rewards) {
    const std::size_t n = rewards.size();
    if (n < 2) throw std::invalid_argument("normalize_advantages: need at least 2 rewards");

    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (double r : rewards) {
        const double d = r - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    const double stddev = std::sqrt(var);
    if (stddev < kDegenerateStdEps) throw DegenerateGroupError();

    AdvantageStats stats;
    stats.mean = mean;
    stats.stddev = stddev;
    stats.advantages.reserve(n);
    for (double r : rewards) stats.advantages.push_back((r - mean) / stddev);
    return stats;
}

// Full shaping pipeline: penalty, adjustment, then normalization over the
// adjusted rewards. On return every sample has adjusted_reward and advantage
// populated and group.delta holds the applied penalty.
inline RewardGroup shape_group_rlmr(RewardGroup group) {
    group = adjust_group(std::move(group));

    std::vector<double> adjusted;
    adjusted.reserve(group.size());
    for (const auto& s : group.samples) adjusted.push_back(s.adjusted_reward);

    const AdvantageStats stats = normalize_advantages(adjusted);
    for (std::size_t i = 0; i < group.size(); ++i)
        group.samples[i].advantage = stats.advantages[i];
    return group;
}

} // namespace mixr
