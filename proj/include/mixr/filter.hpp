// Dynamic sampling: drop groups that carry no learning signal and resample
// until the batch is full. Three drop classes: every reward above the high
// threshold, every reward below the low threshold, or every sample failing
// verification. Thresholds are absolute reward values.
#pragma once

#include <cstddef>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "mixr/errors.hpp"
#include "mixr/reward.hpp"

namespace mixr {

struct FilterConfig {
    double high_threshold = 9.0;
    double low_threshold = 1.0;
    std::size_t target_batch_size = 8;
    std::size_t max_resample_rounds = 16;
};

enum class GroupLabel {
    Keep,
    AllHigh,
    AllLow,
    AllViolating,
};

inline const char* group_label_name(GroupLabel label) {
    switch (label) {
    case GroupLabel::Keep: return "keep";
    case GroupLabel::AllHigh: return "all_high";
    case GroupLabel::AllLow: return "all_low";
    case GroupLabel::AllViolating: return "all_violating";
    }
    return "unknown";
}

// Labels one group. A group can satisfy several drop classes at once; the
// reported label follows the fixed precedence AllViolating > AllHigh >
// AllLow (all three trigger the same drop, the label only feeds metrics).
inline GroupLabel classify_group(const RewardGroup& group, const FilterConfig& cfg) {
    bool all_high = true;
    bool all_low = true;
    bool all_violating = true;
    for (const auto& s : group.samples) {
        all_high = all_high && s.raw_reward > cfg.high_threshold;
        all_low = all_low && s.raw_reward < cfg.low_threshold;
        all_violating = all_violating && !s.compliant;
    }
    if (all_violating) return GroupLabel::AllViolating;
    if (all_high) return GroupLabel::AllHigh;
    if (all_low) return GroupLabel::AllLow;
    return GroupLabel::Keep;
}

struct DropCounts {
    std::size_t all_high = 0;
    std::size_t all_low = 0;
    std::size_t all_violating = 0;

    std::size_t total() const noexcept { return all_high + all_low + all_violating; }
};

template <class T>
struct FillResult {
    std::vector<T> groups;
    std::size_t draws = 0;
    std::size_t rounds = 0;
    DropCounts dropped;
    std::size_t shortfall = 0; // target minus kept when the budget ran out
};

// Pulls groups from `generate` until target_batch_size groups classify as
// Keep. Each round draws as many new groups as the batch is still short;
// after max_resample_rounds the batch is returned as-is with the shortfall
// reported, except that an entirely empty batch raises ExhaustedError.
//
// `generate` may return any movable type; `proj` maps an element to the
// RewardGroup to classify (identity by default). Kept elements are moved out
// of the generator untouched.
template <class Gen, class Proj = std::identity>
auto fill_batch(Gen&& generate, const FilterConfig& cfg, Proj proj = {})
    -> FillResult<std::remove_cvref_t<std::invoke_result_t<Gen&>>> {
    using T = std::remove_cvref_t<std::invoke_result_t<Gen&>>;
    if (cfg.target_batch_size == 0)
        throw std::invalid_argument("fill_batch: target_batch_size must be >= 1");

    FillResult<T> result;
    result.groups.reserve(cfg.target_batch_size);

    while (result.groups.size() < cfg.target_batch_size && result.rounds < cfg.max_resample_rounds) {
        ++result.rounds;
        const std::size_t deficit = cfg.target_batch_size - result.groups.size();
        for (std::size_t i = 0; i < deficit; ++i) {
            T item = std::invoke(generate);
            ++result.draws;
            switch (classify_group(std::invoke(proj, item), cfg)) {
            case GroupLabel::Keep:
                result.groups.push_back(std::move(item));
                break;
            case GroupLabel::AllHigh: ++result.dropped.all_high; break;
            case GroupLabel::AllLow: ++result.dropped.all_low; break;
            case GroupLabel::AllViolating: ++result.dropped.all_violating; break;
            }
        }
    }

    if (result.groups.empty()) throw ExhaustedError();
    result.shortfall = cfg.target_batch_size - result.groups.size();
    return result;
}

} // namespace mixr
