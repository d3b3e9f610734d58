// The four reward-fusion strategies behind one interface.
//
//   WritingOnly      normalizes the raw quality rewards as-is.
//   VerificationOnly replaces each reward with its compliance bit.
//   LinearWeighting  min-max normalizes rewards within the group to [0,1] and
//                    averages them with the compliance bit (equal weights).
//   Rlmr             dynamic penalty adjustment, then normalization.
//
// Linear weighting's min-max scope is per group: it is the only scope
// computable inside one sampling step without global statistics. An all-equal
// group maps to 0.5 for every sample.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mixr/errors.hpp"
#include "mixr/reward.hpp"

namespace mixr {

enum class Strategy {
    WritingOnly,
    VerificationOnly,
    LinearWeighting,
    Rlmr,
};

// Strategy selection plus the only strategy-specific knob: the minimum gap
// used by the dynamic penalty.
struct StrategyKind {
    Strategy variant = Strategy::Rlmr;
    double gamma = kDefaultGamma;
};

// The rewards each strategy hands to normalization, aligned with samples.
// For Rlmr these are the penalty-adjusted rewards.
inline std::vector<double> fused_rewards(const StrategyKind& kind, const RewardGroup& group) {
    const std::size_t n = group.size();
    std::vector<double> out;
    out.reserve(n);

    switch (kind.variant) {
    case Strategy::WritingOnly:
        for (const auto& s : group.samples) out.push_back(s.raw_reward);
        break;
    case Strategy::VerificationOnly:
        for (const auto& s : group.samples) out.push_back(s.compliant ? 1.0 : 0.0);
        break;
    case Strategy::LinearWeighting: {
        double lo = group.samples.front().raw_reward;
        double hi = lo;
        for (const auto& s : group.samples) {
            lo = std::min(lo, s.raw_reward);
            hi = std::max(hi, s.raw_reward);
        }
        const double span = hi - lo;
        for (const auto& s : group.samples) {
            const double scaled = span > 0.0 ? (s.raw_reward - lo) / span : 0.5;
            const double bit = s.compliant ? 1.0 : 0.0;
            out.push_back(0.5 * (scaled + bit));
        }
        break;
    }
    case Strategy::Rlmr: {
        RewardGroup g = group;
        g.gamma = kind.gamma;
        g = adjust_group(std::move(g));
        for (const auto& s : g.samples) out.push_back(s.adjusted_reward);
        break;
    }
    }
    return out;
}

struct ShapeResult {
    std::vector<double> effective; // the rewards normalization ran on
    AdvantageStats stats;
    double delta = 0.0; // nonzero only under Rlmr
};

// Shapes the group under the chosen strategy. Throws DegenerateGroupError
// when the effective rewards are all equal (for example VerificationOnly on
// an all-compliant group) and propagates AllViolatingError from Rlmr.
inline ShapeResult shape_detailed(const StrategyKind& kind, const RewardGroup& group) {
    ShapeResult result;
    if (kind.variant == Strategy::Rlmr) {
        RewardGroup g = group;
        g.gamma = kind.gamma;
        g = adjust_group(std::move(g));
        result.delta = g.delta;
        result.effective.reserve(g.size());
        for (const auto& s : g.samples) result.effective.push_back(s.adjusted_reward);
    } else {
        result.effective = fused_rewards(kind, group);
    }
    result.stats = normalize_advantages(result.effective);
    return result;
}

inline AdvantageStats shape(const StrategyKind& kind, const RewardGroup& group) {
    return shape_detailed(kind, group).stats;
}

inline const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::WritingOnly: return "writing_only";
    case Strategy::VerificationOnly: return "verification_only";
    case Strategy::LinearWeighting: return "linear";
    case Strategy::Rlmr: return "rlmr";
    }
    return "unknown";
}

inline bool strategy_from_name(const std::string& name, Strategy& out) {
    if (name == "writing_only") out = Strategy::WritingOnly;
    else if (name == "verification_only") out = Strategy::VerificationOnly;
    else if (name == "linear") out = Strategy::LinearWeighting;
    else if (name == "rlmr") out = Strategy::Rlmr;
    else return false;
    return true;
}

} // namespace mixr
