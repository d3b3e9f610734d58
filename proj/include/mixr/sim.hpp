// Toy policy-gradient training loop over a discrete response space.
//
// Each action stands in for a response with a latent quality score, a
// compliance verdict, and a length used only for metrics. The policy is a
// softmax over per-action logits. One step samples a batch of groups through
// the dynamic-sampling filter, shapes each kept group with the configured
// strategy, and applies a single score-function update at the pre-batch
// logits (one update per sampled batch keeps the importance ratio at 1, so
// no clipping or KL machinery is needed).
//
// Step metrics (reward, compliance, length) are measured over every sample
// drawn during the step, dropped groups included, so they reflect what the
// policy actually generates rather than what the filter lets through.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixr/errors.hpp"
#include "mixr/filter.hpp"
#include "mixr/reward.hpp"
#include "mixr/rng.hpp"
#include "mixr/strategies.hpp"

namespace mixr {

// A response surrogate: fixed quality, compliance, and length.
struct Action {
    int id = 0;
    double quality = 0.0;
    bool compliant = true;
    std::int64_t length = 1;
};

struct Scenario {
    std::vector<Action> actions;
    std::size_t group_size = 8;
    double reward_noise_std = 0.3;
    double learning_rate = 0.1;
    std::size_t steps = 100;
    StrategyKind strategy{};
    FilterConfig filter{};
    std::uint64_t seed = 0;
};

inline void validate_scenario(const Scenario& sc) {
    if (sc.actions.size() < 2) throw SchemaError("scenario needs at least 2 actions");
    if (sc.group_size < 2) throw SchemaError("group_size must be >= 2");
    if (sc.reward_noise_std < 0.0) throw SchemaError("noise_std must be >= 0");
    if (!(sc.learning_rate >= 0.0)) throw SchemaError("lr must be >= 0");
    if (!(sc.filter.low_threshold < sc.filter.high_threshold))
        throw SchemaError("filter.low_threshold must be below filter.high_threshold");
    for (const auto& a : sc.actions) {
        if (!std::isfinite(a.quality)) throw SchemaError("action quality must be finite");
        if (a.length < 1) throw SchemaError("action length must be >= 1");
    }
    if (sc.strategy.variant == Strategy::Rlmr) {
        bool any_compliant = false;
        bool any_violating = false;
        for (const auto& a : sc.actions) (a.compliant ? any_compliant : any_violating) = true;
        if (!any_compliant || !any_violating)
            throw SchemaError("rlmr scenario needs both compliant and non-compliant actions");
    }
}

struct PolicyState {
    std::vector<double> logits;
    std::size_t step = 0;
};

inline std::vector<double> softmax(std::span<const double> logits) {
    double max_logit = logits.front();
    for (double l : logits) max_logit = std::max(max_logit, l);
    std::vector<double> probs(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

// A reward group plus the action index that produced each sample.
struct SampledGroup {
    RewardGroup rewards;
    std::vector<std::size_t> actions;
};

struct StepMetrics {
    std::size_t step = 0;
    double mean_raw_reward = 0.0;
    double compliance_rate = 0.0;
    double mean_length = 0.0;
    std::vector<double> action_probs;
    DropCounts groups_dropped;
    std::size_t degenerate_groups = 0;
    std::size_t draws = 0;
};

// Draws group_size actions i.i.d. from the current policy; each sample's
// reward is the action's quality plus Gaussian noise.
inline SampledGroup sample_group(const PolicyState& policy, const Scenario& sc, Rng& rng) {
    const std::vector<double> probs = softmax(policy.logits);
    SampledGroup out;
    out.rewards.gamma = sc.strategy.gamma;
    out.rewards.samples.reserve(sc.group_size);
    out.actions.reserve(sc.group_size);
    for (std::size_t i = 0; i < sc.group_size; ++i) {
        const std::size_t idx = rng.categorical(probs);
        const Action& a = sc.actions[idx];
        SampleRecord rec;
        rec.raw_reward = rng.gaussian(a.quality, sc.reward_noise_std);
        rec.compliant = a.compliant;
        rec.adjusted_reward = rec.raw_reward;
        rec.length = a.length;
        out.rewards.samples.push_back(rec);
        out.actions.push_back(idx);
    }
    return out;
}

// Score-function gradient of sum_i advantage_i * log pi(action_i), evaluated
// at the given probabilities: sum_i advantage_i * (onehot(action_i) - probs).
inline std::vector<double> score_gradient(std::span<const double> probs,
                                          std::span<const double> advantages,
                                          std::span<const std::size_t> actions) {
    std::vector<double> grad(probs.size(), 0.0);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const double adv = advantages[i];
        grad[actions[i]] += adv;
        for (std::size_t a = 0; a < probs.size(); ++a) grad[a] -= adv * probs[a];
    }
    return grad;
}

// One gradient step from a single shaped group, evaluated at the pre-update
// logits. Advantages must already be populated on the samples.
inline PolicyState policy_update(const PolicyState& policy, const SampledGroup& group, double lr) {
    const std::vector<double> probs = softmax(policy.logits);
    std::vector<double> advantages;
    advantages.reserve(group.rewards.size());
    for (const auto& s : group.rewards.samples) advantages.push_back(s.advantage);

    const std::vector<double> grad = score_gradient(probs, advantages, group.actions);
    PolicyState next = policy;
    for (std::size_t a = 0; a < next.logits.size(); ++a) next.logits[a] += lr * grad[a];
    next.step = policy.step + 1;
    return next;
}

// Full training loop: returns one StepMetrics per step. Deterministic for a
// fixed scenario and seed. ExhaustedError is annotated with the step it
// occurred on and rethrown.
inline std::vector<StepMetrics> run(const Scenario& sc) {
    validate_scenario(sc);

    PolicyState policy;
    policy.logits.assign(sc.actions.size(), 0.0);
    Rng rng(sc.seed);

    std::vector<StepMetrics> trace;
    trace.reserve(sc.steps);

    for (std::size_t step = 0; step < sc.steps; ++step) {
        // Behavioral tallies over every drawn sample, dropped groups included.
        double reward_sum = 0.0;
        double length_sum = 0.0;
        std::size_t compliant_count = 0;
        std::size_t sample_count = 0;

        auto generate = [&]() {
            SampledGroup g = sample_group(policy, sc, rng);
            for (const auto& s : g.rewards.samples) {
                reward_sum += s.raw_reward;
                length_sum += static_cast<double>(s.length);
                compliant_count += s.compliant ? 1 : 0;
                ++sample_count;
            }
            return g;
        };

        FillResult<SampledGroup> batch;
        try {
            batch = fill_batch(generate, sc.filter, &SampledGroup::rewards);
        } catch (const ExhaustedError& e) {
            throw ExhaustedError(std::string(e.what()) + " at step " + std::to_string(step), step);
        }

        const std::vector<double> probs = softmax(policy.logits);
        std::vector<double> grad(policy.logits.size(), 0.0);
        std::size_t degenerate = 0;
        for (const auto& g : batch.groups) {
            AdvantageStats stats;
            try {
                stats = shape(sc.strategy, g.rewards);
            } catch (const DegenerateGroupError&) {
                ++degenerate; // no contrast, no gradient
                continue;
            } catch (const AllViolatingError&) {
                ++degenerate; // filtered upstream; unreachable unless thresholds disagree
                continue;
            }
            const std::vector<double> g_grad = score_gradient(probs, stats.advantages, g.actions);
            for (std::size_t a = 0; a < grad.size(); ++a) grad[a] += g_grad[a];
        }

        for (std::size_t a = 0; a < policy.logits.size(); ++a)
            policy.logits[a] += sc.learning_rate * grad[a];
        policy.step = step + 1;

        StepMetrics m;
        m.step = step;
        m.mean_raw_reward = sample_count ? reward_sum / static_cast<double>(sample_count) : 0.0;
        m.compliance_rate =
            sample_count ? static_cast<double>(compliant_count) / static_cast<double>(sample_count) : 0.0;
        m.mean_length = sample_count ? length_sum / static_cast<double>(sample_count) : 0.0;
        m.action_probs = softmax(policy.logits);
        m.groups_dropped = batch.dropped;
        m.degenerate_groups = degenerate;
        m.draws = batch.draws;
        trace.push_back(std::move(m));
    }
    return trace;
}

} // namespace mixr
