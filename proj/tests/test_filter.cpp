#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "mixr/filter.hpp"
#include "mixr/reward.hpp"
#include "mixr/rng.hpp"

using namespace mixr;

namespace {

RewardGroup group_of(std::vector<double> rewards, std::vector<bool> compliant) {
    return make_group(rewards, compliant, 0.1);
}

const FilterConfig kDefaults{};

} // namespace

TEST_CASE("classification uses strict threshold comparisons") {
    REQUIRE(classify_group(group_of({9.5, 10.0}, {true, true}), kDefaults) == GroupLabel::AllHigh);
    // A sample exactly at the threshold keeps the group.
    REQUIRE(classify_group(group_of({9.0, 10.0}, {true, true}), kDefaults) == GroupLabel::Keep);
    REQUIRE(classify_group(group_of({0.2, 0.9}, {true, true}), kDefaults) == GroupLabel::AllLow);
    REQUIRE(classify_group(group_of({1.0, 0.5}, {true, true}), kDefaults) == GroupLabel::Keep);
    REQUIRE(classify_group(group_of({0.5, 9.5}, {true, true}), kDefaults) == GroupLabel::Keep);
}

TEST_CASE("all-violating outranks the reward-band labels") {
    REQUIRE(classify_group(group_of({9.5, 9.9}, {false, false}), kDefaults) ==
            GroupLabel::AllViolating);
    REQUIRE(classify_group(group_of({0.1, 0.2}, {false, false}), kDefaults) ==
            GroupLabel::AllViolating);
    REQUIRE(classify_group(group_of({9.5, 9.9}, {false, true}), kDefaults) == GroupLabel::AllHigh);
}

TEST_CASE("classification agrees with the penalty path on all-violating groups") {
    Rng rng(3);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_index(2, 6));
        std::vector<double> rewards(n);
        std::vector<bool> compliant(n);
        for (std::size_t i = 0; i < n; ++i) {
            rewards[i] = rng.uniform(0.0, 10.0);
            compliant[i] = rng.bernoulli(0.5);
        }
        RewardGroup g = group_of(rewards, compliant);
        const bool labeled = classify_group(g, kDefaults) == GroupLabel::AllViolating;
        bool threw = false;
        try {
            compute_penalty(g);
        } catch (const AllViolatingError&) {
            threw = true;
        } catch (const NoViolatorsError&) {
        }
        REQUIRE(labeled == threw);
    }
}

TEST_CASE("fill_batch refills the deficit each round") {
    // Generator alternates keepable and all-violating groups.
    int calls = 0;
    auto gen = [&calls] {
        const bool keep = (calls++ % 2) == 0;
        return keep ? group_of({5.0, 6.0}, {true, true}) : group_of({5.0, 6.0}, {false, false});
    };
    FilterConfig cfg;
    cfg.target_batch_size = 4;
    cfg.max_resample_rounds = 16;

    const FillResult<RewardGroup> result = fill_batch(gen, cfg);
    REQUIRE(result.groups.size() == 4);
    REQUIRE(result.draws == 7); // rounds of 4, 2, 1 draws
    REQUIRE(result.rounds == 3);
    REQUIRE(result.dropped.all_violating == 3);
    REQUIRE(result.shortfall == 0);
    for (const auto& g : result.groups)
        REQUIRE(classify_group(g, cfg) == GroupLabel::Keep);
}

TEST_CASE("kept groups pass through untouched") {
    auto gen = [] { return group_of({2.5, 7.5}, {true, false}); };
    FilterConfig cfg;
    cfg.target_batch_size = 2;
    const FillResult<RewardGroup> result = fill_batch(gen, cfg);
    for (const auto& g : result.groups) {
        REQUIRE(g.delta == 0.0); // no shaping happened inside the filter
        REQUIRE(g.samples[0].raw_reward == 2.5);
        REQUIRE(g.samples[0].adjusted_reward == 2.5);
    }
}

TEST_CASE("an all-violating stream exhausts the budget") {
    auto gen = [] { return group_of({5.0, 6.0}, {false, false}); };
    FilterConfig cfg;
    cfg.target_batch_size = 4;
    cfg.max_resample_rounds = 3;
    REQUIRE_THROWS_AS(fill_batch(gen, cfg), ExhaustedError);
}

TEST_CASE("a partial batch is a shortfall, not an error") {
    int calls = 0;
    auto gen = [&calls] {
        const bool keep = calls++ < 2;
        return keep ? group_of({5.0, 6.0}, {true, true}) : group_of({5.0, 6.0}, {false, false});
    };
    FilterConfig cfg;
    cfg.target_batch_size = 4;
    cfg.max_resample_rounds = 3;
    const FillResult<RewardGroup> result = fill_batch(gen, cfg);
    REQUIRE(result.groups.size() == 2);
    REQUIRE(result.shortfall == 2);
}

TEST_CASE("draw count stays near the keep-rate prediction") {
    Rng rng(19);
    auto gen = [&rng] {
        // Half the groups land in the all-high band.
        return rng.bernoulli(0.5) ? group_of({9.5, 9.8}, {true, true})
                                  : group_of({4.0, 6.0}, {true, true});
    };
    FilterConfig cfg;
    cfg.target_batch_size = 64;
    cfg.max_resample_rounds = 64;
    const FillResult<RewardGroup> result = fill_batch(gen, cfg);
    REQUIRE(result.groups.size() == 64);
    // Expected draws = 128; allow a wide Monte-Carlo band.
    REQUIRE(result.draws >= 90);
    REQUIRE(result.draws <= 170);
    REQUIRE(result.dropped.all_high == result.draws - 64);
}

TEST_CASE("fill_batch works through a projection") {
    struct Wrapped {
        RewardGroup rewards;
        int payload = 0;
    };
    int calls = 0;
    auto gen = [&calls] {
        Wrapped w;
        w.payload = calls;
        const bool keep = (calls++ % 2) == 0;
        w.rewards = keep ? group_of({5.0, 6.0}, {true, true}) : group_of({5.0, 6.0}, {false, false});
        return w;
    };
    FilterConfig cfg;
    cfg.target_batch_size = 2;
    const FillResult<Wrapped> result = fill_batch(gen, cfg, &Wrapped::rewards);
    REQUIRE(result.groups.size() == 2);
    REQUIRE(result.groups[0].payload == 0);
    REQUIRE(result.groups[1].payload == 2);
}

TEST_CASE("group labels have stable names") {
    REQUIRE(group_label_name(GroupLabel::Keep) == std::string("keep"));
    REQUIRE(group_label_name(GroupLabel::AllHigh) == std::string("all_high"));
    REQUIRE(group_label_name(GroupLabel::AllLow) == std::string("all_low"));
    REQUIRE(group_label_name(GroupLabel::AllViolating) == std::string("all_violating"));
}
