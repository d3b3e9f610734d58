#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mixr/reward.hpp"
#include "mixr/rng.hpp"

using namespace mixr;
using Catch::Approx;

namespace {

// Independent oracle: the smallest delta >= 0 that places every violator at
// least gamma below the adjusted mean, found by bisection. Feasibility is
// monotone because a violator falls with slope -1 while the mean falls with
// slope -k/n < 1.
double bisect_min_delta(const RewardGroup& g) {
    const double n = static_cast<double>(g.size());
    const double k = static_cast<double>(g.violator_count());
    auto feasible = [&](double d) {
        const double mean = (g.raw_sum() - k * d) / n;
        for (const auto& s : g.samples)
            if (!s.compliant && s.raw_reward - d > mean - g.gamma) return false;
        return true;
    };
    if (feasible(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (!feasible(hi)) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

RewardGroup random_group(Rng& rng, double gamma) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_index(2, 16));
    const std::size_t k = static_cast<std::size_t>(rng.uniform_index(1, n - 1));
    std::vector<double> rewards(n);
    std::vector<bool> compliant(n, true);
    for (auto& r : rewards) r = rng.uniform(0.0, 10.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_index(0, i - 1))]);
    for (std::size_t i = 0; i < k; ++i) compliant[idx[i]] = false;
    return make_group(rewards, compliant, gamma);
}

} // namespace

TEST_CASE("three-sample worked example: delta 4, adjusted mean 5") {
    RewardGroup g = make_group(std::vector<double>{10.0, 8.0, 1.0},
                               std::vector<bool>{true, false, true}, 1.0);
    REQUIRE(compute_penalty(g) == 4.0);

    RewardGroup shaped = shape_group_rlmr(g);
    REQUIRE(shaped.delta == 4.0);
    REQUIRE(shaped.samples[0].adjusted_reward == 10.0);
    REQUIRE(shaped.samples[1].adjusted_reward == 4.0);
    REQUIRE(shaped.samples[2].adjusted_reward == 1.0);

    double mean = 0.0;
    for (const auto& s : shaped.samples) mean += s.adjusted_reward;
    REQUIRE(mean / 3.0 == 5.0);

    // Population std of {10, 4, 1} is sqrt(14).
    const double inv = 1.0 / std::sqrt(14.0);
    REQUIRE(shaped.samples[0].advantage == Approx(5.0 * inv).epsilon(1e-12));
    REQUIRE(shaped.samples[1].advantage == Approx(-1.0 * inv).epsilon(1e-12));
    REQUIRE(shaped.samples[2].advantage == Approx(-4.0 * inv).epsilon(1e-12));
}

TEST_CASE("two-point group lands on +1/-1 advantages") {
    RewardGroup g =
        make_group(std::vector<double>{8.9, 9.0}, std::vector<bool>{true, false}, 0.1);
    REQUIRE(compute_penalty(g) == Approx(0.3).epsilon(1e-12));

    RewardGroup shaped = shape_group_rlmr(g);
    REQUIRE(shaped.samples[0].adjusted_reward == 8.9);
    REQUIRE(shaped.samples[1].adjusted_reward == Approx(8.7).epsilon(1e-12));
    REQUIRE(shaped.samples[0].advantage == Approx(1.0).epsilon(1e-12));
    REQUIRE(shaped.samples[1].advantage == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("tied raw rewards still separate by gamma") {
    RewardGroup g = make_group(std::vector<double>{5.0, 5.0}, std::vector<bool>{true, false}, 1.0);
    REQUIRE(compute_penalty(g) == 2.0);
    RewardGroup shaped = adjust_group(g);
    REQUIRE(shaped.samples[0].adjusted_reward == 5.0);
    REQUIRE(shaped.samples[1].adjusted_reward == 3.0);
}

TEST_CASE("penalty clamps at zero when the violator already trails") {
    RewardGroup g = make_group(std::vector<double>{10.0, 0.0}, std::vector<bool>{true, false}, 0.1);
    REQUIRE(compute_penalty(g) == 0.0);
    RewardGroup shaped = adjust_group(g);
    REQUIRE(shaped.delta == 0.0);
    REQUIRE(shaped.samples[1].adjusted_reward == 0.0);
    // The bound still holds without any penalty.
    REQUIRE(0.0 <= 5.0 - g.gamma);
}

TEST_CASE("no violators: adjustment is the identity") {
    RewardGroup g = make_group(std::vector<double>{3.0, 7.0}, std::vector<bool>{true, true}, 0.1);
    REQUIRE_THROWS_AS(compute_penalty(g), NoViolatorsError);
    RewardGroup shaped = adjust_group(g);
    REQUIRE(shaped.delta == 0.0);
    REQUIRE(shaped.samples[0].adjusted_reward == 3.0);
    REQUIRE(shaped.samples[1].adjusted_reward == 7.0);
}

TEST_CASE("all violators is an error") {
    RewardGroup g = make_group(std::vector<double>{3.0, 7.0}, std::vector<bool>{false, false}, 0.1);
    REQUIRE_THROWS_AS(compute_penalty(g), AllViolatingError);
    REQUIRE_THROWS_AS(adjust_group(g), AllViolatingError);
}

TEST_CASE("group preconditions are enforced") {
    RewardGroup single = make_group(std::vector<double>{1.0}, std::vector<bool>{false}, 0.1);
    REQUIRE_THROWS_AS(compute_penalty(single), std::invalid_argument);

    RewardGroup bad_gamma =
        make_group(std::vector<double>{1.0, 2.0}, std::vector<bool>{true, false}, 0.0);
    REQUIRE_THROWS_AS(compute_penalty(bad_gamma), std::invalid_argument);
}

TEST_CASE("zero-variance groups are degenerate") {
    RewardGroup g =
        make_group(std::vector<double>{4.0, 4.0, 4.0}, std::vector<bool>{true, true, true}, 0.1);
    REQUIRE_THROWS_AS(shape_group_rlmr(g), DegenerateGroupError);

    const std::vector<double> flat{2.0, 2.0};
    REQUIRE_THROWS_AS(normalize_advantages(flat), DegenerateGroupError);
}

TEST_CASE("advantages are zero-mean and unit-std") {
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        RewardGroup shaped = shape_group_rlmr(random_group(rng, 0.1));
        const double n = static_cast<double>(shaped.size());
        double sum = 0.0;
        double sq = 0.0;
        for (const auto& s : shaped.samples) {
            sum += s.advantage;
            sq += s.advantage * s.advantage;
        }
        REQUIRE(std::abs(sum) < 1e-9 * n);
        REQUIRE(std::sqrt(sq / n) == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("property: every violator lands at least gamma below the adjusted mean") {
    Rng rng(11);
    const double gammas[] = {0.01, 0.1, 1.0};
    for (int t = 0; t < 2000; ++t) {
        const double gamma = gammas[t % 3];
        RewardGroup g = random_group(rng, gamma);
        RewardGroup shaped = shape_group_rlmr(g);

        double mean = 0.0;
        for (const auto& s : shaped.samples) mean += s.adjusted_reward;
        mean /= static_cast<double>(shaped.size());

        for (std::size_t i = 0; i < shaped.size(); ++i) {
            const auto& s = shaped.samples[i];
            if (s.compliant) {
                REQUIRE(s.adjusted_reward == g.samples[i].raw_reward);
            } else {
                REQUIRE(s.adjusted_reward <= mean - gamma + 1e-9);
                REQUIRE(s.advantage < 0.0);
            }
        }
    }
}

TEST_CASE("property: closed-form penalty is the minimal feasible one") {
    Rng rng(23);
    const double gammas[] = {0.01, 0.1, 1.0};
    for (int t = 0; t < 500; ++t) {
        RewardGroup g = random_group(rng, gammas[t % 3]);
        const double closed = compute_penalty(g);
        const double oracle = bisect_min_delta(g);
        REQUIRE(closed == Approx(oracle).margin(1e-6));
    }
}

TEST_CASE("property: shifting all rewards leaves delta and advantages unchanged") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        RewardGroup g = random_group(rng, 0.1);
        RewardGroup shifted = g;
        const double c = rng.uniform(-50.0, 50.0);
        for (auto& s : shifted.samples) {
            s.raw_reward += c;
            s.adjusted_reward = s.raw_reward;
        }
        RewardGroup a = shape_group_rlmr(g);
        RewardGroup b = shape_group_rlmr(shifted);
        REQUIRE(a.delta == Approx(b.delta).margin(1e-8));
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE(a.samples[i].advantage == Approx(b.samples[i].advantage).margin(1e-7));
    }
}

TEST_CASE("property: pairwise order is preserved within each compliance class") {
    Rng rng(43);
    for (int t = 0; t < 300; ++t) {
        RewardGroup shaped = shape_group_rlmr(random_group(rng, 0.1));
        for (std::size_t i = 0; i < shaped.size(); ++i) {
            for (std::size_t j = i + 1; j < shaped.size(); ++j) {
                const auto& a = shaped.samples[i];
                const auto& b = shaped.samples[j];
                if (a.compliant != b.compliant) continue;
                const double raw = a.raw_reward - b.raw_reward;
                const double adv = a.advantage - b.advantage;
                if (raw > 0) REQUIRE(adv > 0);
                if (raw < 0) REQUIRE(adv < 0);
            }
        }
    }
}
