// Command implementations behind the CLI binary. Each command is a plain
// function over streams and paths so the surface is directly testable.
//
// Exit codes: 0 success / compliant, 1 domain failure (non-compliance,
// per-line errors), 2 usage or schema error, 3 resample exhaustion.
#pragma once

#include <array>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mixr/io.hpp"
#include "mixr/reward.hpp"
#include "mixr/rng.hpp"
#include "mixr/sim.hpp"
#include "mixr/strategies.hpp"

namespace mixr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitExhausted = 3;

// ---------------------------------------------------------------------------
// adjust: read group records as JSONL, emit shaped records as JSONL.

struct AdjustOptions {
    StrategyKind strategy{};
    bool gamma_overridden = false; // when true the flag wins over per-record gamma
};

// One JSON object per input line: {"rewards": [...], "compliant": [...],
// "gamma": optional}. Output mirrors the input plus delta, adjusted,
// advantages, mean, std. A bad line becomes an error record instead; any
// error record makes the final exit code 1.
inline int cmd_adjust(std::istream& in, std::ostream& out, const AdjustOptions& opts) {
    using io::json;
    std::size_t lineno = 0;
    bool any_error = false;
    std::string line;

    auto emit_error = [&](const char* code, const std::string& detail) {
        any_error = true;
        out << json{{"line", lineno}, {"error", code}, {"detail", detail}}.dump() << "\n";
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            emit_error("parse_error", e.what());
            continue;
        }

        if (!j.is_object() || !j.contains("rewards") || !j["rewards"].is_array() ||
            !j.contains("compliant") || !j["compliant"].is_array()) {
            emit_error("schema_error", "record needs 'rewards' and 'compliant' arrays");
            continue;
        }

        std::vector<double> rewards;
        std::vector<bool> compliant;
        try {
            rewards = j["rewards"].get<std::vector<double>>();
            compliant = j["compliant"].get<std::vector<bool>>();
        } catch (const json::exception& e) {
            emit_error("schema_error", e.what());
            continue;
        }

        if (rewards.size() != compliant.size()) {
            emit_error("length_mismatch", "rewards and compliant differ in length");
            continue;
        }
        if (rewards.size() < 2) {
            emit_error("invalid_group", "group needs at least 2 samples");
            continue;
        }

        StrategyKind kind = opts.strategy;
        if (!opts.gamma_overridden && j.contains("gamma")) {
            if (!j["gamma"].is_number() || !(j["gamma"].get<double>() > 0.0)) {
                emit_error("invalid_group", "gamma must be a positive number");
                continue;
            }
            kind.gamma = j["gamma"].get<double>();
        }

        RewardGroup group;
        group.gamma = kind.gamma;
        group.samples.reserve(rewards.size());
        for (std::size_t i = 0; i < rewards.size(); ++i)
            group.samples.push_back({rewards[i], compliant[i], rewards[i], 0.0, 0});

        ShapeResult shaped;
        try {
            shaped = shape_detailed(kind, group);
        } catch (const AllViolatingError&) {
            emit_error("all_violating", "every sample in the group fails verification");
            continue;
        } catch (const DegenerateGroupError&) {
            emit_error("degenerate_group", "effective rewards have zero variance");
            continue;
        }

        out << json{
                   {"rewards", rewards},
                   {"compliant", compliant},
                   {"gamma", kind.gamma},
                   {"strategy", strategy_name(kind.variant)},
                   {"delta", shaped.delta},
                   {"adjusted", shaped.effective},
                   {"advantages", shaped.stats.advantages},
                   {"mean", shaped.stats.mean},
                   {"std", shaped.stats.stddev},
               }.dump()
            << "\n";
    }
    return any_error ? kExitDomainFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// verify: check one text file against a constraint file.

inline int cmd_verify(const std::string& text_path, const std::string& constraints_path,
                      std::ostream& out, std::ostream& err) {
    std::string text;
    ConstraintSet set;
    try {
        text = io::read_file_text(text_path);
        set = io::load_constraints_jsonl(constraints_path);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    io::json verdicts = io::json::array();
    bool all_pass = true;
    for (const auto& c : set) {
        const bool pass = verify_one(text, c);
        all_pass = all_pass && pass;
        io::json record{{"kind", io::constraint_kind_name(c.kind)}, {"pass", pass}};
        if (io::kind_takes_text(c.kind)) record["arg"] = c.text_arg();
        else record["arg"] = c.count_arg();
        verdicts.push_back(record);
        err << (pass ? "[pass] " : "[FAIL] ") << io::constraint_kind_name(c.kind) << "\n";
    }
    out << io::json{{"constraints", verdicts}, {"compliant", all_pass}}.dump() << "\n";
    err << (all_pass ? "compliant" : "non-compliant") << "\n";
    return all_pass ? kExitOk : kExitDomainFailure;
}

// ---------------------------------------------------------------------------
// simulate: run a scenario, stream metrics as JSONL, summarize.

struct SimulateOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma;
    std::optional<std::string> strategy;
    std::vector<std::uint64_t> seeds; // when nonempty, fan out one run per seed
};

namespace detail {

inline io::json run_summary(const Scenario& sc, const std::vector<StepMetrics>& trace) {
    io::json summary{{"seed", sc.seed},
                     {"strategy", strategy_name(sc.strategy.variant)},
                     {"steps_completed", trace.size()}};
    if (trace.empty()) {
        summary["action_probs"] = softmax(std::vector<double>(sc.actions.size(), 0.0));
    } else {
        const StepMetrics& last = trace.back();
        summary["action_probs"] = last.action_probs;
        summary["final_compliance_rate"] = last.compliance_rate;
        summary["final_mean_raw_reward"] = last.mean_raw_reward;
        summary["final_mean_length"] = last.mean_length;
    }
    return summary;
}

inline void write_metrics_jsonl(const std::string& path, const std::vector<StepMetrics>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open output file: " + path);
    for (const auto& m : trace) out << io::metrics_to_json(m).dump() << "\n";
}

} // namespace detail

inline int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                        const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    Scenario base;
    try {
        base = io::load_scenario_file(scenario_path);
        if (opts.strategy) {
            if (!strategy_from_name(*opts.strategy, base.strategy.variant))
                throw SchemaError("unknown strategy '" + *opts.strategy + "'");
        }
        if (opts.gamma) {
            if (!(*opts.gamma > 0.0)) throw SchemaError("gamma must be > 0");
            base.strategy.gamma = *opts.gamma;
        }
        if (opts.seed) base.seed = *opts.seed;
        validate_scenario(base);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    struct SeedRun {
        Scenario scenario;
        std::string path;
    };
    std::vector<SeedRun> runs;
    if (opts.seeds.empty()) {
        runs.push_back({base, out_path});
    } else {
        for (std::uint64_t s : opts.seeds) {
            Scenario sc = base;
            sc.seed = s;
            runs.push_back({sc, out_path + ".seed" + std::to_string(s)});
        }
    }

    // Each run owns its policy and rng stream, so seed sweeps execute in
    // parallel workers.
    std::vector<std::future<std::vector<StepMetrics>>> futures;
    futures.reserve(runs.size());
    for (const auto& r : runs)
        futures.push_back(std::async(runs.size() > 1 ? std::launch::async : std::launch::deferred,
                                     [sc = r.scenario] { return run(sc); }));

    int exit_code = kExitOk;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        try {
            const std::vector<StepMetrics> trace = futures[i].get();
            detail::write_metrics_jsonl(runs[i].path, trace);
            const io::json summary = detail::run_summary(runs[i].scenario, trace);
            out << summary.dump() << "\n";
            err << "seed " << runs[i].scenario.seed << ": " << trace.size() << " steps, probs "
                << summary["action_probs"].dump() << "\n";
        } catch (const ExhaustedError& e) {
            err << "error: " << e.what() << "\n";
            exit_code = kExitExhausted;
        } catch (const SchemaError& e) {
            err << "error: " << e.what() << "\n";
            exit_code = kExitUsage;
        }
    }
    return exit_code;
}

// ---------------------------------------------------------------------------
// fit-bt: fit the preference scorer, emit params as JSON.

inline int cmd_fit_bt(const std::string& pairs_path, const FitOptions& opts, std::ostream& out,
                      std::ostream& err) {
    std::vector<PreferencePair> pairs;
    try {
        pairs = io::load_pairs_jsonl(pairs_path);
        if (pairs.empty()) throw SchemaError("pairs file holds no records");
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    ScorerParams params;
    double final_loss = 0.0;
    try {
        params = fit(pairs, opts);
        final_loss = bt_loss(params, pairs);
    } catch (const DimensionMismatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    io::json result = io::params_to_json(params);
    result["loss"] = final_loss;
    out << result.dump() << "\n";
    err << "fitted " << pairs.size() << " pairs, " << opts.steps << " steps, loss " << final_loss
        << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle: randomized check of the penalty-bound and ordering guarantees.

struct OracleReport {
    std::size_t trials = 0;
    std::size_t penalty_bound_violations = 0;
    std::size_t advantage_sign_violations = 0;
    std::size_t compliant_changed_violations = 0;
    std::size_t order_violations = 0;
    std::size_t normalization_violations = 0;

    std::size_t total_violations() const {
        return penalty_bound_violations + advantage_sign_violations +
               compliant_changed_violations + order_violations + normalization_violations;
    }
};

// Draws a random group with n in [2,16], rewards uniform in [0,10], and a
// violator count k uniform in [1, n-1].
inline RewardGroup random_mixed_group(Rng& rng, double gamma) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_index(2, 16));
    const std::size_t k = static_cast<std::size_t>(rng.uniform_index(1, n - 1));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_index(0, i - 1));
        std::swap(order[i - 1], order[j]);
    }

    RewardGroup g;
    g.gamma = gamma;
    g.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.samples[i].raw_reward = rng.uniform(0.0, 10.0);
        g.samples[i].adjusted_reward = g.samples[i].raw_reward;
        g.samples[i].compliant = true;
    }
    for (std::size_t i = 0; i < k; ++i) g.samples[order[i]].compliant = false;
    return g;
}

inline OracleReport run_oracle(std::size_t trials, std::uint64_t seed) {
    constexpr double kTol = 1e-9;
    const std::array<double, 3> gammas{0.01, 0.1, 1.0};

    OracleReport report;
    report.trials = trials;
    Rng rng(seed);

    for (std::size_t t = 0; t < trials; ++t) {
        const double gamma = gammas[t % gammas.size()];
        const RewardGroup input = random_mixed_group(rng, gamma);
        const RewardGroup shaped = shape_group_rlmr(input);

        double mean = 0.0;
        for (const auto& s : shaped.samples) mean += s.adjusted_reward;
        mean /= static_cast<double>(shaped.size());

        double adv_sum = 0.0;
        double adv_sq = 0.0;
        for (std::size_t i = 0; i < shaped.size(); ++i) {
            const SampleRecord& s = shaped.samples[i];
            adv_sum += s.advantage;
            adv_sq += s.advantage * s.advantage;
            if (!s.compliant) {
                if (s.adjusted_reward > mean - gamma + kTol) ++report.penalty_bound_violations;
                if (!(s.advantage < 0.0)) ++report.advantage_sign_violations;
            } else {
                if (s.adjusted_reward != input.samples[i].raw_reward)
                    ++report.compliant_changed_violations;
            }
        }
        if (std::abs(adv_sum) > kTol * static_cast<double>(shaped.size()))
            ++report.normalization_violations;
        const double pop_std = std::sqrt(adv_sq / static_cast<double>(shaped.size()) -
                                         (adv_sum / static_cast<double>(shaped.size())) *
                                             (adv_sum / static_cast<double>(shaped.size())));
        if (std::abs(pop_std - 1.0) > 1e-9) ++report.normalization_violations;

        for (std::size_t i = 0; i < shaped.size(); ++i) {
            for (std::size_t jdx = i + 1; jdx < shaped.size(); ++jdx) {
                const SampleRecord& a = shaped.samples[i];
                const SampleRecord& b = shaped.samples[jdx];
                if (!a.compliant || !b.compliant) continue;
                const double raw_diff = a.raw_reward - b.raw_reward;
                const double adv_diff = a.advantage - b.advantage;
                const double adj_diff = a.adjusted_reward - b.adjusted_reward;
                const bool same_sign = (raw_diff > 0) == (adv_diff > 0) &&
                                       (raw_diff < 0) == (adv_diff < 0) &&
                                       (raw_diff > 0) == (adj_diff > 0) &&
                                       (raw_diff < 0) == (adj_diff < 0);
                if (!same_sign) ++report.order_violations;
            }
        }
    }
    return report;
}

inline int cmd_oracle(std::size_t trials, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
    if (trials == 0) {
        err << "error: trials must be >= 1\n";
        return kExitUsage;
    }
    const OracleReport report = run_oracle(trials, seed);
    out << io::json{
               {"trials", report.trials},
               {"seed", seed},
               {"violations",
                io::json{{"penalty_bound", report.penalty_bound_violations},
                         {"advantage_sign", report.advantage_sign_violations},
                         {"compliant_changed", report.compliant_changed_violations},
                         {"order", report.order_violations},
                         {"normalization", report.normalization_violations}}},
               {"total_violations", report.total_violations()},
           }.dump()
        << "\n";
    err << report.trials << " trials, " << report.total_violations() << " violations\n";
    return report.total_violations() == 0 ? kExitOk : kExitDomainFailure;
}

} // namespace mixr::cli
