// JSON wire formats: scenario files, constraint files, preference pairs,
// scorer params, and step-metrics lines. Parsers throw SchemaError on any
// malformed input; the CLI maps that to its usage exit code.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixr/bt.hpp"
#include "mixr/constraints.hpp"
#include "mixr/errors.hpp"
#include "mixr/sim.hpp"
#include "mixr/strategies.hpp"

namespace mixr::io {

using json = nlohmann::json;

inline std::string read_file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Constraint files: one JSON object per line,
//   {"kind": "max_words", "arg": 15, "counting_mode": "whitespace_tokens"}

inline ConstraintKind constraint_kind_from_name(const std::string& name) {
    if (name == "max_words") return ConstraintKind::MaxWords;
    if (name == "min_words") return ConstraintKind::MinWords;
    if (name == "starts_with") return ConstraintKind::StartsWith;
    if (name == "ends_with") return ConstraintKind::EndsWith;
    if (name == "contains_keyword") return ConstraintKind::ContainsKeyword;
    if (name == "forbids_keyword") return ConstraintKind::ForbidsKeyword;
    if (name == "exact_line_count") return ConstraintKind::ExactLineCount;
    if (name == "max_chars") return ConstraintKind::MaxChars;
    throw SchemaError("unknown constraint kind '" + name + "'");
}

inline const char* constraint_kind_name(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::MaxWords: return "max_words";
    case ConstraintKind::MinWords: return "min_words";
    case ConstraintKind::StartsWith: return "starts_with";
    case ConstraintKind::EndsWith: return "ends_with";
    case ConstraintKind::ContainsKeyword: return "contains_keyword";
    case ConstraintKind::ForbidsKeyword: return "forbids_keyword";
    case ConstraintKind::ExactLineCount: return "exact_line_count";
    case ConstraintKind::MaxChars: return "max_chars";
    }
    return "unknown";
}

inline bool kind_takes_text(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::StartsWith:
    case ConstraintKind::EndsWith:
    case ConstraintKind::ContainsKeyword:
    case ConstraintKind::ForbidsKeyword:
        return true;
    default:
        return false;
    }
}

inline ConstraintSpec constraint_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw SchemaError("constraint needs a string 'kind'");
    ConstraintSpec spec;
    spec.kind = constraint_kind_from_name(j["kind"].get<std::string>());

    if (!j.contains("arg")) throw SchemaError("constraint needs 'arg'");
    if (kind_takes_text(spec.kind)) {
        if (!j["arg"].is_string()) throw SchemaError("constraint 'arg' must be a string for this kind");
        spec.argument = j["arg"].get<std::string>();
    } else {
        if (!j["arg"].is_number_unsigned() && !j["arg"].is_number_integer())
            throw SchemaError("constraint 'arg' must be a nonnegative integer for this kind");
        const auto v = j["arg"].get<std::int64_t>();
        if (v < 0) throw SchemaError("constraint 'arg' must be >= 0");
        spec.argument = static_cast<std::uint64_t>(v);
    }

    if (j.contains("counting_mode")) {
        const std::string mode = j["counting_mode"].get<std::string>();
        if (mode == "whitespace_tokens") spec.counting_mode = CountingMode::WhitespaceTokens;
        else if (mode == "unicode_scalars") spec.counting_mode = CountingMode::UnicodeScalars;
        else throw SchemaError("unknown counting_mode '" + mode + "'");
    }
    return spec;
}

inline ConstraintSet load_constraints_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open constraint file: " + path);
    ConstraintSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError("constraint file line " + std::to_string(lineno) + ": " + e.what());
        }
        set.push_back(constraint_from_json(j));
    }
    return set;
}

// ---------------------------------------------------------------------------
// Strategy / filter / scenario config

inline StrategyKind strategy_from_json(const json& j, double default_gamma = kDefaultGamma) {
    StrategyKind kind;
    kind.gamma = default_gamma;
    if (j.contains("strategy")) {
        if (!j["strategy"].is_string()) throw SchemaError("'strategy' must be a string");
        if (!strategy_from_name(j["strategy"].get<std::string>(), kind.variant))
            throw SchemaError("unknown strategy '" + j["strategy"].get<std::string>() + "'");
    }
    if (j.contains("gamma")) {
        if (!j["gamma"].is_number()) throw SchemaError("'gamma' must be a number");
        kind.gamma = j["gamma"].get<double>();
        if (!(kind.gamma > 0.0)) throw SchemaError("'gamma' must be > 0");
    }
    return kind;
}

inline FilterConfig filter_from_json(const json& j) {
    FilterConfig cfg;
    if (!j.is_object()) throw SchemaError("'filter' must be an object");
    if (j.contains("high_threshold")) cfg.high_threshold = j["high_threshold"].get<double>();
    if (j.contains("low_threshold")) cfg.low_threshold = j["low_threshold"].get<double>();
    if (j.contains("target_batch_size")) {
        const auto v = j["target_batch_size"].get<std::int64_t>();
        if (v < 1) throw SchemaError("filter.target_batch_size must be >= 1");
        cfg.target_batch_size = static_cast<std::size_t>(v);
    }
    if (j.contains("max_resample_rounds")) {
        const auto v = j["max_resample_rounds"].get<std::int64_t>();
        if (v < 1) throw SchemaError("filter.max_resample_rounds must be >= 1");
        cfg.max_resample_rounds = static_cast<std::size_t>(v);
    }
    return cfg;
}

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
    if (!j.contains("actions") || !j["actions"].is_array())
        throw SchemaError("scenario needs an 'actions' array");

    Scenario sc;
    int next_id = 0;
    for (const auto& aj : j["actions"]) {
        if (!aj.is_object() || !aj.contains("quality") || !aj.contains("compliant"))
            throw SchemaError("each action needs 'quality' and 'compliant'");
        Action a;
        a.id = next_id++;
        a.quality = aj["quality"].get<double>();
        a.compliant = aj["compliant"].get<bool>();
        a.length = aj.contains("length") ? aj["length"].get<std::int64_t>() : 1;
        sc.actions.push_back(a);
    }

    if (j.contains("group_size")) sc.group_size = j["group_size"].get<std::size_t>();
    if (j.contains("noise_std")) sc.reward_noise_std = j["noise_std"].get<double>();
    if (j.contains("lr")) sc.learning_rate = j["lr"].get<double>();
    if (j.contains("steps")) sc.steps = j["steps"].get<std::size_t>();
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    sc.strategy = strategy_from_json(j);
    if (j.contains("filter")) sc.filter = filter_from_json(j["filter"]);

    try {
        validate_scenario(sc);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file_text(path));
    } catch (const json::parse_error& e) {
        throw SchemaError("scenario file: " + std::string(e.what()));
    }
    return scenario_from_json(j);
}

// ---------------------------------------------------------------------------
// Preference pairs and scorer params

inline PreferencePair pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("fw") || !j.contains("fl") || !j["fw"].is_array() ||
        !j["fl"].is_array())
        throw SchemaError("preference record needs 'fw' and 'fl' arrays");
    PreferencePair p;
    p.preferred = j["fw"].get<std::vector<double>>();
    p.rejected = j["fl"].get<std::vector<double>>();
    return p;
}

inline std::vector<PreferencePair> load_pairs_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open pairs file: " + path);
    std::vector<PreferencePair> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError("pairs file line " + std::to_string(lineno) + ": " + e.what());
        }
        pairs.push_back(pair_from_json(j));
    }
    return pairs;
}

inline json params_to_json(const ScorerParams& params) {
    return json{{"weights", params.weights}, {"bias", params.bias}};
}

// ---------------------------------------------------------------------------
// Step metrics lines

inline json metrics_to_json(const StepMetrics& m) {
    return json{
        {"step", m.step},
        {"mean_raw_reward", m.mean_raw_reward},
        {"compliance_rate", m.compliance_rate},
        {"mean_length", m.mean_length},
        {"action_probs", m.action_probs},
        {"groups_dropped",
         json{{"all_high", m.groups_dropped.all_high},
              {"all_low", m.groups_dropped.all_low},
              {"all_violating", m.groups_dropped.all_violating},
              {"degenerate", m.degenerate_groups}}},
        {"draws", m.draws},
    };
}

} // namespace mixr::io
