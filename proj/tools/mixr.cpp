#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixr/cli.hpp"

namespace {

int run_adjust(const std::string& in_path, const std::string& out_path,
               const mixr::cli::AdjustOptions& opts) {
    std::ifstream fin;
    std::ofstream fout;
    if (!in_path.empty()) {
        fin.open(in_path, std::ios::binary);
        if (!fin) {
            std::cerr << "error: cannot open input file: " << in_path << "\n";
            return mixr::cli::kExitUsage;
        }
    }
    if (!out_path.empty()) {
        fout.open(out_path, std::ios::binary);
        if (!fout) {
            std::cerr << "error: cannot open output file: " << out_path << "\n";
            return mixr::cli::kExitUsage;
        }
    }
    std::istream& in = in_path.empty() ? std::cin : fin;
    std::ostream& out = out_path.empty() ? std::cout : fout;
    return mixr::cli::cmd_adjust(in, out, opts);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixr: mixed-reward shaping and training-loop toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    double gamma = mixr::kDefaultGamma;
    std::string strategy_name = "rlmr";
    auto* seed_opt = app.add_option("--seed", seed, "rng seed (default 0)");
    auto* gamma_opt = app.add_option("--gamma", gamma, "violation margin, must be > 0");
    auto* strategy_opt = app.add_option(
        "--strategy", strategy_name, "writing_only | verification_only | linear | rlmr");

    auto* adjust = app.add_subcommand("adjust", "shape JSONL reward groups");
    adjust->fallthrough();
    std::string adjust_in;
    std::string adjust_out;
    adjust->add_option("--input", adjust_in, "input JSONL path (default stdin)");
    adjust->add_option("--output", adjust_out, "output JSONL path (default stdout)");

    auto* verify = app.add_subcommand("verify", "check a text file against constraints");
    verify->fallthrough();
    std::string verify_text;
    std::string verify_constraints;
    verify->add_option("text", verify_text, "text file to check")->required();
    verify->add_option("constraints", verify_constraints, "constraint JSONL file")->required();

    auto* simulate = app.add_subcommand("simulate", "run a training-loop scenario");
    simulate->fallthrough();
    std::string scenario_path;
    std::string metrics_path;
    std::vector<std::uint64_t> seed_sweep;
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--out", metrics_path, "metrics JSONL output path")->required();
    simulate->add_option("--seeds", seed_sweep, "run once per seed, writing <out>.seed<N>")
        ->delimiter(',');

    auto* fit_bt = app.add_subcommand("fit-bt", "fit the pairwise preference scorer");
    fit_bt->fallthrough();
    std::string pairs_path;
    std::string params_path;
    mixr::FitOptions fit_opts;
    fit_bt->add_option("pairs", pairs_path, "preference pair JSONL file")->required();
    fit_bt->add_option("--steps", fit_opts.steps, "gradient steps (default 500)");
    fit_bt->add_option("--lr", fit_opts.lr, "learning rate (default 0.5)");
    fit_bt->add_option("--l2", fit_opts.l2, "l2 penalty on weights (default 0)");
    fit_bt->add_option("--out", params_path, "also write params JSON to this file");

    auto* oracle = app.add_subcommand("oracle", "randomized check of shaping guarantees");
    oracle->fallthrough();
    std::size_t trials = 1000;
    oracle->add_option("--trials", trials, "number of random groups (default 1000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // help or version
        app.exit(e);
        return mixr::cli::kExitUsage;
    }

    mixr::StrategyKind kind;
    if (!mixr::strategy_from_name(strategy_name, kind.variant)) {
        std::cerr << "error: unknown strategy '" << strategy_name << "'\n";
        return mixr::cli::kExitUsage;
    }
    if (!(gamma > 0.0)) {
        std::cerr << "error: gamma must be > 0\n";
        return mixr::cli::kExitUsage;
    }
    kind.gamma = gamma;

    if (app.got_subcommand(adjust)) {
        mixr::cli::AdjustOptions opts;
        opts.strategy = kind;
        opts.gamma_overridden = gamma_opt->count() > 0;
        return run_adjust(adjust_in, adjust_out, opts);
    }

    if (app.got_subcommand(verify))
        return mixr::cli::cmd_verify(verify_text, verify_constraints, std::cout, std::cerr);

    if (app.got_subcommand(simulate)) {
        mixr::cli::SimulateOptions opts;
        if (seed_opt->count() > 0) opts.seed = seed;
        if (gamma_opt->count() > 0) opts.gamma = gamma;
        if (strategy_opt->count() > 0) opts.strategy = strategy_name;
        opts.seeds = seed_sweep;
        return mixr::cli::cmd_simulate(scenario_path, metrics_path, opts, std::cout, std::cerr);
    }

    if (app.got_subcommand(fit_bt)) {
        std::ostringstream buf;
        const int rc = mixr::cli::cmd_fit_bt(pairs_path, fit_opts, buf, std::cerr);
        std::cout << buf.str();
        if (rc == mixr::cli::kExitOk && !params_path.empty()) {
            std::ofstream f(params_path, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot open output file: " << params_path << "\n";
                return mixr::cli::kExitUsage;
            }
            f << buf.str();
        }
        return rc;
    }

    if (app.got_subcommand(oracle))
        return mixr::cli::cmd_oracle(trials, seed, std::cout, std::cerr);

    return mixr::cli::kExitUsage;
}
