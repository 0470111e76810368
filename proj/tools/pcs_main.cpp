// Command-line surface of the toolkit.
//
//   pcs run <config.json>        run the analyses requested in the config
//   pcs sweep-beta <config>      beta sweep only (optionally --betas ...)
//   pcs weights <config>         weight-by-rank table only
//   pcs histogram <config>       individual-error histogram only
//   pcs bound-check <config>     misdirection bound vs exact probability
//   pcs gen-synthetic ...        write a synthetic dataset file
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcs/dataset_io.hpp"
#include "pcs/errors.hpp"
#include "pcs/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long trials = 0;
    bool trials_set = false;
    int threads = 1;
    std::string output_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", args.seed, "override the master seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--trials", args.trials, "override the trial count")
        ->each([&](const std::string&) { args.trials_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads (results are identical)");
    cmd->add_option("--output", args.output_dir, "override the output directory");
}

pcs::RunOptions to_options(const CommonArgs& args) {
    pcs::RunOptions options;
    options.threads = args.threads;
    if (args.seed_set) options.seed = args.seed;
    if (args.trials_set) options.trials = args.trials;
    if (!args.output_dir.empty()) options.output_dir = args.output_dir;
    return options;
}

int run_with(const CommonArgs& args, pcs::RunOptions options) {
    const pcs::ExperimentConfig config = pcs::ExperimentConfig::load_file(args.config_path);
    const pcs::ReportBundle bundle = pcs::run_experiment(config, options);
    std::cout << "wrote " << bundle.files_written.size() << " files to "
              << bundle.output_dir.string() << " (config " << bundle.config_hash
              << ", seed " << bundle.seed << ", " << bundle.wall_time_seconds << "s)\n";
    return 0;
}

std::vector<pcs::Rational> parse_beta_list(const std::string& text) {
    std::vector<pcs::Rational> betas;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) betas.push_back(pcs::parse_fraction(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (betas.empty()) throw pcs::ConfigError("--betas needs a comma-separated list");
    return betas;
}

int gen_synthetic(double v1, double v2, long long k, long long workers,
                  std::uint64_t seed, const std::string& output) {
    if (workers < 1) throw pcs::InvalidInputError("--workers must be positive");
    const pcs::SyntheticBinaryPopulation source(v1, v2, static_cast<std::size_t>(k));
    pcs::RngStream rng(seed);

    std::vector<std::string> question_ids, worker_ids;
    for (long long q = 1; q <= k; ++q) question_ids.push_back("q" + std::to_string(q));
    std::vector<pcs::AnswerVector> rows;
    for (long long w = 1; w <= workers; ++w) {
        worker_ids.push_back("w" + std::to_string(w));
        rows.push_back(source.draw(rng));
    }
    const pcs::EmpiricalPopulation population(
        "synthetic", source.domain(), question_ids, worker_ids, std::move(rows),
        source.ground_truth());
    pcs::write_dataset(output, population);
    std::cout << "wrote " << workers << " workers x " << k << " questions to " << output
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proxy-weighted crowdsourcing simulation toolkit"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, weights_args, histogram_args, bound_args;
    std::string sweep_betas_text;
    std::size_t histogram_bins = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "run the analyses requested in the config");
    add_common(cmd_run, run_args);

    CLI::App* cmd_sweep = app.add_subcommand("sweep-beta", "expected loss across beta values");
    add_common(cmd_sweep, sweep_args);
    cmd_sweep->add_option("--betas", sweep_betas_text,
                          "comma-separated beta values, e.g. 0,1/6,1/3,1/2");

    CLI::App* cmd_weights = app.add_subcommand("weights", "leader weight by error rank");
    add_common(cmd_weights, weights_args);

    CLI::App* cmd_histogram = app.add_subcommand("histogram", "individual error histogram");
    add_common(cmd_histogram, histogram_args);
    cmd_histogram->add_option("--bins", histogram_bins, "number of bins");

    CLI::App* cmd_bound = app.add_subcommand("bound-check",
                                             "misdirection bound vs exact probability");
    add_common(cmd_bound, bound_args);

    CLI::App* cmd_gen = app.add_subcommand("gen-synthetic", "write a synthetic dataset");
    std::string gen_v1 = "0.5", gen_v2 = "0.5", gen_output;
    long long gen_k = 25, gen_workers = 100;
    std::uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    cmd_gen->add_option("--v1", gen_v1, "competence interval lower end")->required();
    cmd_gen->add_option("--v2", gen_v2, "competence interval upper end")->required();
    cmd_gen->add_option("--k", gen_k, "questions per worker")->required();
    cmd_gen->add_option("--workers", gen_workers, "number of workers")->required();
    cmd_gen->add_option("--seed", gen_seed, "generator seed")
        ->each([&](const std::string&) { gen_seed_set = true; })
        ->required();
    cmd_gen->add_option("--output", gen_output, "dataset file to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return run_with(run_args, to_options(run_args));
        if (cmd_sweep->parsed()) {
            pcs::RunOptions options = to_options(sweep_args);
            options.analyses = std::vector<pcs::Analysis>{pcs::Analysis::Sweep};
            if (!sweep_betas_text.empty()) {
                options.sweep_betas = parse_beta_list(sweep_betas_text);
            }
            return run_with(sweep_args, options);
        }
        if (cmd_weights->parsed()) {
            pcs::RunOptions options = to_options(weights_args);
            options.analyses = std::vector<pcs::Analysis>{pcs::Analysis::WeightByRank};
            return run_with(weights_args, options);
        }
        if (cmd_histogram->parsed()) {
            pcs::RunOptions options = to_options(histogram_args);
            options.analyses = std::vector<pcs::Analysis>{pcs::Analysis::Histogram};
            if (histogram_bins > 0) options.histogram_bins = histogram_bins;
            return run_with(histogram_args, options);
        }
        if (cmd_bound->parsed()) {
            pcs::RunOptions options = to_options(bound_args);
            options.analyses = std::vector<pcs::Analysis>{pcs::Analysis::BoundCheck};
            return run_with(bound_args, options);
        }
        if (cmd_gen->parsed()) {
            (void)gen_seed_set;
            return gen_synthetic(pcs::to_double(pcs::parse_fraction(gen_v1)),
                                 pcs::to_double(pcs::parse_fraction(gen_v2)), gen_k,
                                 gen_workers, gen_seed, gen_output);
        }
    } catch (const pcs::ConfigError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return 1;
    } catch (const pcs::FormatError& error) {
        std::cerr << "format error: " << error.what() << "\n";
        return 1;
    } catch (const pcs::InvalidInputError& error) {
        std::cerr << "invalid input: " << error.what() << "\n";
        return 1;
    } catch (const pcs::InfeasiblePolicyError& error) {
        std::cerr << "infeasible policy: " << error.what() << "\n";
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 0;
}
