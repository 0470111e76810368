#include "pcs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "pcs/errors.hpp"
#include "pcs/format.hpp"
#include "pcs/rng.hpp"

namespace pcs {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Name maps
// ---------------------------------------------------------------------------

std::string analysis_name(Analysis analysis) {
    switch (analysis) {
        case Analysis::Loss: return "loss";
        case Analysis::Sweep: return "sweep";
        case Analysis::WeightByRank: return "weight-by-rank";
        case Analysis::Histogram: return "histogram";
        case Analysis::BoundCheck: return "bound-check";
        case Analysis::WeightedVsUnweighted: return "weighted-vs-unweighted";
        case Analysis::AllFollowers: return "all-followers";
    }
    return "unknown";
}

Analysis analysis_from_name(const std::string& name) {
    for (Analysis a : {Analysis::Loss, Analysis::Sweep, Analysis::WeightByRank,
                       Analysis::Histogram, Analysis::BoundCheck,
                       Analysis::WeightedVsUnweighted, Analysis::AllFollowers}) {
        if (analysis_name(a) == name) return a;
    }
    throw ConfigError("unknown analysis: '" + name + "'");
}

std::string metric_name(DistanceMetric metric) {
    return metric == DistanceMetric::Hamming ? "hamming" : "l1";
}

DistanceMetric metric_from_name(const std::string& name) {
    if (name == "hamming") return DistanceMetric::Hamming;
    if (name == "l1") return DistanceMetric::L1;
    throw ConfigError("unknown metric: '" + name + "'");
}

AggregationRule rule_from_name(const std::string& name) {
    if (name == "weighted-plurality") return AggregationRule::WeightedPlurality;
    if (name == "weighted-mean") return AggregationRule::WeightedMean;
    if (name == "weighted-median") return AggregationRule::WeightedMedian;
    throw ConfigError("unknown aggregation rule: '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

const json& require_field(const json& doc, const char* key, const char* where) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        throw ConfigError(std::string(where) + ": missing required field '" + key + "'");
    }
    return *it;
}

// Fractions arrive as exact strings ("1/3", "0.2") or as JSON numbers, whose
// shortest round-trip text is parsed exactly.
Rational fraction_from_json(const json& value, const char* what) {
    try {
        if (value.is_string()) return parse_fraction(value.get<std::string>());
        if (value.is_number()) return parse_fraction(value.dump());
    } catch (const InvalidInputError& error) {
        throw ConfigError(std::string(what) + ": " + error.what());
    }
    throw ConfigError(std::string(what) + " must be a number or a fraction string");
}

std::vector<Rational> fraction_list(const json& value, const char* what) {
    if (!value.is_array() || value.empty()) {
        throw ConfigError(std::string(what) + " must be a non-empty list");
    }
    std::vector<Rational> out;
    for (const auto& item : value) out.push_back(fraction_from_json(item, what));
    return out;
}

double number_from_json(const json& value, const char* what) {
    if (value.is_string()) return to_double(fraction_from_json(value, what));
    if (value.is_number()) return value.get<double>();
    throw ConfigError(std::string(what) + " must be a number");
}

DomainSpec domain_from_json(const json& doc) {
    const std::string kind = require_field(doc, "kind", "domain").get<std::string>();
    DomainSpec spec;
    if (kind == "binary") {
        spec.kind = DomainSpec::Kind::Binary;
    } else if (kind == "categorical") {
        spec.kind = DomainSpec::Kind::Categorical;
    } else if (kind == "continuous") {
        spec.kind = DomainSpec::Kind::Continuous;
    } else {
        throw ConfigError("unknown domain kind: '" + kind + "'");
    }
    if (doc.contains("labels")) {
        spec.labels = doc.at("labels").get<std::vector<std::string>>();
    }
    if (doc.contains("upper")) {
        spec.upper = number_from_json(doc.at("upper"), "domain.upper");
    }
    return spec;
}

json domain_to_json(const DomainSpec& spec) {
    json out;
    switch (spec.kind) {
        case DomainSpec::Kind::Binary: out["kind"] = "binary"; break;
        case DomainSpec::Kind::Categorical: out["kind"] = "categorical"; break;
        case DomainSpec::Kind::Continuous: out["kind"] = "continuous"; break;
    }
    if (spec.labels) out["labels"] = *spec.labels;
    if (spec.upper) out["upper"] = *spec.upper;
    return out;
}

std::string bool_text(bool value) { return value ? "true" : "false"; }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig config;

    const json& population = require_field(doc, "population", "config");
    if (population.contains("dataset") == population.contains("synthetic")) {
        throw ConfigError("population must specify exactly one of 'dataset' or 'synthetic'");
    }
    if (population.contains("dataset")) {
        config.dataset_path = population.at("dataset").get<std::string>();
    } else {
        const json& synthetic = population.at("synthetic");
        SyntheticSpec spec;
        spec.competence_low =
            number_from_json(require_field(synthetic, "v1", "synthetic"), "synthetic.v1");
        spec.competence_high =
            number_from_json(require_field(synthetic, "v2", "synthetic"), "synthetic.v2");
        spec.questions = require_field(synthetic, "k", "synthetic").get<long long>();
        config.synthetic = spec;
    }
    if (doc.contains("domain")) config.domain = domain_from_json(doc.at("domain"));

    config.metric =
        metric_from_name(require_field(doc, "metric", "config").get<std::string>());
    config.rule = rule_from_name(require_field(doc, "rule", "config").get<std::string>());
    if (doc.contains("unnormalized_mean")) {
        config.unnormalized_mean = doc.at("unnormalized_mean").get<bool>();
    }

    const json& policies = require_field(doc, "policies", "config");
    config.alphas = fraction_list(require_field(policies, "alpha", "policies"), "alpha");
    config.betas = fraction_list(require_field(policies, "beta", "policies"), "beta");
    for (const auto& budget : require_field(policies, "budget", "policies")) {
        config.budgets.push_back(budget.get<long long>());
    }
    if (config.budgets.empty()) throw ConfigError("policies.budget must be non-empty");
    config.sweep_betas =
        doc.contains("sweep_betas")
            ? fraction_list(doc.at("sweep_betas"), "sweep_betas")
            : config.betas;

    if (doc.contains("trials")) config.trials = doc.at("trials").get<long long>();
    config.seed = require_field(doc, "seed", "config").get<std::uint64_t>();
    config.output_dir = require_field(doc, "output_dir", "config").get<std::string>();

    const json& analyses = require_field(doc, "analyses", "config");
    if (analyses.is_string() && analyses.get<std::string>() == "all") {
        // everything applicable: histogram needs a dataset population and
        // bound-check needs a grid
        config.analyses = {Analysis::Loss, Analysis::Sweep, Analysis::WeightByRank,
                           Analysis::WeightedVsUnweighted, Analysis::AllFollowers};
        if (config.dataset_path) config.analyses.push_back(Analysis::Histogram);
        if (doc.contains("bound_check")) config.analyses.push_back(Analysis::BoundCheck);
    } else if (analyses.is_array() && !analyses.empty()) {
        for (const auto& name : analyses) {
            config.analyses.push_back(analysis_from_name(name.get<std::string>()));
        }
    } else {
        throw ConfigError("analyses must be \"all\" or a non-empty list");
    }

    if (doc.contains("skip_infeasible")) {
        config.skip_infeasible = doc.at("skip_infeasible").get<bool>();
    }
    if (doc.contains("histogram_bins")) {
        config.histogram_bins = doc.at("histogram_bins").get<std::size_t>();
    }
    if (doc.contains("bound_check")) {
        const json& grid = doc.at("bound_check");
        BoundCheckGrid bounds;
        for (const auto& v : require_field(grid, "p_high", "bound_check")) {
            bounds.p_high.push_back(number_from_json(v, "bound_check.p_high"));
        }
        for (const auto& v : require_field(grid, "p_low", "bound_check")) {
            bounds.p_low.push_back(number_from_json(v, "bound_check.p_low"));
        }
        for (const auto& v : require_field(grid, "p_follower", "bound_check")) {
            bounds.p_follower.push_back(number_from_json(v, "bound_check.p_follower"));
        }
        for (const auto& v : require_field(grid, "questions", "bound_check")) {
            bounds.questions.push_back(v.get<long long>());
        }
        if (grid.contains("mc_samples")) {
            bounds.mc_samples = grid.at("mc_samples").get<long long>();
        }
        config.bound_check = bounds;
    }
    return config;
}

ExperimentConfig ExperimentConfig::load_file(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        input >> doc;
    } catch (const json::exception& error) {
        throw ConfigError("config parse error in " + path.string() + ": " + error.what());
    }
    ExperimentConfig config = from_json(doc);
    config.base_dir = path.parent_path();
    return config;
}

json ExperimentConfig::to_json() const {
    json doc;
    if (dataset_path) {
        doc["population"]["dataset"] = *dataset_path;
    } else if (synthetic) {
        doc["population"]["synthetic"] = {{"v1", synthetic->competence_low},
                                          {"v2", synthetic->competence_high},
                                          {"k", synthetic->questions}};
    }
    if (domain) doc["domain"] = domain_to_json(*domain);
    doc["metric"] = metric_name(metric);
    doc["rule"] = rule_name(rule == AggregationRule::UnnormalizedWeightedMean
                                ? AggregationRule::WeightedMean
                                : rule);
    doc["unnormalized_mean"] = unnormalized_mean;

    auto fractions = [](const std::vector<Rational>& values) {
        json list = json::array();
        for (const auto& value : values) list.push_back(to_string(value));
        return list;
    };
    doc["policies"] = {{"alpha", fractions(alphas)},
                       {"beta", fractions(betas)},
                       {"budget", budgets}};
    doc["sweep_betas"] = fractions(sweep_betas);
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["output_dir"] = output_dir;
    json names = json::array();
    for (Analysis analysis : analyses) names.push_back(analysis_name(analysis));
    doc["analyses"] = names;
    doc["skip_infeasible"] = skip_infeasible;
    doc["histogram_bins"] = histogram_bins;
    if (bound_check) {
        doc["bound_check"] = {{"p_high", bound_check->p_high},
                              {"p_low", bound_check->p_low},
                              {"p_follower", bound_check->p_follower},
                              {"questions", bound_check->questions},
                              {"mc_samples", bound_check->mc_samples}};
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

namespace {

struct GridPoint {
    Rational alpha{0};
    Rational beta{0};
    long long budget = 0;
    bool feasible = false;
    std::string reason;
    PolicyPlan plan;
};

struct PreparedRun {
    ExperimentConfig config;
    std::unique_ptr<Population> population;
    AggregationRule effective_rule = AggregationRule::WeightedPlurality;
    std::vector<GridPoint> grid;
    std::string config_hash;
    int threads = 1;
};

bool wants(const ExperimentConfig& config, Analysis analysis) {
    return std::find(config.analyses.begin(), config.analyses.end(), analysis) !=
           config.analyses.end();
}

std::unique_ptr<Population> build_population(const ExperimentConfig& config) {
    if (config.synthetic) {
        const auto& spec = *config.synthetic;
        if (config.domain && config.domain->kind != DomainSpec::Kind::Binary) {
            throw ConfigError("synthetic populations are binary; domain must be binary");
        }
        if (spec.questions < 1) throw ConfigError("synthetic.k must be positive");
        if (!(0.0 <= spec.competence_low && spec.competence_low <= spec.competence_high &&
              spec.competence_high <= 1.0)) {
            throw ConfigError("synthetic competence interval must satisfy 0 <= v1 <= v2 <= 1");
        }
        return std::make_unique<SyntheticBinaryPopulation>(
            spec.competence_low, spec.competence_high,
            static_cast<std::size_t>(spec.questions));
    }
    std::filesystem::path path(*config.dataset_path);
    if (path.is_relative() && !config.base_dir.empty()) {
        path = config.base_dir / path;
    }
    const DomainSpec spec = config.domain.value_or(DomainSpec::binary());
    try {
        return std::make_unique<EmpiricalPopulation>(load_dataset(path, spec));
    } catch (const FormatError&) {
        throw;
    } catch (const InvalidInputError& error) {
        throw ConfigError(std::string("dataset rejected: ") + error.what());
    }
}

PreparedRun prepare(const ExperimentConfig& raw, const RunOptions& options) {
    PreparedRun run;
    run.config = raw;
    if (options.seed) run.config.seed = *options.seed;
    if (options.trials) run.config.trials = *options.trials;
    if (options.output_dir) run.config.output_dir = *options.output_dir;
    if (options.analyses) run.config.analyses = *options.analyses;
    if (options.sweep_betas) run.config.sweep_betas = *options.sweep_betas;
    if (options.histogram_bins) run.config.histogram_bins = *options.histogram_bins;
    run.threads = std::max(1, options.threads);

    const ExperimentConfig& config = run.config;
    if (config.trials < 1) throw ConfigError("trials must be positive");
    if (config.output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (config.analyses.empty()) throw ConfigError("no analyses requested");

    run.population = build_population(config);
    const AnswerDomain& domain = run.population->domain();

    if (!metric_valid_for(config.metric, domain)) {
        throw ConfigError("metric '" + metric_name(config.metric) +
                          "' is not valid for the population domain");
    }
    run.effective_rule = config.rule;
    if (config.unnormalized_mean) {
        if (config.rule != AggregationRule::WeightedMean) {
            throw ConfigError("unnormalized_mean applies only to the weighted-mean rule");
        }
        run.effective_rule = AggregationRule::UnnormalizedWeightedMean;
    }
    if (!rule_valid_for(run.effective_rule, domain)) {
        throw ConfigError("rule '" + rule_name(config.rule) +
                          "' is not valid for the population domain");
    }

    const bool needs_grid = wants(config, Analysis::Loss) ||
                            wants(config, Analysis::Sweep) ||
                            wants(config, Analysis::WeightByRank) ||
                            wants(config, Analysis::WeightedVsUnweighted) ||
                            wants(config, Analysis::AllFollowers);
    if (needs_grid && (config.alphas.empty() || config.betas.empty())) {
        throw ConfigError("policy grid must list alpha, beta and budget values");
    }

    const auto k = static_cast<long long>(run.population->question_count());
    for (long long budget : config.budgets) {
        for (const Rational& alpha : config.alphas) {
            for (const Rational& beta : config.betas) {
                GridPoint point;
                point.alpha = alpha;
                point.beta = beta;
                point.budget = budget;
                try {
                    point.plan = plan(
                        Policy::pcs(alpha, beta, budget, run.effective_rule, config.metric),
                        k);
                    point.feasible = true;
                } catch (const InfeasiblePolicyError& error) {
                    point.reason = error.what();
                    if (!config.skip_infeasible) {
                        throw ConfigError(
                            "infeasible grid point (alpha=" + to_string(alpha) +
                            ", beta=" + to_string(beta) +
                            ", budget=" + std::to_string(budget) + "): " + error.what() +
                            "; set skip_infeasible to record it instead");
                    }
                } catch (const InvalidInputError& error) {
                    throw ConfigError(std::string("invalid grid point: ") + error.what());
                }
                run.grid.push_back(std::move(point));
            }
        }
    }

    if (wants(config, Analysis::Sweep) || wants(config, Analysis::AllFollowers)) {
        // both tables compare against the plain-crowdsourcing baseline
        for (long long budget : config.budgets) {
            try {
                plan(Policy::cs(budget, run.effective_rule, config.metric), k);
            } catch (const InfeasiblePolicyError& error) {
                throw ConfigError("baseline at budget " + std::to_string(budget) +
                                  " is infeasible: " + error.what());
            }
        }
    }
    if (wants(config, Analysis::WeightByRank) || wants(config, Analysis::WeightedVsUnweighted)) {
        const bool any_followers =
            std::any_of(run.grid.begin(), run.grid.end(), [](const GridPoint& point) {
                return point.feasible && point.plan.followers >= 1;
            });
        if (!any_followers) {
            throw ConfigError("weight analyses need at least one grid point with followers");
        }
    }
    if (wants(config, Analysis::AllFollowers)) {
        bool any = false;
        for (long long budget : config.budgets) {
            for (const Rational& alpha : config.alphas) {
                if (alpha <= 0) continue;
                try {
                    plan_all_followers(alpha, budget, k);
                    any = true;
                } catch (const InfeasiblePolicyError& error) {
                    if (!config.skip_infeasible) {
                        throw ConfigError(std::string("infeasible all-followers point: ") +
                                          error.what());
                    }
                }
            }
        }
        if (!any) {
            throw ConfigError("all-followers analysis needs a grid point with alpha > 0");
        }
    }
    if (wants(config, Analysis::Histogram)) {
        if (!config.dataset_path) {
            throw ConfigError("histogram analysis needs a dataset population");
        }
        if (config.histogram_bins == 0) throw ConfigError("histogram_bins must be positive");
    }
    if (wants(config, Analysis::BoundCheck)) {
        if (!config.bound_check) {
            throw ConfigError("bound-check analysis needs a bound_check grid");
        }
        const auto& grid = *config.bound_check;
        if (grid.p_high.empty() || grid.p_low.empty() || grid.p_follower.empty() ||
            grid.questions.empty()) {
            throw ConfigError("bound_check grid lists must be non-empty");
        }
        for (double ph : grid.p_high) {
            for (double pl : grid.p_low) {
                if (!(ph > 0 && ph <= 1) || !(pl > 0 && pl <= 1) || ph < pl) {
                    throw ConfigError("bound_check grid needs 0 < p_low <= p_high <= 1");
                }
            }
        }
        for (double pz : grid.p_follower) {
            if (!(pz > 0 && pz <= 1)) {
                throw ConfigError("bound_check p_follower values must lie in (0, 1]");
            }
        }
        for (long long q : grid.questions) {
            if (q < 1 || q > 20) {
                throw ConfigError("bound_check questions must lie in [1, 20]");
            }
        }
        if (grid.mc_samples < 0) throw ConfigError("bound_check mc_samples must be >= 0");
    }

    // The hash identifies the experiment: inputs that determine emitted
    // numbers. Where tables are written and which subset of them was
    // requested do not change any number, so they stay out.
    json hashed = run.config.to_json();
    hashed.erase("output_dir");
    hashed.erase("analyses");
    run.config_hash = fnv1a_hex(hashed.dump());
    return run;
}

std::string join_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

// ---------------------------------------------------------------------------
// Table builders
// ---------------------------------------------------------------------------

std::string build_loss_table(const PreparedRun& run, const GroundTruth& truth) {
    const ExperimentConfig& config = run.config;
    std::string out = join_row({"alpha", "beta", "budget", "k", "m", "n", "q", "rule",
                                "metric", "trials", "seed", "config_hash", "feasible",
                                "mean_loss", "sample_std", "std_error"});
    for (const GridPoint& point : run.grid) {
        std::vector<std::string> cells{
            to_string(point.alpha), to_string(point.beta), std::to_string(point.budget),
            std::to_string(run.population->question_count())};
        if (point.feasible) {
            const Policy policy = Policy::pcs(point.alpha, point.beta, point.budget,
                                              run.effective_rule, config.metric);
            const LossEstimate estimate = estimate_loss(
                policy, *run.population, truth, config.trials, config.seed, run.threads);
            cells.insert(cells.end(),
                         {std::to_string(point.plan.leaders),
                          std::to_string(point.plan.followers),
                          std::to_string(point.plan.follower_questions),
                          rule_name(run.effective_rule), metric_name(config.metric),
                          std::to_string(config.trials), std::to_string(config.seed),
                          run.config_hash, "true", format_double(estimate.mean_loss),
                          format_double(estimate.sample_std),
                          format_double(estimate.std_error)});
        } else {
            cells.insert(cells.end(),
                         {"", "", "", rule_name(run.effective_rule),
                          metric_name(config.metric), std::to_string(config.trials),
                          std::to_string(config.seed), run.config_hash, "false", "", "",
                          ""});
        }
        out += join_row(cells);
    }
    return out;
}

std::string build_sweep_table(const PreparedRun& run, const GroundTruth& truth) {
    const ExperimentConfig& config = run.config;
    std::string out = join_row({"alpha", "beta", "budget", "k", "trials", "seed",
                                "config_hash", "feasible", "is_baseline", "is_argmin",
                                "mean_loss", "sample_std", "std_error"});
    const std::string k_text = std::to_string(run.population->question_count());
    for (long long budget : config.budgets) {
        for (const Rational& alpha : config.alphas) {
            const SweepResult sweep = sweep_beta(
                alpha, config.sweep_betas, budget, run.effective_rule, config.metric,
                *run.population, truth, config.trials, config.seed, run.threads);
            out += join_row({to_string(alpha), "0", std::to_string(budget), k_text,
                             std::to_string(config.trials), std::to_string(config.seed),
                             run.config_hash, "true", "true", "false",
                             format_double(sweep.baseline.mean_loss),
                             format_double(sweep.baseline.sample_std),
                             format_double(sweep.baseline.std_error)});
            for (std::size_t i = 0; i < sweep.points.size(); ++i) {
                const SweepPoint& point = sweep.points[i];
                const bool is_argmin = sweep.argmin && *sweep.argmin == i;
                if (point.feasible) {
                    out += join_row({to_string(alpha), to_string(point.beta),
                                     std::to_string(budget), k_text,
                                     std::to_string(config.trials),
                                     std::to_string(config.seed), run.config_hash, "true",
                                     "false", bool_text(is_argmin),
                                     format_double(point.estimate.mean_loss),
                                     format_double(point.estimate.sample_std),
                                     format_double(point.estimate.std_error)});
                } else {
                    out += join_row({to_string(alpha), to_string(point.beta),
                                     std::to_string(budget), k_text,
                                     std::to_string(config.trials),
                                     std::to_string(config.seed), run.config_hash,
                                     "false", "false", "false", "", "", ""});
                }
            }
        }
    }
    return out;
}

std::string build_weight_by_rank_table(const PreparedRun& run, const GroundTruth& truth) {
    const ExperimentConfig& config = run.config;
    std::string out = join_row({"alpha", "beta", "budget", "k", "m", "n", "q", "rank",
                                "mean_weight", "std_error", "trials", "seed",
                                "config_hash"});
    for (const GridPoint& point : run.grid) {
        if (!point.feasible || point.plan.followers < 1) continue;
        const Policy policy = Policy::pcs(point.alpha, point.beta, point.budget,
                                          run.effective_rule, config.metric);
        const WeightByRankTable table = weight_by_rank(
            policy, *run.population, truth, config.trials, config.seed, run.threads);
        for (std::size_t rank = 0; rank < table.mean_weights.size(); ++rank) {
            out += join_row({to_string(point.alpha), to_string(point.beta),
                             std::to_string(point.budget),
                             std::to_string(run.population->question_count()),
                             std::to_string(table.leaders), std::to_string(table.followers),
                             std::to_string(point.plan.follower_questions),
                             std::to_string(rank + 1),
                             format_double(table.mean_weights[rank]),
                             format_double(table.std_errors[rank]),
                             std::to_string(config.trials), std::to_string(config.seed),
                             run.config_hash});
        }
    }
    return out;
}

std::string build_weighted_vs_unweighted_table(const PreparedRun& run,
                                               const GroundTruth& truth) {
    const ExperimentConfig& config = run.config;
    std::string out = join_row({"alpha", "beta", "budget", "k", "m", "n", "q",
                                "weighted_mean_loss", "weighted_std_error",
                                "unweighted_mean_loss", "unweighted_std_error",
                                "mean_difference", "difference_std_error", "trials",
                                "seed", "config_hash"});
    for (const GridPoint& point : run.grid) {
        if (!point.feasible || point.plan.followers < 1) continue;
        const Policy policy = Policy::pcs(point.alpha, point.beta, point.budget,
                                          run.effective_rule, config.metric);
        const PairedLossEstimate paired = weighted_vs_unweighted(
            policy, *run.population, truth, config.trials, config.seed, run.threads);
        out += join_row({to_string(point.alpha), to_string(point.beta),
                         std::to_string(point.budget),
                         std::to_string(run.population->question_count()),
                         std::to_string(point.plan.leaders),
                         std::to_string(point.plan.followers),
                         std::to_string(point.plan.follower_questions),
                         format_double(paired.weighted.mean_loss),
                         format_double(paired.weighted.std_error),
                         format_double(paired.unweighted.mean_loss),
                         format_double(paired.unweighted.std_error),
                         format_double(paired.mean_difference),
                         format_double(paired.difference_std_error),
                         std::to_string(config.trials), std::to_string(config.seed),
                         run.config_hash});
    }
    return out;
}

std::string build_histogram_table(const PreparedRun& run) {
    const ExperimentConfig& config = run.config;
    const auto* empirical = dynamic_cast<const EmpiricalPopulation*>(run.population.get());
    const ErrorHistogram histogram =
        error_histogram(*empirical, config.metric, config.histogram_bins);
    std::string out = join_row({"bin_index", "bin_lower", "bin_upper", "count", "workers",
                                "dropped", "error_mean", "error_stddev", "metric", "seed",
                                "config_hash"});
    for (std::size_t bin = 0; bin < histogram.counts.size(); ++bin) {
        const double lower = histogram.lower + histogram.bin_width * static_cast<double>(bin);
        const double upper = bin + 1 == histogram.counts.size()
                                 ? histogram.upper
                                 : lower + histogram.bin_width;
        out += join_row({std::to_string(bin), format_double(lower), format_double(upper),
                         std::to_string(histogram.counts[bin]),
                         std::to_string(histogram.workers),
                         std::to_string(empirical->dropped_count()),
                         format_double(histogram.mean), format_double(histogram.stddev),
                         metric_name(config.metric), std::to_string(config.seed),
                         run.config_hash});
    }
    return out;
}

std::string build_bound_check_table(const PreparedRun& run) {
    const ExperimentConfig& config = run.config;
    const BoundCheckGrid& grid = *config.bound_check;
    std::string out = join_row({"p_high", "p_low", "p_follower", "questions", "bound",
                                "exact", "mc_estimate", "mc_std_error", "mc_samples",
                                "dominance", "seed", "config_hash"});
    const RngStream master(config.seed);
    std::uint64_t row_index = 0;
    for (double p_high : grid.p_high) {
        for (double p_low : grid.p_low) {
            for (double p_follower : grid.p_follower) {
                for (long long questions : grid.questions) {
                    const CompetencePair pair{p_high, p_low, p_follower, questions};
                    const double bound = misdirection_bound(pair);
                    const double exact = misdirection_probability_exact(pair);
                    std::string mc_text, mc_se_text;
                    if (grid.mc_samples > 0) {
                        const McEstimate mc = misdirection_probability_mc(
                            pair, grid.mc_samples, master.substream(row_index).key());
                        mc_text = format_double(mc.estimate);
                        mc_se_text = format_double(mc.std_error());
                    }
                    out += join_row({format_double(p_high), format_double(p_low),
                                     format_double(p_follower), std::to_string(questions),
                                     format_double(bound), format_double(exact), mc_text,
                                     mc_se_text, std::to_string(grid.mc_samples),
                                     bool_text(exact <= bound), std::to_string(config.seed),
                                     run.config_hash});
                    ++row_index;
                }
            }
        }
    }
    return out;
}

std::string build_all_followers_table(const PreparedRun& run, const GroundTruth& truth) {
    const ExperimentConfig& config = run.config;
    std::string out = join_row({"alpha", "budget", "k", "workers", "questions_per_worker",
                                "mean_loss", "sample_std", "std_error", "mean_uncovered",
                                "cs_mean_loss", "cs_std_error", "trials", "seed",
                                "config_hash"});
    const auto k = static_cast<long long>(run.population->question_count());
    for (long long budget : config.budgets) {
        for (const Rational& alpha : config.alphas) {
            if (alpha <= 0) continue;
            try {
                plan_all_followers(alpha, budget, k);
            } catch (const InfeasiblePolicyError&) {
                continue;  // validated earlier; reachable only with skip_infeasible
            }
            const AllFollowersLossEstimate estimate = estimate_all_followers_loss(
                alpha, budget, run.effective_rule, *run.population, truth, config.trials,
                config.seed, run.threads);
            const LossEstimate baseline =
                estimate_loss(Policy::cs(budget, run.effective_rule, config.metric),
                              *run.population, truth, config.trials, config.seed,
                              run.threads);
            out += join_row({to_string(alpha), std::to_string(budget), std::to_string(k),
                             std::to_string(estimate.plan.workers),
                             std::to_string(estimate.plan.questions_per_worker),
                             format_double(estimate.mean_loss),
                             format_double(estimate.sample_std),
                             format_double(estimate.std_error),
                             format_double(estimate.mean_uncovered),
                             format_double(baseline.mean_loss),
                             format_double(baseline.std_error),
                             std::to_string(config.trials), std::to_string(config.seed),
                             run.config_hash});
        }
    }
    return out;
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();

    PreparedRun run = prepare(config, options);
    const GroundTruth& truth = run.population->ground_truth();

    ReportBundle bundle;
    bundle.config_hash = run.config_hash;
    bundle.seed = run.config.seed;
    bundle.trials = run.config.trials;
    bundle.output_dir = run.config.output_dir;

    if (wants(run.config, Analysis::Loss)) {
        bundle.tables["loss.csv"] = build_loss_table(run, truth);
    }
    if (wants(run.config, Analysis::Sweep)) {
        bundle.tables["sweep.csv"] = build_sweep_table(run, truth);
    }
    if (wants(run.config, Analysis::WeightByRank)) {
        bundle.tables["weight_by_rank.csv"] = build_weight_by_rank_table(run, truth);
    }
    if (wants(run.config, Analysis::Histogram)) {
        bundle.tables["histogram.csv"] = build_histogram_table(run);
    }
    if (wants(run.config, Analysis::BoundCheck)) {
        bundle.tables["bound_check.csv"] = build_bound_check_table(run);
    }
    if (wants(run.config, Analysis::WeightedVsUnweighted)) {
        bundle.tables["weighted_vs_unweighted.csv"] =
            build_weighted_vs_unweighted_table(run, truth);
    }
    if (wants(run.config, Analysis::AllFollowers)) {
        bundle.tables["all_followers.csv"] = build_all_followers_table(run, truth);
    }

    // All computation succeeded; only now touch the filesystem.
    std::filesystem::create_directories(bundle.output_dir);
    for (const auto& [name, content] : bundle.tables) {
        std::ofstream file(bundle.output_dir / name, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write report file: " + name);
        file << content;
        bundle.files_written.push_back(name);
    }

    const auto end = std::chrono::steady_clock::now();
    bundle.wall_time_seconds = std::chrono::duration<double>(end - start).count();

    json manifest;
    manifest["config"] = run.config.to_json();
    manifest["config_hash"] = bundle.config_hash;
    manifest["files"] = bundle.files_written;
    manifest["seed"] = bundle.seed;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["trials"] = bundle.trials;
    manifest["wall_time_seconds"] = bundle.wall_time_seconds;
    {
        std::ofstream file(bundle.output_dir / "manifest.json", std::ios::binary);
        if (!file) throw std::runtime_error("cannot write manifest.json");
        file << manifest.dump(2) << "\n";
    }
    bundle.files_written.push_back("manifest.json");
    return bundle;
}

}  // namespace pcs
