// Experiment configuration, orchestration, and report emission.
//
// A config is a single JSON document. Fractions may be given as decimals or
// as exact strings ("1/3"); they are parsed to exact rationals because the
// floor-based budget arithmetic is sensitive to rounding. Every run needs an
// explicit seed. Reports are CSV tables plus a JSON run manifest; re-running
// a config reproduces every table byte-identically under any thread count
// (the manifest differs only in its wall_time_seconds field).
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcs/dataset_io.hpp"
#include "pcs/evaluation.hpp"
#include "pcs/theory.hpp"

namespace pcs {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Analysis {
    Loss,
    Sweep,
    WeightByRank,
    Histogram,
    BoundCheck,
    WeightedVsUnweighted,
    AllFollowers,
};

std::string analysis_name(Analysis analysis);
Analysis analysis_from_name(const std::string& name);

std::string metric_name(DistanceMetric metric);
DistanceMetric metric_from_name(const std::string& name);
AggregationRule rule_from_name(const std::string& name);

struct SyntheticSpec {
    double competence_low = 0.0;
    double competence_high = 0.0;
    long long questions = 0;
};

struct BoundCheckGrid {
    std::vector<double> p_high;
    std::vector<double> p_low;
    std::vector<double> p_follower;
    std::vector<long long> questions;
    long long mc_samples = 10000;  // 0 disables the Monte Carlo column
};

struct ExperimentConfig {
    // Population: exactly one of dataset_path / synthetic.
    std::optional<std::string> dataset_path;
    std::optional<SyntheticSpec> synthetic;
    std::optional<DomainSpec> domain;  // dataset interpretation; binary if omitted

    DistanceMetric metric = DistanceMetric::Hamming;
    AggregationRule rule = AggregationRule::WeightedPlurality;
    bool unnormalized_mean = false;  // experiment variant of the weighted mean

    // Policy grid: the cross product alpha x beta x budget.
    std::vector<Rational> alphas;
    std::vector<Rational> betas;
    std::vector<long long> budgets;
    std::vector<Rational> sweep_betas;  // defaults to betas

    long long trials = 5000;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<Analysis> analyses;
    bool skip_infeasible = false;
    std::size_t histogram_bins = 20;
    std::optional<BoundCheckGrid> bound_check;

    // Directory dataset_path resolves against; set by load_file, not serialized.
    std::filesystem::path base_dir;

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig load_file(const std::filesystem::path& path);

    // Canonical echo: feeds the manifest and the config hash.
    nlohmann::json to_json() const;
};

// Runtime knobs that do not alter results and are not part of the config
// hash; seed/trials/output/analysis overrides rewrite the effective config.
struct RunOptions {
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<std::string> output_dir;
    std::optional<std::vector<Analysis>> analyses;
    std::optional<std::vector<Rational>> sweep_betas;
    std::optional<std::size_t> histogram_bins;
};

struct ReportBundle {
    std::string config_hash;
    std::uint64_t seed = 0;
    long long trials = 0;
    double wall_time_seconds = 0.0;
    std::map<std::string, std::string> tables;  // file name -> CSV bytes
    std::filesystem::path output_dir;
    std::vector<std::string> files_written;
};

// Validates everything first (fail fast: no files are created on validation
// errors), runs the requested analyses over the policy grid, writes the CSV
// tables and manifest.json, and returns the bundle.
ReportBundle run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace pcs
