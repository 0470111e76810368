// Monte Carlo estimation of expected loss, beta sweeps, weight-by-rank
// analysis, and paired weighted-vs-unweighted comparisons.
//
// Trial i always runs on substream i of the master seed, and trial results
// are reduced in index order, so every estimate is a pure function of its
// arguments regardless of thread count.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcs/policy.hpp"

namespace pcs {

struct LossEstimate {
    double mean_loss = 0.0;
    double sample_std = 0.0;
    double std_error = 0.0;  // sample_std / sqrt(trials)
    long long trials = 0;
    std::uint64_t seed = 0;
    Policy policy;
};

LossEstimate estimate_loss(const Policy& policy, const Population& population,
                           const GroundTruth& truth, long long trials,
                           std::uint64_t seed, int threads = 1);

struct SweepPoint {
    Rational beta{0};
    bool feasible = false;
    LossEstimate estimate;          // valid only when feasible
    std::string infeasible_reason;  // set only when infeasible
};

struct SweepResult {
    std::vector<SweepPoint> points;
    LossEstimate baseline;                  // plain crowdsourcing at the same budget
    std::optional<std::size_t> argmin;      // index of the feasible minimum, if any
};

// Every grid point and the baseline share the same seed, so the beta = 0
// point reproduces the baseline exactly.
SweepResult sweep_beta(const Rational& alpha, std::span<const Rational> betas,
                       long long budget, AggregationRule rule, DistanceMetric metric,
                       const Population& population, const GroundTruth& truth,
                       long long trials, std::uint64_t seed, int threads = 1);

// Leaders ranked per trial by individual error, ascending (rank 1 = lowest
// error, ties by sampled order); weights averaged per rank across trials.
struct WeightByRankTable {
    std::vector<double> mean_weights;  // index r-1 holds rank r
    std::vector<double> std_errors;
    long long leaders = 0;
    long long followers = 0;
    long long trials = 0;
    std::uint64_t seed = 0;
};

WeightByRankTable weight_by_rank(const Policy& policy, const Population& population,
                                 const GroundTruth& truth, long long trials,
                                 std::uint64_t seed, int threads = 1);

// Per trial, the same sampled leaders aggregated twice: with follower weights
// and with unit weights, under the same tie-break stream.
struct PairedLossEstimate {
    LossEstimate weighted;
    LossEstimate unweighted;
    double mean_difference = 0.0;  // weighted - unweighted
    double difference_std_error = 0.0;
};

PairedLossEstimate weighted_vs_unweighted(const Policy& policy,
                                          const Population& population,
                                          const GroundTruth& truth, long long trials,
                                          std::uint64_t seed, int threads = 1);

struct AllFollowersLossEstimate {
    double mean_loss = 0.0;
    double sample_std = 0.0;
    double std_error = 0.0;
    double mean_uncovered = 0.0;  // average questions per trial nobody answered
    long long trials = 0;
    std::uint64_t seed = 0;
    AllFollowersPlan plan;
};

AllFollowersLossEstimate estimate_all_followers_loss(
    const Rational& alpha, long long budget, AggregationRule rule,
    const Population& population, const GroundTruth& truth, long long trials,
    std::uint64_t seed, int threads = 1);

}  // namespace pcs
