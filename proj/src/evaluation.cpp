#include "pcs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pcs/errors.hpp"
#include "pcs/parallel.hpp"

namespace pcs {

namespace {

struct SampleStats {
    double mean = 0.0;
    double sample_std = 0.0;
    double std_error = 0.0;
};

SampleStats summarize(std::span<const double> values) {
    SampleStats stats;
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return stats;
    stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - stats.mean;
            ss += d * d;
        }
        stats.sample_std = std::sqrt(ss / (n - 1.0));
        stats.std_error = stats.sample_std / std::sqrt(n);
    }
    return stats;
}

void check_trials(long long trials) {
    if (trials < 1) throw InvalidInputError("trials must be positive");
}

LossEstimate make_estimate(std::span<const double> losses, const Policy& policy,
                           std::uint64_t seed) {
    const SampleStats stats = summarize(losses);
    LossEstimate estimate;
    estimate.mean_loss = stats.mean;
    estimate.sample_std = stats.sample_std;
    estimate.std_error = stats.std_error;
    estimate.trials = static_cast<long long>(losses.size());
    estimate.seed = seed;
    estimate.policy = policy;
    return estimate;
}

}  // namespace

LossEstimate estimate_loss(const Policy& policy, const Population& population,
                           const GroundTruth& truth, long long trials,
                           std::uint64_t seed, int threads) {
    check_trials(trials);
    plan(policy, static_cast<long long>(population.question_count()));  // fail fast

    const RngStream master(seed);
    std::vector<double> losses(static_cast<std::size_t>(trials), 0.0);
    parallel_for(trials, threads, [&](long long trial) {
        const AnswerVector aggregated =
            execute(policy, population, master.substream(static_cast<std::uint64_t>(trial)));
        losses[static_cast<std::size_t>(trial)] =
            distance(aggregated, truth.truth, policy.metric);
    });
    return make_estimate(losses, policy, seed);
}

SweepResult sweep_beta(const Rational& alpha, std::span<const Rational> betas,
                       long long budget, AggregationRule rule, DistanceMetric metric,
                       const Population& population, const GroundTruth& truth,
                       long long trials, std::uint64_t seed, int threads) {
    SweepResult result;
    result.baseline = estimate_loss(Policy::cs(budget, rule, metric), population, truth,
                                    trials, seed, threads);

    for (const Rational& beta : betas) {
        SweepPoint point;
        point.beta = beta;
        const Policy policy = Policy::pcs(alpha, beta, budget, rule, metric);
        try {
            point.estimate = estimate_loss(policy, population, truth, trials, seed, threads);
            point.feasible = true;
        } catch (const InfeasiblePolicyError& error) {
            point.feasible = false;
            point.infeasible_reason = error.what();
        }
        result.points.push_back(std::move(point));
    }

    for (std::size_t i = 0; i < result.points.size(); ++i) {
        if (!result.points[i].feasible) continue;
        if (!result.argmin ||
            result.points[i].estimate.mean_loss <
                result.points[*result.argmin].estimate.mean_loss) {
            result.argmin = i;
        }
    }
    return result;
}

WeightByRankTable weight_by_rank(const Policy& policy, const Population& population,
                                 const GroundTruth& truth, long long trials,
                                 std::uint64_t seed, int threads) {
    check_trials(trials);
    const PolicyPlan p = plan(policy, static_cast<long long>(population.question_count()));
    if (p.followers < 1) {
        throw InvalidInputError("weight_by_rank needs at least one follower");
    }

    const auto m = static_cast<std::size_t>(p.leaders);
    const RngStream master(seed);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(trials));

    parallel_for(trials, threads, [&](long long trial) {
        RngStream rng = master.substream(static_cast<std::uint64_t>(trial));
        const Instance instance = sample_instance(p, population, rng.substream(0));
        const WeightVector weights =
            compute_weights(instance.leaders, instance.followers, policy.metric);
        if (weights.total() != Rational(p.leaders + p.followers)) {
            throw std::logic_error("weight conservation violated");
        }

        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<double> errors(m);
        for (std::size_t i = 0; i < m; ++i) {
            errors[i] = individual_error(instance.leaders[i], truth, policy.metric);
        }
        // ties keep sampled order
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return errors[a] < errors[b]; });

        std::vector<double> row(m);
        for (std::size_t rank = 0; rank < m; ++rank) row[rank] = weights.value(order[rank]);
        rows[static_cast<std::size_t>(trial)] = std::move(row);
    });

    WeightByRankTable table;
    table.leaders = p.leaders;
    table.followers = p.followers;
    table.trials = trials;
    table.seed = seed;
    table.mean_weights.resize(m);
    table.std_errors.resize(m);
    std::vector<double> column(static_cast<std::size_t>(trials));
    for (std::size_t rank = 0; rank < m; ++rank) {
        for (std::size_t t = 0; t < rows.size(); ++t) column[t] = rows[t][rank];
        const SampleStats stats = summarize(column);
        table.mean_weights[rank] = stats.mean;
        table.std_errors[rank] = stats.std_error;
    }
    return table;
}

PairedLossEstimate weighted_vs_unweighted(const Policy& policy,
                                          const Population& population,
                                          const GroundTruth& truth, long long trials,
                                          std::uint64_t seed, int threads) {
    check_trials(trials);
    const PolicyPlan p = plan(policy, static_cast<long long>(population.question_count()));

    const RngStream master(seed);
    const auto n_trials = static_cast<std::size_t>(trials);
    std::vector<double> weighted_losses(n_trials, 0.0);
    std::vector<double> unweighted_losses(n_trials, 0.0);

    parallel_for(trials, threads, [&](long long trial) {
        RngStream rng = master.substream(static_cast<std::uint64_t>(trial));
        const Instance instance = sample_instance(p, population, rng.substream(0));
        const WeightVector weights =
            compute_weights(instance.leaders, instance.followers, policy.metric);
        const RngStream tie_rng = rng.substream(1);  // shared: matched randomness

        const AnswerVector with_followers = aggregate(
            policy.rule, weights, instance.leaders, population.domain(), tie_rng);
        const AnswerVector leaders_only =
            aggregate(policy.rule, WeightVector::unit(instance.leaders.size()),
                      instance.leaders, population.domain(), tie_rng);

        weighted_losses[static_cast<std::size_t>(trial)] =
            distance(with_followers, truth.truth, policy.metric);
        unweighted_losses[static_cast<std::size_t>(trial)] =
            distance(leaders_only, truth.truth, policy.metric);
    });

    PairedLossEstimate paired;
    paired.weighted = make_estimate(weighted_losses, policy, seed);
    paired.unweighted = make_estimate(unweighted_losses, policy, seed);

    std::vector<double> differences(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) {
        differences[i] = weighted_losses[i] - unweighted_losses[i];
    }
    const SampleStats diff_stats = summarize(differences);
    paired.mean_difference = diff_stats.mean;
    paired.difference_std_error = diff_stats.std_error;
    return paired;
}

AllFollowersLossEstimate estimate_all_followers_loss(
    const Rational& alpha, long long budget, AggregationRule rule,
    const Population& population, const GroundTruth& truth, long long trials,
    std::uint64_t seed, int threads) {
    check_trials(trials);
    const AllFollowersPlan p = plan_all_followers(
        alpha, budget, static_cast<long long>(population.question_count()));
    const DistanceMetric metric =
        population.domain().is_categorical() ? DistanceMetric::Hamming : DistanceMetric::L1;

    const RngStream master(seed);
    const auto n_trials = static_cast<std::size_t>(trials);
    std::vector<double> losses(n_trials, 0.0);
    std::vector<double> uncovered(n_trials, 0.0);

    parallel_for(trials, threads, [&](long long trial) {
        const AllFollowersOutcome outcome = execute_all_followers(
            p, rule, population, master.substream(static_cast<std::uint64_t>(trial)));
        losses[static_cast<std::size_t>(trial)] =
            distance(outcome.answer, truth.truth, metric);
        uncovered[static_cast<std::size_t>(trial)] =
            static_cast<double>(outcome.uncovered_questions);
    });

    const SampleStats stats = summarize(losses);
    AllFollowersLossEstimate estimate;
    estimate.mean_loss = stats.mean;
    estimate.sample_std = stats.sample_std;
    estimate.std_error = stats.std_error;
    estimate.mean_uncovered =
        std::accumulate(uncovered.begin(), uncovered.end(), 0.0) / static_cast<double>(n_trials);
    estimate.trials = trials;
    estimate.seed = seed;
    estimate.plan = p;
    return estimate;
}

}  // namespace pcs
