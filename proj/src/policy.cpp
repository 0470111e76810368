#include "pcs/policy.hpp"

#include <algorithm>
#include <numeric>

#include "pcs/errors.hpp"

namespace pcs {

void Policy::validate() const {
    if (alpha < 0 || alpha > 1) throw InvalidInputError("alpha must lie in [0, 1]");
    if (beta < 0 || beta >= 1) throw InvalidInputError("beta must lie in [0, 1)");
    if (budget < 1) throw InvalidInputError("budget must be positive");
}

PolicyPlan plan(const Policy& policy, long long question_count) {
    policy.validate();
    if (question_count < 1) throw InvalidInputError("question count must be positive");
    if (policy.budget < question_count) {
        throw InfeasiblePolicyError("budget " + std::to_string(policy.budget) +
                                    " cannot afford one leader at k = " +
                                    std::to_string(question_count));
    }

    PolicyPlan out;
    out.questions = question_count;
    out.follower_questions = floor_rational(policy.alpha * question_count);
    if (policy.beta > 0 && out.follower_questions < 1) {
        throw InfeasiblePolicyError("beta > 0 but followers would answer zero questions");
    }
    out.leaders = floor_rational((Rational(1) - policy.beta) * policy.budget / question_count);
    if (out.leaders < 1) {
        throw InfeasiblePolicyError("leader share of the budget cannot afford one leader");
    }
    out.followers = policy.beta > 0
                        ? floor_rational(policy.beta * policy.budget / out.follower_questions)
                        : 0;
    return out;
}

namespace {

// q indices drawn uniformly without replacement via partial Fisher-Yates.
PartialAnswerVector mask_to_subset(const AnswerVector& full, long long subset_size,
                                   std::vector<std::size_t>& scratch, RngStream& rng) {
    const std::size_t k = full.size();
    scratch.resize(k);
    std::iota(scratch.begin(), scratch.end(), std::size_t{0});
    const auto q = static_cast<std::size_t>(subset_size);
    for (std::size_t i = 0; i < q; ++i) {
        std::swap(scratch[i], scratch[i + rng.next_index(k - i)]);
    }
    return PartialAnswerVector::masked(full, std::span(scratch.data(), q));
}

}  // namespace

Instance sample_instance(const PolicyPlan& plan, const Population& population,
                         RngStream rng) {
    if (static_cast<long long>(population.question_count()) != plan.questions) {
        throw InvalidInputError("population question count does not match the plan");
    }
    if (plan.follower_questions > plan.questions) {
        throw InvalidInputError("followers cannot answer more questions than exist");
    }

    Instance instance;
    instance.leaders.reserve(static_cast<std::size_t>(plan.leaders));
    for (long long i = 0; i < plan.leaders; ++i) {
        instance.leaders.push_back(population.draw(rng));
    }

    instance.followers.reserve(static_cast<std::size_t>(plan.followers));
    std::vector<std::size_t> scratch;
    for (long long i = 0; i < plan.followers; ++i) {
        const AnswerVector full = population.draw(rng);
        instance.followers.push_back(
            mask_to_subset(full, plan.follower_questions, scratch, rng));
    }
    return instance;
}

AnswerVector execute(const Policy& policy, const Population& population, RngStream rng) {
    if (!rule_valid_for(policy.rule, population.domain())) {
        throw InvalidInputError("aggregation rule is not valid for the population domain");
    }
    if (!metric_valid_for(policy.metric, population.domain())) {
        throw InvalidInputError("distance metric is not valid for the population domain");
    }
    const PolicyPlan p = plan(policy, static_cast<long long>(population.question_count()));
    const Instance instance = sample_instance(p, population, rng.substream(0));
    const WeightVector weights =
        compute_weights(instance.leaders, instance.followers, policy.metric);
    return aggregate(policy.rule, weights, instance.leaders, population.domain(),
                     rng.substream(1));
}

AllFollowersPlan plan_all_followers(const Rational& alpha, long long budget,
                                    long long question_count) {
    if (alpha <= 0 || alpha > 1) throw InvalidInputError("alpha must lie in (0, 1]");
    if (question_count < 1) throw InvalidInputError("question count must be positive");
    if (budget < 1) throw InvalidInputError("budget must be positive");

    AllFollowersPlan out;
    out.alpha = alpha;
    out.budget = budget;
    out.questions = question_count;
    out.questions_per_worker = floor_rational(alpha * question_count);
    if (out.questions_per_worker < 1) {
        throw InfeasiblePolicyError("followers would answer zero questions");
    }
    out.workers = budget / out.questions_per_worker;
    if (out.workers < 1) {
        throw InfeasiblePolicyError("budget cannot afford one partial worker");
    }
    return out;
}

AllFollowersOutcome execute_all_followers(const AllFollowersPlan& plan,
                                          AggregationRule rule,
                                          const Population& population,
                                          RngStream rng) {
    const auto& domain = population.domain();
    if (!rule_valid_for(rule, domain)) {
        throw InvalidInputError("aggregation rule is not valid for the population domain");
    }
    if (static_cast<long long>(population.question_count()) != plan.questions) {
        throw InvalidInputError("population question count does not match the plan");
    }

    RngStream sample_rng = rng.substream(0);
    const RngStream resolve_rng = rng.substream(1);

    std::vector<PartialAnswerVector> workers;
    workers.reserve(static_cast<std::size_t>(plan.workers));
    std::vector<std::size_t> scratch;
    for (long long i = 0; i < plan.workers; ++i) {
        const AnswerVector full = population.draw(sample_rng);
        workers.push_back(
            mask_to_subset(full, plan.questions_per_worker, scratch, sample_rng));
    }

    const auto k = static_cast<std::size_t>(plan.questions);
    std::vector<double> out(k, 0.0);
    long long uncovered = 0;
    std::vector<double> answers;

    for (std::size_t q = 0; q < k; ++q) {
        answers.clear();
        for (const auto& worker : workers) {
            if (worker.is_valid(q)) answers.push_back(worker.entry(q));
        }
        if (answers.empty()) ++uncovered;

        if (domain.is_categorical()) {
            // Unit-weight tallies; zero answers leaves every label tied, so the
            // uniform tie-break doubles as the uncovered-question resolution.
            std::vector<long long> tally(domain.label_count(), 0);
            for (double a : answers) ++tally[static_cast<std::size_t>(a)];
            const long long best = *std::max_element(tally.begin(), tally.end());
            std::vector<std::size_t> tied;
            for (std::size_t label = 0; label < tally.size(); ++label) {
                if (tally[label] == best) tied.push_back(label);
            }
            std::size_t winner = tied[0];
            if (tied.size() > 1) {
                RngStream question_rng = resolve_rng.substream(q);
                winner = tied[question_rng.next_index(tied.size())];
            }
            out[q] = static_cast<double>(winner);
        } else if (answers.empty()) {
            out[q] = domain.upper_bound() / 2.0;
        } else if (rule == AggregationRule::WeightedMean) {
            long double acc = 0.0L;
            for (double a : answers) acc += a;
            out[q] = static_cast<double>(acc / static_cast<long double>(answers.size()));
        } else if (rule == AggregationRule::UnnormalizedWeightedMean) {
            long double acc = 0.0L;
            for (double a : answers) acc += a;
            out[q] = static_cast<double>(acc);
        } else {  // WeightedMedian, unit weights => lower median
            std::sort(answers.begin(), answers.end());
            out[q] = answers[(answers.size() - 1) / 2];
        }
    }
    return AllFollowersOutcome{AnswerVector(std::move(out)), uncovered};
}

}  // namespace pcs
