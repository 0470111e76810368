// Budget arithmetic for crowdsourcing policies, instance sampling, and
// end-to-end policy execution.
//
// A policy buys answers under a fixed budget B (one answer = one budget
// unit). A fraction beta of the budget goes to followers, each answering
// floor(alpha * k) questions; the rest buys leaders who answer everything:
//
//   q = floor(alpha * k)
//   m = floor((1 - beta) * B / k)      leaders
//   n = floor(beta * B / q)            followers (0 when beta = 0)
//
// beta = 0 (and alpha = 0) is plain crowdsourcing without followers.
#pragma once

#include <cstdint>
#include <vector>

#include "pcs/aggregation.hpp"
#include "pcs/answers.hpp"
#include "pcs/population.hpp"
#include "pcs/rational.hpp"
#include "pcs/rng.hpp"
#include "pcs/weighting.hpp"

namespace pcs {

struct Policy {
    Rational alpha{0};  // fraction of questions each follower answers, in [0, 1]
    Rational beta{0};   // fraction of the budget spent on followers, in [0, 1)
    long long budget = 0;
    AggregationRule rule = AggregationRule::WeightedPlurality;
    DistanceMetric metric = DistanceMetric::Hamming;

    static Policy cs(long long budget, AggregationRule rule, DistanceMetric metric) {
        return Policy{Rational(0), Rational(0), budget, rule, metric};
    }
    static Policy pcs(Rational alpha, Rational beta, long long budget,
                      AggregationRule rule, DistanceMetric metric) {
        return Policy{std::move(alpha), std::move(beta), budget, rule, metric};
    }

    bool is_cs() const { return beta == 0 && alpha == 0; }

    // Range checks only; budget feasibility is checked by plan().
    void validate() const;
};

struct PolicyPlan {
    long long leaders = 0;             // m
    long long followers = 0;           // n
    long long follower_questions = 0;  // q = floor(alpha * k)
    long long questions = 0;           // k
};

// Exact rational floor arithmetic. Throws InfeasiblePolicyError when the
// budget cannot buy one full leader, or when beta > 0 but followers would
// answer zero questions.
PolicyPlan plan(const Policy& policy, long long question_count);

struct Instance {
    std::vector<AnswerVector> leaders;
    std::vector<PartialAnswerVector> followers;
};

// Draws m complete workers, then n workers reduced to q valid entries chosen
// uniformly without replacement. All draws are with replacement from the
// population.
Instance sample_instance(const PolicyPlan& plan, const Population& population,
                         RngStream rng);

// plan -> sample_instance -> compute_weights -> aggregation rule.
// Sampling consumes rng.substream(0), tie-breaking rng.substream(1), so the
// result is a pure function of (policy, population, stream).
AnswerVector execute(const Policy& policy, const Population& population, RngStream rng);

// --- All-followers variant -------------------------------------------------
//
// Degenerate policy that spends the whole budget on partial vectors: every
// worker answers q = floor(alpha * k) questions and the rule is applied
// per question over the workers who answered it, with unit weights.

struct AllFollowersPlan {
    long long workers = 0;
    long long questions_per_worker = 0;  // q
    long long questions = 0;             // k
    long long budget = 0;
    Rational alpha{0};
};

AllFollowersPlan plan_all_followers(const Rational& alpha, long long budget,
                                    long long question_count);

struct AllFollowersOutcome {
    AnswerVector answer;
    // Questions no sampled worker answered; those were resolved by a uniform
    // random label (categorical) or the domain midpoint (continuous).
    long long uncovered_questions = 0;
};

AllFollowersOutcome execute_all_followers(const AllFollowersPlan& plan,
                                          AggregationRule rule,
                                          const Population& population,
                                          RngStream rng);

}  // namespace pcs
