// Closed-form misdirection bound for a follower choosing between two leaders
// in a binary domain, plus exact and Monte Carlo evaluations of the true
// misdirection probability.
//
// Setting: leaders High and Low answer each question correctly with
// probabilities p_high > p_low > 0.5; a follower answers `questions` of them
// correctly with probability p_follower > 0.5. Misdirection is the event that
// the follower is at least as close to Low as to High (ties count).
#pragma once

#include <cstdint>
#include <vector>

#include "pcs/population.hpp"

namespace pcs {

// Per-question disagreement variable B in {-1, 0, +1}:
//   +1  High disagrees with the follower while Low agrees
//   -1  High agrees while Low disagrees
//    0  otherwise
// The misdirection event is sum(B_i) >= 0.
struct DisagreementDistribution {
    double p_plus = 0.0;
    double p_zero = 0.0;
    double p_minus = 0.0;

    // Equals (2 * p_follower - 1) * (p_low - p_high).
    double expectation() const { return p_plus - p_minus; }
};

DisagreementDistribution b_distribution(double p_high, double p_low, double p_follower);

// Exponential concentration bound on the misdirection probability:
//   exp(-questions * (p_high - p_low)^2 * (2 * p_follower - 1)^2 / 2).
// Requires p_high >= p_low; equal competences (or p_follower = 0.5) give 1.
double misdirection_bound(const CompetencePair& input);

// PMF of sum of `count` i.i.d. disagreement variables; index i holds
// P(sum = i - count), so the vector spans [-count, count].
std::vector<double> sum_b_pmf(const DisagreementDistribution& b, long long count);

// Exact P(sum(B_i) >= 0) by dynamic programming over the trinomial law.
// Supports questions <= 20; larger inputs throw UnsupportedSizeError.
double misdirection_probability_exact(const CompetencePair& input);

struct McEstimate {
    double estimate = 0.0;
    long long samples = 0;

    double std_error() const;
};

// Simulates fresh answer vectors for High, Low and the follower and counts
// how often d(High, follower) >= d(Low, follower).
McEstimate misdirection_probability_mc(const CompetencePair& input, long long samples,
                                       std::uint64_t seed);

}  // namespace pcs
