// Weighted aggregation rules mapping weighted leader vectors to one vector.
#pragma once

#include <span>
#include <string>

#include "pcs/answers.hpp"
#include "pcs/rng.hpp"
#include "pcs/weighting.hpp"

namespace pcs {

// UnnormalizedWeightedMean skips the division by total weight; it exists as an
// experiment variant and is selected only through the config flag.
enum class AggregationRule {
    WeightedPlurality,
    WeightedMean,
    WeightedMedian,
    UnnormalizedWeightedMean,
};

bool rule_valid_for(AggregationRule rule, const AnswerDomain& domain);

std::string rule_name(AggregationRule rule);

// Per question, the label with maximum total weight; exact ties are resolved
// uniformly at random. Question j draws from tie_rng.substream(j), keeping
// results independent of question evaluation order.
AnswerVector weighted_plurality(const WeightVector& weights,
                                std::span<const AnswerVector> leaders,
                                const AnswerDomain& domain,
                                const RngStream& tie_rng);

// Per question, sum(w_i * x_i) / sum(w_i), clamped into the leaders' value
// range for that question (the mathematical mean always lies there).
AnswerVector weighted_mean(const WeightVector& weights,
                           std::span<const AnswerVector> leaders,
                           const AnswerDomain& domain);

// The raw sum(w_i * x_i) without normalization; not a mean.
AnswerVector weighted_mean_unnormalized(const WeightVector& weights,
                                        std::span<const AnswerVector> leaders,
                                        const AnswerDomain& domain);

// Per question, the smallest leader value v such that leaders with value <= v
// carry at least half the total weight (lower-median convention).
AnswerVector weighted_median(const WeightVector& weights,
                             std::span<const AnswerVector> leaders,
                             const AnswerDomain& domain);

AnswerVector aggregate(AggregationRule rule, const WeightVector& weights,
                       std::span<const AnswerVector> leaders,
                       const AnswerDomain& domain, const RngStream& tie_rng);

}  // namespace pcs
