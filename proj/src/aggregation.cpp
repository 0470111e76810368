#include "pcs/aggregation.hpp"

#include <algorithm>
#include <numeric>

#include "pcs/errors.hpp"

namespace pcs {

bool rule_valid_for(AggregationRule rule, const AnswerDomain& domain) {
    switch (rule) {
        case AggregationRule::WeightedPlurality:
            return domain.is_categorical();
        case AggregationRule::WeightedMean:
        case AggregationRule::WeightedMedian:
        case AggregationRule::UnnormalizedWeightedMean:
            return domain.is_continuous();
    }
    return false;
}

std::string rule_name(AggregationRule rule) {
    switch (rule) {
        case AggregationRule::WeightedPlurality: return "weighted-plurality";
        case AggregationRule::WeightedMean: return "weighted-mean";
        case AggregationRule::WeightedMedian: return "weighted-median";
        case AggregationRule::UnnormalizedWeightedMean: return "unnormalized-weighted-mean";
    }
    return "unknown";
}

namespace {

void check_inputs(const WeightVector& weights, std::span<const AnswerVector> leaders,
                  const AnswerDomain& domain, AggregationRule rule) {
    if (leaders.empty()) throw InvalidInputError("aggregation: no leaders");
    if (weights.size() != leaders.size()) {
        throw InvalidInputError("aggregation: weight count does not match leader count");
    }
    const std::size_t k = leaders[0].size();
    for (const auto& leader : leaders) {
        if (leader.size() != k) {
            throw InvalidInputError("aggregation: leaders differ in length");
        }
    }
    if (!rule_valid_for(rule, domain)) {
        throw InvalidInputError(rule_name(rule) + " is not valid for this answer domain");
    }
}

}  // namespace

AnswerVector weighted_plurality(const WeightVector& weights,
                                std::span<const AnswerVector> leaders,
                                const AnswerDomain& domain,
                                const RngStream& tie_rng) {
    check_inputs(weights, leaders, domain, AggregationRule::WeightedPlurality);

    const std::size_t k = leaders[0].size();
    const std::size_t label_count = domain.label_count();
    std::vector<double> out(k, 0.0);
    std::vector<Rational> tally(label_count);
    std::vector<std::size_t> tied;

    for (std::size_t q = 0; q < k; ++q) {
        std::fill(tally.begin(), tally.end(), Rational(0));
        for (std::size_t i = 0; i < leaders.size(); ++i) {
            const auto label = static_cast<std::size_t>(leaders[i][q]);
            if (label >= label_count) {
                throw InvalidInputError("leader answer outside the label set");
            }
            tally[label] += weights.exact(i);
        }
        const Rational best = *std::max_element(tally.begin(), tally.end());
        tied.clear();
        for (std::size_t label = 0; label < label_count; ++label) {
            if (tally[label] == best) tied.push_back(label);
        }
        std::size_t winner = tied[0];
        if (tied.size() > 1) {
            RngStream question_rng = tie_rng.substream(q);
            winner = tied[question_rng.next_index(tied.size())];
        }
        out[q] = static_cast<double>(winner);
    }
    return AnswerVector(std::move(out));
}

AnswerVector weighted_mean(const WeightVector& weights,
                           std::span<const AnswerVector> leaders,
                           const AnswerDomain& domain) {
    check_inputs(weights, leaders, domain, AggregationRule::WeightedMean);

    const std::size_t k = leaders[0].size();
    const long double total = static_cast<long double>(to_double(weights.total()));
    if (total <= 0.0L) throw InvalidInputError("weighted_mean: total weight must be positive");

    std::vector<double> out(k, 0.0);
    for (std::size_t q = 0; q < k; ++q) {
        long double acc = 0.0L;
        double lo = leaders[0][q];
        double hi = leaders[0][q];
        for (std::size_t i = 0; i < leaders.size(); ++i) {
            const double x = leaders[i][q];
            acc += static_cast<long double>(weights.value(i)) * x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        // Clamp away the last-ulp rounding so the result stays inside the
        // leaders' value range, where the exact mean lives.
        out[q] = std::clamp(static_cast<double>(acc / total), lo, hi);
    }
    return AnswerVector(std::move(out));
}

AnswerVector weighted_mean_unnormalized(const WeightVector& weights,
                                        std::span<const AnswerVector> leaders,
                                        const AnswerDomain& domain) {
    check_inputs(weights, leaders, domain, AggregationRule::UnnormalizedWeightedMean);

    const std::size_t k = leaders[0].size();
    std::vector<double> out(k, 0.0);
    for (std::size_t q = 0; q < k; ++q) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < leaders.size(); ++i) {
            acc += static_cast<long double>(weights.value(i)) * leaders[i][q];
        }
        out[q] = static_cast<double>(acc);
    }
    return AnswerVector(std::move(out));
}

AnswerVector weighted_median(const WeightVector& weights,
                             std::span<const AnswerVector> leaders,
                             const AnswerDomain& domain) {
    check_inputs(weights, leaders, domain, AggregationRule::WeightedMedian);

    const std::size_t k = leaders[0].size();
    const Rational half_total = weights.total() / 2;
    std::vector<std::size_t> order(leaders.size());
    std::vector<double> out(k, 0.0);

    for (std::size_t q = 0; q < k; ++q) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return leaders[a][q] < leaders[b][q];
        });
        Rational cumulative(0);
        for (std::size_t i : order) {
            cumulative += weights.exact(i);
            if (cumulative >= half_total) {
                out[q] = leaders[i][q];
                break;
            }
        }
    }
    return AnswerVector(std::move(out));
}

AnswerVector aggregate(AggregationRule rule, const WeightVector& weights,
                       std::span<const AnswerVector> leaders,
                       const AnswerDomain& domain, const RngStream& tie_rng) {
    switch (rule) {
        case AggregationRule::WeightedPlurality:
            return weighted_plurality(weights, leaders, domain, tie_rng);
        case AggregationRule::WeightedMean:
            return weighted_mean(weights, leaders, domain);
        case AggregationRule::WeightedMedian:
            return weighted_median(weights, leaders, domain);
        case AggregationRule::UnnormalizedWeightedMean:
            return weighted_mean_unnormalized(weights, leaders, domain);
    }
    throw InvalidInputError("unknown aggregation rule");
}

}  // namespace pcs
