#include "pcs/weighting.hpp"

#include <numeric>

#include "pcs/errors.hpp"

namespace pcs {

NearestSet nearest_leaders(std::span<const AnswerVector> leaders,
                           const PartialAnswerVector& follower,
                           DistanceMetric metric) {
    if (leaders.empty()) throw InvalidInputError("nearest_leaders: no leaders");

    NearestSet nearest;
    nearest.min_distance = restricted_distance(leaders[0], follower, metric);
    nearest.leader_indices.push_back(0);
    for (std::size_t j = 1; j < leaders.size(); ++j) {
        const double d = restricted_distance(leaders[j], follower, metric);
        if (d < nearest.min_distance) {
            nearest.min_distance = d;
            nearest.leader_indices.assign(1, j);
        } else if (d == nearest.min_distance) {
            nearest.leader_indices.push_back(j);
        }
    }
    return nearest;
}

WeightVector::WeightVector(std::vector<Rational> weights) : weights_(std::move(weights)) {
    for (const auto& w : weights_) {
        if (w < 0) throw InvalidInputError("weights must be non-negative");
    }
}

std::vector<double> WeightVector::values() const {
    std::vector<double> out;
    out.reserve(weights_.size());
    for (const auto& w : weights_) out.push_back(to_double(w));
    return out;
}

Rational WeightVector::total() const {
    return std::accumulate(weights_.begin(), weights_.end(), Rational(0));
}

WeightVector WeightVector::scaled(const Rational& factor) const {
    if (factor <= 0) throw InvalidInputError("scale factor must be positive");
    std::vector<Rational> scaled(weights_);
    for (auto& w : scaled) w *= factor;
    return WeightVector(std::move(scaled));
}

WeightVector compute_weights(std::span<const AnswerVector> leaders,
                             std::span<const PartialAnswerVector> followers,
                             DistanceMetric metric) {
    if (leaders.empty()) throw InvalidInputError("compute_weights: no leaders");

    std::vector<Rational> weights(leaders.size(), Rational(1));
    for (const auto& follower : followers) {
        const NearestSet nearest = nearest_leaders(leaders, follower, metric);
        const Rational share(1, static_cast<long long>(nearest.leader_indices.size()));
        for (std::size_t j : nearest.leader_indices) weights[j] += share;
    }
    return WeightVector(std::move(weights));
}

}  // namespace pcs
