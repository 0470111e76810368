// Nearest-leader computation and follower-to-leader weight distribution.
//
// Every leader starts with her own unit vote. Each follower finds the set of
// leaders at minimum restricted distance and splits one unit of voting weight
// evenly across that set, so total weight is conserved: sum(w) = m + n. The
// weights are kept as exact rationals, which makes conservation exact and the
// worked examples bit-stable.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcs/answers.hpp"
#include "pcs/rational.hpp"

namespace pcs {

struct NearestSet {
    std::vector<std::size_t> leader_indices;  // all argmin indices, ascending
    double min_distance = 0.0;
};

// Exact argmin set of restricted_distance(leader, follower) over the leaders.
// Throws InvalidInputError on an empty leader set or length mismatch.
NearestSet nearest_leaders(std::span<const AnswerVector> leaders,
                           const PartialAnswerVector& follower,
                           DistanceMetric metric);

class WeightVector {
public:
    explicit WeightVector(std::vector<Rational> weights);

    static WeightVector unit(std::size_t count) {
        return WeightVector(std::vector<Rational>(count, Rational(1)));
    }

    std::size_t size() const { return weights_.size(); }
    const Rational& exact(std::size_t i) const { return weights_[i]; }
    double value(std::size_t i) const { return to_double(weights_[i]); }
    std::vector<double> values() const;
    Rational total() const;

    WeightVector scaled(const Rational& factor) const;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<Rational> weights_;
};

// w_j = 1 + sum over followers of 1{j in NN(follower)} / |NN(follower)|.
// With no followers every weight is exactly 1.
WeightVector compute_weights(std::span<const AnswerVector> leaders,
                             std::span<const PartialAnswerVector> followers,
                             DistanceMetric metric);

}  // namespace pcs
