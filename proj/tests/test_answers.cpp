#include <doctest.h>

#include "pcs/answers.hpp"
#include "pcs/errors.hpp"
#include "pcs/rng.hpp"
#include "test_support.hpp"

using namespace pcs;
using pcs::testing::av;
using pcs::testing::pv;

TEST_CASE("answer domains enforce their invariants") {
    CHECK_THROWS_AS(AnswerDomain::categorical({"a"}), InvalidInputError);
    CHECK_THROWS_AS(AnswerDomain::categorical({"a", "a"}), InvalidInputError);
    CHECK_THROWS_AS(AnswerDomain::continuous(0.0), InvalidInputError);
    CHECK_THROWS_AS(AnswerDomain::continuous(-5.0), InvalidInputError);

    const AnswerDomain binary = AnswerDomain::binary();
    CHECK(binary.is_binary());
    CHECK(binary.is_categorical());
    CHECK(binary.label_count() == 2);

    const AnswerDomain slider = AnswerDomain::continuous(1000.0);
    CHECK(slider.contains(0.0));
    CHECK(slider.contains(1000.0));
    CHECK_FALSE(slider.contains(1000.5));
    CHECK_FALSE(slider.contains(-1.0));

    CHECK(metric_valid_for(DistanceMetric::Hamming, binary));
    CHECK_FALSE(metric_valid_for(DistanceMetric::L1, binary));
    CHECK(metric_valid_for(DistanceMetric::L1, slider));
    CHECK_FALSE(metric_valid_for(DistanceMetric::Hamming, slider));
}

TEST_CASE("partial vectors partition valid and missing entries") {
    const PartialAnswerVector partial = pv("?1?1");
    CHECK(partial.size() == 4);
    CHECK(partial.valid_count() == 2);
    CHECK(partial.valid_indices() == std::vector<std::size_t>{1, 3});
    CHECK_FALSE(partial.is_valid(0));
    CHECK(partial.is_valid(1));

    const PartialAnswerVector complete = PartialAnswerVector::complete(av({1, 0, 1}));
    CHECK(complete.valid_count() == 3);

    const PartialAnswerVector masked =
        PartialAnswerVector::masked(av({5, 6, 7}), std::vector<std::size_t>{2});
    CHECK(masked.valid_count() == 1);
    CHECK(masked.entry(2) == 7.0);

    CHECK_THROWS_AS(PartialAnswerVector::masked(av({1, 0}), std::vector<std::size_t>{5}),
                    InvalidInputError);
    CHECK_THROWS_AS(PartialAnswerVector({1.0}, {1, 1}), InvalidInputError);
}

TEST_CASE("restricted distance over joint entries") {
    // follower (?,1,?,1) agrees with (0,1,0,1) on both joint entries
    CHECK(restricted_distance(av({0, 1, 0, 1}), pv("?1?1"), DistanceMetric::Hamming) == 0.0);
    // joint entries {1,2}: (0,0) vs (0,1) disagree once
    CHECK(restricted_distance(av({0, 0, 0, 0}), pv("?01?"), DistanceMetric::Hamming) == 1.0);
    // identical complete vectors are at distance zero under either metric
    CHECK(distance(av({1, 0, 1}), av({1, 0, 1}), DistanceMetric::Hamming) == 0.0);
    CHECK(distance(av({3.5, 2.0}), av({3.5, 2.0}), DistanceMetric::L1) == 0.0);
    // L1 sums absolute differences
    CHECK(distance(av({3.0, 7.0}), av({1.0, 10.0}), DistanceMetric::L1) == 5.0);

    CHECK_THROWS_AS(distance(av({1, 0}), av({1, 0, 1}), DistanceMetric::Hamming),
                    InvalidInputError);
    CHECK_THROWS_AS(restricted_distance(av({1, 0}), pv("?11"), DistanceMetric::Hamming),
                    InvalidInputError);
}

TEST_CASE("empty joint index set yields distance zero") {
    const PartialAnswerVector left = pv("1??");
    const PartialAnswerVector right = pv("?01");
    CHECK(restricted_distance(left, right, DistanceMetric::Hamming) == 0.0);
}

TEST_CASE("individual error is distance to the ground truth") {
    const GroundTruth truth{av({1, 1, 1, 1})};
    CHECK(individual_error(av({1, 1, 1, 1}), truth, DistanceMetric::Hamming) == 0.0);
    CHECK(individual_error(av({0, 1, 1, 1}), truth, DistanceMetric::Hamming) == 1.0);

    const GroundTruth continuous_truth{av({150, 180})};
    CHECK(individual_error(av({100, 200}), continuous_truth, DistanceMetric::L1) == 70.0);
    CHECK_THROWS_AS(individual_error(av({1, 2, 3}), continuous_truth, DistanceMetric::L1),
                    InvalidInputError);
}

namespace {

AnswerVector random_binary_vector(RngStream& rng, std::size_t k) {
    std::vector<double> entries(k);
    for (auto& e : entries) e = static_cast<double>(rng.next_index(2));
    return AnswerVector(std::move(entries));
}

PartialAnswerVector random_partial(RngStream& rng, const AnswerVector& full) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (rng.next_bernoulli(0.6)) keep.push_back(i);
    }
    return PartialAnswerVector::masked(full, keep);
}

}  // namespace

TEST_CASE("restricted distance is symmetric and non-negative") {
    RngStream rng(7101);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 1 + rng.next_index(12);
        const auto a = random_partial(rng, random_binary_vector(rng, k));
        const auto b = random_partial(rng, random_binary_vector(rng, k));
        const double ab = restricted_distance(a, b, DistanceMetric::Hamming);
        const double ba = restricted_distance(b, a, DistanceMetric::Hamming);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("restricted distance over complete vectors equals the plain distance") {
    RngStream rng(7102);
    for (int round = 0; round < 100; ++round) {
        const std::size_t k = 1 + rng.next_index(12);
        const AnswerVector a = random_binary_vector(rng, k);
        const AnswerVector b = random_binary_vector(rng, k);
        CHECK(restricted_distance(PartialAnswerVector::complete(a),
                                  PartialAnswerVector::complete(b),
                                  DistanceMetric::Hamming) ==
              distance(a, b, DistanceMetric::Hamming));
    }
}

TEST_CASE("removing valid entries never increases the Hamming restricted distance") {
    RngStream rng(7103);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 1 + rng.next_index(12);
        const AnswerVector a_full = random_binary_vector(rng, k);
        const AnswerVector b_full = random_binary_vector(rng, k);
        const PartialAnswerVector a = random_partial(rng, a_full);
        const PartialAnswerVector b = random_partial(rng, b_full);

        // sub-mask of b
        std::vector<std::size_t> smaller;
        for (std::size_t i : b.valid_indices()) {
            if (rng.next_bernoulli(0.5)) smaller.push_back(i);
        }
        const PartialAnswerVector b_smaller = PartialAnswerVector::masked(b_full, smaller);
        CHECK(restricted_distance(a, b_smaller, DistanceMetric::Hamming) <=
              restricted_distance(a, b, DistanceMetric::Hamming));
    }
}

TEST_CASE("triangle inequality holds for complete vectors under both metrics") {
    RngStream rng(7104);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 1 + rng.next_index(10);
        const AnswerVector a = random_binary_vector(rng, k);
        const AnswerVector b = random_binary_vector(rng, k);
        const AnswerVector c = random_binary_vector(rng, k);
        CHECK(distance(a, c, DistanceMetric::Hamming) <=
              distance(a, b, DistanceMetric::Hamming) +
                  distance(b, c, DistanceMetric::Hamming));
    }
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 1 + rng.next_index(10);
        std::vector<double> xs(k), ys(k), zs(k);
        for (std::size_t i = 0; i < k; ++i) {
            xs[i] = rng.next_real(0, 100);
            ys[i] = rng.next_real(0, 100);
            zs[i] = rng.next_real(0, 100);
        }
        const AnswerVector a{std::move(xs)}, b{std::move(ys)}, c{std::move(zs)};
        const double direct = distance(a, c, DistanceMetric::L1);
        const double through = distance(a, b, DistanceMetric::L1) +
                               distance(b, c, DistanceMetric::L1);
        CHECK(direct <= through + 1e-9);
    }
}
