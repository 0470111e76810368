#include <doctest.h>

#include <cmath>

#include "pcs/errors.hpp"
#include "pcs/population.hpp"
#include "test_support.hpp"

using namespace pcs;
using pcs::testing::av;

namespace {

EmpiricalPopulation tiny_population(std::vector<AnswerVector> workers,
                                    AnswerVector truth,
                                    AnswerDomain domain = AnswerDomain::binary()) {
    std::vector<std::string> worker_ids;
    for (std::size_t i = 0; i < workers.size(); ++i) {
        worker_ids.push_back("w" + std::to_string(i + 1));
    }
    std::vector<std::string> question_ids;
    for (std::size_t q = 0; q < truth.size(); ++q) {
        question_ids.push_back("q" + std::to_string(q + 1));
    }
    return EmpiricalPopulation("tiny", std::move(domain), question_ids, worker_ids,
                               std::move(workers), GroundTruth{std::move(truth)});
}

}  // namespace

TEST_CASE("empirical draws return only vectors present in the dataset") {
    const auto population =
        tiny_population({av({0, 0}), av({0, 1}), av({1, 1})}, av({1, 1}));
    RngStream rng(11);
    for (int i = 0; i < 200; ++i) {
        const AnswerVector worker = draw_worker(population, rng);
        const bool known = worker == av({0, 0}) || worker == av({0, 1}) ||
                           worker == av({1, 1});
        CHECK(known);
    }
}

TEST_CASE("empirical population validates its shape") {
    CHECK_THROWS_AS(tiny_population({}, av({1, 1})), InvalidInputError);
    CHECK_THROWS_AS(tiny_population({av({0})}, av({1, 1})), InvalidInputError);
    // out-of-domain entry
    CHECK_THROWS_AS(tiny_population({av({5, 0})}, av({1, 1})), InvalidInputError);
}

TEST_CASE("synthetic extremes produce all-correct and all-wrong workers") {
    RngStream rng(22);
    const SyntheticBinaryPopulation perfect(1.0, 1.0, 6);
    CHECK(perfect.draw(rng) == perfect.ground_truth().truth);

    const SyntheticBinaryPopulation hopeless(0.0, 0.0, 6);
    CHECK(hopeless.draw(rng) == av({0, 0, 0, 0, 0, 0}));

    CHECK_THROWS_AS(SyntheticBinaryPopulation(0.8, 0.2, 5), InvalidInputError);
    CHECK_THROWS_AS(SyntheticBinaryPopulation(-0.1, 0.5, 5), InvalidInputError);
}

TEST_CASE("fixed competence concentrates around its binomial mean") {
    const SyntheticBinaryPopulation population(0.8, 0.8, 1000);
    RngStream rng(33);
    const AnswerVector worker = population.draw(rng);
    double correct = 0;
    for (std::size_t q = 0; q < worker.size(); ++q) {
        if (worker[q] == 1.0) ++correct;
    }
    CHECK(correct / 1000.0 == doctest::Approx(0.8).epsilon(0.05));  // 0.8 +- 0.04
}

TEST_CASE("synthetic expected individual error matches k(1 - (v1+v2)/2)") {
    const double v1 = 0.3, v2 = 0.9;
    const std::size_t k = 30;
    const SyntheticBinaryPopulation population(v1, v2, k);
    const GroundTruth& truth = population.ground_truth();

    RngStream rng(44);
    const int workers = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < workers; ++i) {
        const double error =
            individual_error(population.draw(rng), truth, DistanceMetric::Hamming);
        sum += error;
        sum_sq += error * error;
    }
    const double mean = sum / workers;
    const double variance = sum_sq / workers - mean * mean;
    const double std_error = std::sqrt(variance / workers);
    const double expected = static_cast<double>(k) * (1.0 - (v1 + v2) / 2.0);
    CHECK(std::abs(mean - expected) <= 3.0 * std_error);
}

TEST_CASE("error histogram on hand-sized inputs") {
    SUBCASE("all workers equal to the truth") {
        const auto population = tiny_population({av({1, 1}), av({1, 1})}, av({1, 1}));
        const ErrorHistogram histogram =
            error_histogram(population, DistanceMetric::Hamming, 3);
        CHECK(histogram.counts == std::vector<long long>{2, 0, 0});
        CHECK(histogram.mean == 0.0);
        CHECK(histogram.stddev == 0.0);
        CHECK(histogram.upper == 0.0);
    }

    SUBCASE("two workers with errors 0 and 10 into two bins") {
        std::vector<AnswerVector> workers;
        workers.push_back(av({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}));  // error 0
        workers.push_back(av({0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));  // error 10
        const auto population =
            tiny_population(std::move(workers), av({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}));
        const ErrorHistogram histogram =
            error_histogram(population, DistanceMetric::Hamming, 2);
        CHECK(histogram.counts == std::vector<long long>{1, 1});
        CHECK(histogram.mean == 5.0);
        CHECK(histogram.stddev == 5.0);
        CHECK(histogram.upper == 10.0);
        CHECK(histogram.bin_width == 5.0);
    }

    SUBCASE("zero bins is rejected") {
        const auto population = tiny_population({av({1, 1})}, av({1, 1}));
        CHECK_THROWS_AS(error_histogram(population, DistanceMetric::Hamming, 0),
                        InvalidInputError);
    }
}
