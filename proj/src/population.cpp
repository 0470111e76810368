#include "pcs/population.hpp"

#include <algorithm>
#include <cmath>

#include "pcs/errors.hpp"

namespace pcs {

EmpiricalPopulation::EmpiricalPopulation(std::string name, AnswerDomain domain,
                                         std::vector<std::string> question_ids,
                                         std::vector<std::string> worker_ids,
                                         std::vector<AnswerVector> workers,
                                         GroundTruth truth, std::size_t dropped_count)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      question_ids_(std::move(question_ids)),
      worker_ids_(std::move(worker_ids)),
      workers_(std::move(workers)),
      truth_(std::move(truth)),
      dropped_count_(dropped_count) {
    if (workers_.empty()) throw InvalidInputError("empirical population has no workers");
    if (worker_ids_.size() != workers_.size()) {
        throw InvalidInputError("worker id count does not match worker count");
    }
    const std::size_t k = question_ids_.size();
    if (truth_.truth.size() != k) {
        throw InvalidInputError("ground truth length does not match question count");
    }
    truth_.truth.validate_in(domain_);
    for (const auto& worker : workers_) {
        if (worker.size() != k) {
            throw InvalidInputError("worker length does not match question count");
        }
        worker.validate_in(domain_);
    }
}

AnswerVector EmpiricalPopulation::draw(RngStream& rng) const {
    return workers_[rng.next_index(workers_.size())];
}

SyntheticBinaryPopulation::SyntheticBinaryPopulation(double competence_low,
                                                     double competence_high,
                                                     std::size_t question_count)
    : low_(competence_low),
      high_(competence_high),
      question_count_(question_count),
      domain_(AnswerDomain::binary()),
      truth_{AnswerVector(std::vector<double>(question_count, 1.0))} {
    if (!(0.0 <= low_ && low_ <= high_ && high_ <= 1.0)) {
        throw InvalidInputError("competence interval must satisfy 0 <= low <= high <= 1");
    }
    if (question_count_ == 0) throw InvalidInputError("question count must be positive");
}

AnswerVector SyntheticBinaryPopulation::draw(RngStream& rng) const {
    const double competence = rng.next_real(low_, high_);
    std::vector<double> entries(question_count_);
    for (std::size_t q = 0; q < question_count_; ++q) {
        const bool correct = rng.next_bernoulli(competence);
        entries[q] = correct ? truth_.truth[q] : 1.0 - truth_.truth[q];
    }
    return AnswerVector(std::move(entries));
}

AnswerVector draw_worker(const Population& population, RngStream& rng) {
    return population.draw(rng);
}

ErrorHistogram error_histogram(const EmpiricalPopulation& population,
                               DistanceMetric metric, std::size_t bins) {
    if (bins == 0) throw InvalidInputError("error_histogram: bins must be positive");

    const auto& truth = population.ground_truth();
    std::vector<double> errors;
    errors.reserve(population.worker_count());
    for (const auto& worker : population.workers()) {
        errors.push_back(individual_error(worker, truth, metric));
    }

    ErrorHistogram histogram;
    histogram.workers = errors.size();
    histogram.upper = *std::max_element(errors.begin(), errors.end());
    histogram.counts.assign(bins, 0);
    histogram.bin_width = (histogram.upper - histogram.lower) / static_cast<double>(bins);

    double sum = 0.0, sum_sq = 0.0;
    for (double e : errors) {
        sum += e;
        sum_sq += e * e;
        std::size_t bin = 0;
        if (histogram.bin_width > 0.0) {
            bin = static_cast<std::size_t>((e - histogram.lower) / histogram.bin_width);
            bin = std::min(bin, bins - 1);  // top edge belongs to the last bin
        }
        ++histogram.counts[bin];
    }
    const double n = static_cast<double>(errors.size());
    histogram.mean = sum / n;
    const double variance = std::max(0.0, sum_sq / n - histogram.mean * histogram.mean);
    histogram.stddev = std::sqrt(variance);
    return histogram;
}

}  // namespace pcs
