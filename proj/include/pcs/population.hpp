// Worker populations: empirical (dataset rows) and synthetic
// (competence-parameterized), plus the individual-error histogram.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pcs/answers.hpp"
#include "pcs/rng.hpp"

namespace pcs {

// A population is a distribution over complete answer vectors with a known
// ground truth. Immutable after construction; draws are pure given a stream.
class Population {
public:
    virtual ~Population() = default;
    virtual std::size_t question_count() const = 0;
    virtual const AnswerDomain& domain() const = 0;
    virtual const GroundTruth& ground_truth() const = 0;
    virtual AnswerVector draw(RngStream& rng) const = 0;
};

// Finite list of complete workers loaded from a dataset. Workers that had
// missing entries were dropped at load time; dropped_count records how many.
class EmpiricalPopulation final : public Population {
public:
    EmpiricalPopulation(std::string name, AnswerDomain domain,
                        std::vector<std::string> question_ids,
                        std::vector<std::string> worker_ids,
                        std::vector<AnswerVector> workers, GroundTruth truth,
                        std::size_t dropped_count = 0);

    std::size_t question_count() const override { return question_ids_.size(); }
    const AnswerDomain& domain() const override { return domain_; }
    const GroundTruth& ground_truth() const override { return truth_; }

    // Uniform draw with replacement from the worker list.
    AnswerVector draw(RngStream& rng) const override;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& question_ids() const { return question_ids_; }
    const std::vector<std::string>& worker_ids() const { return worker_ids_; }
    const std::vector<AnswerVector>& workers() const { return workers_; }
    std::size_t worker_count() const { return workers_.size(); }
    std::size_t dropped_count() const { return dropped_count_; }

private:
    std::string name_;
    AnswerDomain domain_;
    std::vector<std::string> question_ids_;
    std::vector<std::string> worker_ids_;
    std::vector<AnswerVector> workers_;
    GroundTruth truth_;
    std::size_t dropped_count_ = 0;
};

// Binary population where each worker carries a competence p drawn uniformly
// from [competence_low, competence_high] and answers every question correctly
// with probability p, independently across questions and workers. The ground
// truth is the all-correct vector. The population is a distribution, not a
// list: every draw is a fresh worker.
class SyntheticBinaryPopulation final : public Population {
public:
    SyntheticBinaryPopulation(double competence_low, double competence_high,
                              std::size_t question_count);

    std::size_t question_count() const override { return question_count_; }
    const AnswerDomain& domain() const override { return domain_; }
    const GroundTruth& ground_truth() const override { return truth_; }
    AnswerVector draw(RngStream& rng) const override;

    double competence_low() const { return low_; }
    double competence_high() const { return high_; }

private:
    double low_;
    double high_;
    std::size_t question_count_;
    AnswerDomain domain_;
    GroundTruth truth_;
};

AnswerVector draw_worker(const Population& population, RngStream& rng);

// Equal-width bins over [0, max individual error]; the top edge is inclusive.
// mean/stddev use the population convention (divide by worker count).
struct ErrorHistogram {
    std::vector<long long> counts;
    double lower = 0.0;
    double upper = 0.0;
    double bin_width = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t workers = 0;
};

ErrorHistogram error_histogram(const EmpiricalPopulation& population,
                               DistanceMetric metric, std::size_t bins);

// Two leaders with known competences and one follower answering a fixed
// number of questions; the setting analyzed by the misdirection bound.
struct CompetencePair {
    double p_high = 0.0;      // stronger leader's per-question competence
    double p_low = 0.0;       // weaker leader's per-question competence
    double p_follower = 0.0;  // follower's per-question competence
    long long questions = 0;  // number of questions the follower answers
};

}  // namespace pcs
