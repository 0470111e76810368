#include "pcs/theory.hpp"

#include <cmath>

#include "pcs/answers.hpp"
#include "pcs/errors.hpp"
#include "pcs/rng.hpp"

namespace pcs {

namespace {

void check_probability(double p, const char* name) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidInputError(std::string(name) + " must lie in (0, 1]");
    }
}

void check_pair(const CompetencePair& input) {
    check_probability(input.p_high, "p_high");
    check_probability(input.p_low, "p_low");
    check_probability(input.p_follower, "p_follower");
    if (input.p_high < input.p_low) {
        throw InvalidInputError("competence ordering violated: p_high < p_low");
    }
    if (input.questions < 1) {
        throw InvalidInputError("questions must be positive");
    }
}

}  // namespace

DisagreementDistribution b_distribution(double p_high, double p_low, double p_follower) {
    check_probability(p_high, "p_high");
    check_probability(p_low, "p_low");
    check_probability(p_follower, "p_follower");

    DisagreementDistribution b;
    b.p_plus = p_follower * (1.0 - p_high) * p_low + (1.0 - p_follower) * p_high * (1.0 - p_low);
    b.p_minus = p_follower * p_high * (1.0 - p_low) + (1.0 - p_follower) * (1.0 - p_high) * p_low;
    b.p_zero = 1.0 - b.p_plus - b.p_minus;
    return b;
}

double misdirection_bound(const CompetencePair& input) {
    check_pair(input);
    const double gap = input.p_high - input.p_low;
    const double signal = 2.0 * input.p_follower - 1.0;
    const double exponent =
        -static_cast<double>(input.questions) * gap * gap * signal * signal / 2.0;
    return std::exp(exponent);
}

std::vector<double> sum_b_pmf(const DisagreementDistribution& b, long long count) {
    if (count < 1) throw InvalidInputError("count must be positive");

    // pmf[i] = P(sum = i - steps_so_far); convolve one step at a time.
    std::vector<double> pmf{1.0};
    for (long long step = 0; step < count; ++step) {
        std::vector<double> next(pmf.size() + 2, 0.0);
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            next[i] += pmf[i] * b.p_minus;
            next[i + 1] += pmf[i] * b.p_zero;
            next[i + 2] += pmf[i] * b.p_plus;
        }
        pmf = std::move(next);
    }
    return pmf;
}

double misdirection_probability_exact(const CompetencePair& input) {
    check_pair(input);
    constexpr long long kMaxQuestions = 20;
    if (input.questions > kMaxQuestions) {
        throw UnsupportedSizeError("exact misdirection probability supports at most " +
                                   std::to_string(kMaxQuestions) + " questions");
    }

    const DisagreementDistribution b =
        b_distribution(input.p_high, input.p_low, input.p_follower);
    const std::vector<double> pmf = sum_b_pmf(b, input.questions);

    // sum >= 0 corresponds to indices >= questions.
    double probability = 0.0;
    for (std::size_t i = static_cast<std::size_t>(input.questions); i < pmf.size(); ++i) {
        probability += pmf[i];
    }
    return probability;
}

double McEstimate::std_error() const {
    if (samples < 1) return 0.0;
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(samples));
}

McEstimate misdirection_probability_mc(const CompetencePair& input, long long samples,
                                       std::uint64_t seed) {
    check_pair(input);
    if (samples < 1) throw InvalidInputError("samples must be positive");

    const auto k = static_cast<std::size_t>(input.questions);
    RngStream master(seed);
    long long misdirected = 0;

    std::vector<double> high(k), low(k), follower(k);
    for (long long s = 0; s < samples; ++s) {
        RngStream rng = master.substream(static_cast<std::uint64_t>(s));
        for (std::size_t q = 0; q < k; ++q) high[q] = rng.next_bernoulli(input.p_high) ? 1.0 : 0.0;
        for (std::size_t q = 0; q < k; ++q) low[q] = rng.next_bernoulli(input.p_low) ? 1.0 : 0.0;
        for (std::size_t q = 0; q < k; ++q) follower[q] = rng.next_bernoulli(input.p_follower) ? 1.0 : 0.0;

        const AnswerVector high_vec{std::vector<double>(high)};
        const AnswerVector low_vec{std::vector<double>(low)};
        const AnswerVector follower_vec{std::vector<double>(follower)};
        const double d_high = distance(high_vec, follower_vec, DistanceMetric::Hamming);
        const double d_low = distance(low_vec, follower_vec, DistanceMetric::Hamming);
        if (d_high >= d_low) ++misdirected;
    }
    return McEstimate{static_cast<double>(misdirected) / static_cast<double>(samples),
                      samples};
}

}  // namespace pcs
