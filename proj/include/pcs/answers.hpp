// Answer domains, complete and partial answer vectors, and the distance
// metrics used throughout the toolkit. Binary questions are categorical
// questions with exactly two labels; continuous questions take values in
// [0, H]. Partial vectors mark unanswered questions with a validity mask.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcs {

enum class DomainKind { Categorical, Continuous };

// Answers are stored as doubles: the label index for categorical domains,
// the raw value for continuous domains.
class AnswerDomain {
public:
    static AnswerDomain binary() { return binary("0", "1"); }
    static AnswerDomain binary(std::string zero, std::string one);
    static AnswerDomain categorical(std::vector<std::string> labels);
    static AnswerDomain continuous(double upper);

    DomainKind kind() const { return kind_; }
    bool is_categorical() const { return kind_ == DomainKind::Categorical; }
    bool is_continuous() const { return kind_ == DomainKind::Continuous; }
    bool is_binary() const { return is_categorical() && labels_.size() == 2; }

    std::size_t label_count() const { return labels_.size(); }
    const std::string& label(std::size_t index) const { return labels_.at(index); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> label_index(std::string_view label) const;

    // Continuous upper bound H; answers live in [0, H].
    double upper_bound() const { return upper_; }

    bool contains(double value) const;

    bool operator==(const AnswerDomain&) const = default;

private:
    AnswerDomain(DomainKind kind, std::vector<std::string> labels, double upper)
        : kind_(kind), labels_(std::move(labels)), upper_(upper) {}

    DomainKind kind_;
    std::vector<std::string> labels_;
    double upper_ = 0.0;
};

enum class DistanceMetric { Hamming, L1 };

// Hamming pairs with categorical domains, L1 with continuous ones.
bool metric_valid_for(DistanceMetric metric, const AnswerDomain& domain);

class AnswerVector {
public:
    AnswerVector() = default;
    explicit AnswerVector(std::vector<double> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const { return entries_; }

    // Throws InvalidInputError if any entry is outside the domain.
    void validate_in(const AnswerDomain& domain) const;

    bool operator==(const AnswerVector&) const = default;

private:
    std::vector<double> entries_;
};

// A vector with missing entries. The valid indices and missing indices
// partition [0, k); entries at missing slots are normalized to zero so that
// equality compares only meaningful state.
class PartialAnswerVector {
public:
    PartialAnswerVector(std::vector<double> entries, std::vector<std::uint8_t> valid);

    // A complete vector viewed as partial (everything valid).
    static PartialAnswerVector complete(const AnswerVector& full);

    // Keeps only the entries listed in `keep`, masking the rest.
    static PartialAnswerVector masked(const AnswerVector& full,
                                      std::span<const std::size_t> keep);

    std::size_t size() const { return entries_.size(); }
    bool is_valid(std::size_t i) const { return valid_[i] != 0; }
    double entry(std::size_t i) const { return entries_[i]; }
    std::size_t valid_count() const { return valid_count_; }
    std::vector<std::size_t> valid_indices() const;

    bool operator==(const PartialAnswerVector&) const = default;

private:
    std::vector<double> entries_;
    std::vector<std::uint8_t> valid_;
    std::size_t valid_count_ = 0;
};

struct GroundTruth {
    AnswerVector truth;
};

// Distance between complete vectors: Hamming counts disagreements, L1 sums
// absolute differences.
double distance(const AnswerVector& a, const AnswerVector& b, DistanceMetric metric);

// Distance restricted to the joint valid entries of the two vectors. An empty
// joint index set yields 0, which ties all leaders and splits a follower's
// weight evenly; under any policy a leader is complete so the joint set is
// the follower's valid set and never empty.
double restricted_distance(const AnswerVector& a, const PartialAnswerVector& b,
                           DistanceMetric metric);
double restricted_distance(const PartialAnswerVector& a, const PartialAnswerVector& b,
                           DistanceMetric metric);

inline double restricted_distance(const PartialAnswerVector& a, const AnswerVector& b,
                                  DistanceMetric metric) {
    return restricted_distance(b, a, metric);
}
inline double restricted_distance(const AnswerVector& a, const AnswerVector& b,
                                  DistanceMetric metric) {
    return distance(a, b, metric);
}

// d(x, truth) for a single worker.
double individual_error(const AnswerVector& x, const GroundTruth& truth,
                        DistanceMetric metric);

}  // namespace pcs
