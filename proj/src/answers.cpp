#include "pcs/answers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pcs/errors.hpp"

namespace pcs {

AnswerDomain AnswerDomain::binary(std::string zero, std::string one) {
    return categorical({std::move(zero), std::move(one)});
}

AnswerDomain AnswerDomain::categorical(std::vector<std::string> labels) {
    if (labels.size() < 2) {
        throw InvalidInputError("categorical domain needs at least 2 labels");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw InvalidInputError("duplicate label '" + label + "' in domain");
        }
    }
    return AnswerDomain(DomainKind::Categorical, std::move(labels), 0.0);
}

AnswerDomain AnswerDomain::continuous(double upper) {
    if (!(upper > 0.0) || !std::isfinite(upper)) {
        throw InvalidInputError("continuous domain needs a finite upper bound > 0");
    }
    return AnswerDomain(DomainKind::Continuous, {}, upper);
}

std::optional<std::size_t> AnswerDomain::label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    return std::nullopt;
}

bool AnswerDomain::contains(double value) const {
    if (is_categorical()) {
        double integral = 0.0;
        if (std::modf(value, &integral) != 0.0) return false;
        return value >= 0.0 && value < static_cast<double>(labels_.size());
    }
    return value >= 0.0 && value <= upper_;
}

bool metric_valid_for(DistanceMetric metric, const AnswerDomain& domain) {
    return metric == DistanceMetric::Hamming ? domain.is_categorical()
                                             : domain.is_continuous();
}

void AnswerVector::validate_in(const AnswerDomain& domain) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!domain.contains(entries_[i])) {
            throw InvalidInputError("answer at question " + std::to_string(i) +
                                    " is outside the domain");
        }
    }
}

PartialAnswerVector::PartialAnswerVector(std::vector<double> entries,
                                         std::vector<std::uint8_t> valid)
    : entries_(std::move(entries)), valid_(std::move(valid)) {
    if (entries_.size() != valid_.size()) {
        throw InvalidInputError("partial vector entries and validity mask differ in length");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (valid_[i]) {
            ++valid_count_;
        } else {
            entries_[i] = 0.0;
        }
    }
}

PartialAnswerVector PartialAnswerVector::complete(const AnswerVector& full) {
    std::vector<double> entries(full.entries().begin(), full.entries().end());
    return PartialAnswerVector(std::move(entries),
                               std::vector<std::uint8_t>(full.size(), 1));
}

PartialAnswerVector PartialAnswerVector::masked(const AnswerVector& full,
                                                std::span<const std::size_t> keep) {
    std::vector<double> entries(full.size(), 0.0);
    std::vector<std::uint8_t> valid(full.size(), 0);
    for (std::size_t index : keep) {
        if (index >= full.size()) {
            throw InvalidInputError("mask index out of range");
        }
        entries[index] = full[index];
        valid[index] = 1;
    }
    return PartialAnswerVector(std::move(entries), std::move(valid));
}

std::vector<std::size_t> PartialAnswerVector::valid_indices() const {
    std::vector<std::size_t> out;
    out.reserve(valid_count_);
    for (std::size_t i = 0; i < valid_.size(); ++i) {
        if (valid_[i]) out.push_back(i);
    }
    return out;
}

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw InvalidInputError("vectors differ in length: " + std::to_string(a) +
                                " vs " + std::to_string(b));
    }
}

double accumulate_pair(double a, double b, DistanceMetric metric) {
    if (metric == DistanceMetric::Hamming) return a == b ? 0.0 : 1.0;
    return std::abs(a - b);
}

}  // namespace

double distance(const AnswerVector& a, const AnswerVector& b, DistanceMetric metric) {
    require_same_length(a.size(), b.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += accumulate_pair(a[i], b[i], metric);
    }
    return total;
}

double restricted_distance(const AnswerVector& a, const PartialAnswerVector& b,
                           DistanceMetric metric) {
    require_same_length(a.size(), b.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b.is_valid(i)) total += accumulate_pair(a[i], b.entry(i), metric);
    }
    return total;
}

double restricted_distance(const PartialAnswerVector& a, const PartialAnswerVector& b,
                           DistanceMetric metric) {
    require_same_length(a.size(), b.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.is_valid(i) && b.is_valid(i)) {
            total += accumulate_pair(a.entry(i), b.entry(i), metric);
        }
    }
    return total;
}

double individual_error(const AnswerVector& x, const GroundTruth& truth,
                        DistanceMetric metric) {
    return distance(x, truth.truth, metric);
}

}  // namespace pcs
