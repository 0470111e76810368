// Shared fixtures and small helpers for the test suites.
#pragma once

#include <initializer_list>
#include <string_view>
#include <vector>

#include "pcs/answers.hpp"

namespace pcs::testing {

inline AnswerVector av(std::initializer_list<double> entries) {
    return AnswerVector(std::vector<double>(entries));
}

// Builds a partial binary vector from a pattern like "?1?1" where '?' marks a
// missing entry.
inline PartialAnswerVector pv(std::string_view pattern) {
    std::vector<double> entries;
    std::vector<std::uint8_t> valid;
    for (char c : pattern) {
        if (c == '?') {
            entries.push_back(0.0);
            valid.push_back(0);
        } else {
            entries.push_back(c - '0');
            valid.push_back(1);
        }
    }
    return PartialAnswerVector(std::move(entries), std::move(valid));
}

// The worked four-leader/two-follower instance used across several suites:
// weights come out to (4/3, 3/2, 4/3, 11/6) and the plurality answer to
// (0,1,1,1).
struct WorkedExample {
    std::vector<AnswerVector> leaders{av({0, 0, 0, 0}), av({0, 1, 0, 1}),
                                      av({0, 1, 1, 0}), av({1, 1, 1, 1})};
    std::vector<PartialAnswerVector> followers{pv("?1?1"), pv("?01?")};
};

}  // namespace pcs::testing
