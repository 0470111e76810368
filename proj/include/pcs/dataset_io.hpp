// Dataset container format: plain CSV, UTF-8, '\n' line endings.
//
//   # workers=3          optional metadata, validated against the file
//   # k=4
//   worker,q1,q2,q3,q4   header: worker-id column then question ids
//   GROUND_TRUTH,1,0,1,1 reserved worker id for the ground truth row
//   w1,1,0,1,1
//   w2,1,,1,0            empty cell = missing answer
//
// Workers with any missing answer are dropped at load time (the drop count is
// kept on the population). The ground truth row must be complete. Cells must
// not contain commas; there is no quoting.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcs/population.hpp"

namespace pcs {

// Domain declaration used to interpret dataset cells. Binary and categorical
// label sets may be listed explicitly or inferred from the file contents
// (sorted lexicographically); continuous domains need the upper bound.
struct DomainSpec {
    enum class Kind { Binary, Categorical, Continuous };
    Kind kind = Kind::Binary;
    std::optional<std::vector<std::string>> labels;
    std::optional<double> upper;

    static DomainSpec binary() { return DomainSpec{Kind::Binary, std::nullopt, std::nullopt}; }
    static DomainSpec categorical() {
        return DomainSpec{Kind::Categorical, std::nullopt, std::nullopt};
    }
    static DomainSpec continuous(double upper) {
        return DomainSpec{Kind::Continuous, std::nullopt, upper};
    }
};

// Throws FormatError with a file:row:column location on parse failures.
EmpiricalPopulation load_dataset(const std::filesystem::path& path,
                                 const DomainSpec& spec);

// Inverse of load_dataset: a written population re-loads identically.
void write_dataset(const std::filesystem::path& path,
                   const EmpiricalPopulation& population);

}  // namespace pcs
