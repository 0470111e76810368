#include "pcs/dataset_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "pcs/errors.hpp"
#include "pcs/format.hpp"

namespace pcs {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

struct RawRow {
    std::string id;
    std::vector<std::string> cells;
    std::size_t line_number = 0;
};

struct RawFile {
    std::optional<long long> declared_workers;
    std::optional<long long> declared_questions;
    std::vector<std::string> question_ids;
    std::vector<RawRow> rows;  // ground truth excluded
    RawRow truth;
};

constexpr const char* kTruthId = "GROUND_TRUTH";

RawFile parse_file(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) {
        throw FormatError("cannot open dataset file: " + path.string());
    }

    const std::string file = path.string();
    RawFile raw;
    bool truth_seen = false;
    bool header_seen = false;
    std::string line;
    std::size_t line_number = 0;

    while (std::getline(input, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (line[0] == '#') {
            if (header_seen) {
                throw FormatError(file, line_number, 1, "metadata must precede the header");
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;  // free-form comment
            std::string key = line.substr(1, eq - 1);
            key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
            const long long value = std::atoll(line.c_str() + eq + 1);
            if (key == "workers") raw.declared_workers = value;
            if (key == "k") raw.declared_questions = value;
            continue;
        }

        std::vector<std::string> cells = split_csv_line(line);
        if (!header_seen) {
            if (cells.size() < 2) {
                throw FormatError(file, line_number, 1, "header needs at least one question id");
            }
            raw.question_ids.assign(cells.begin() + 1, cells.end());
            header_seen = true;
            continue;
        }
        if (cells.size() != raw.question_ids.size() + 1) {
            throw FormatError(file, line_number, cells.size(),
                              "expected " + std::to_string(raw.question_ids.size() + 1) +
                                  " cells, found " + std::to_string(cells.size()));
        }
        RawRow row;
        row.id = cells[0];
        row.cells.assign(cells.begin() + 1, cells.end());
        row.line_number = line_number;
        if (row.id == kTruthId) {
            if (truth_seen) {
                throw FormatError(file, line_number, 1, "duplicate GROUND_TRUTH row");
            }
            raw.truth = std::move(row);
            truth_seen = true;
        } else {
            raw.rows.push_back(std::move(row));
        }
    }

    if (!header_seen) throw FormatError(file + ": missing header row");
    if (!truth_seen) throw FormatError(file + ": missing GROUND_TRUTH row");
    return raw;
}

AnswerDomain resolve_domain(const RawFile& raw, const DomainSpec& spec,
                            const std::string& file) {
    if (spec.kind == DomainSpec::Kind::Continuous) {
        if (!spec.upper) {
            throw FormatError(file + ": continuous domain declaration needs an upper bound");
        }
        return AnswerDomain::continuous(*spec.upper);
    }

    std::vector<std::string> labels;
    if (spec.labels) {
        labels = *spec.labels;
    } else {
        std::set<std::string> seen(raw.truth.cells.begin(), raw.truth.cells.end());
        for (const auto& row : raw.rows) {
            for (const auto& cell : row.cells) {
                if (!cell.empty()) seen.insert(cell);
            }
        }
        seen.erase("");
        labels.assign(seen.begin(), seen.end());
    }
    if (spec.kind == DomainSpec::Kind::Binary && labels.size() != 2) {
        throw FormatError(file + ": binary domain needs exactly 2 labels, found " +
                          std::to_string(labels.size()));
    }
    return AnswerDomain::categorical(std::move(labels));
}

// Converts one row; returns nullopt when any cell is missing.
std::optional<AnswerVector> convert_row(const RawRow& row, const AnswerDomain& domain,
                                        const std::string& file, bool allow_missing) {
    std::vector<double> values;
    values.reserve(row.cells.size());
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
        const std::string& cell = row.cells[i];
        if (cell.empty()) {
            if (!allow_missing) {
                throw FormatError(file, row.line_number, i + 2,
                                  "ground truth must cover every question");
            }
            return std::nullopt;
        }
        if (domain.is_categorical()) {
            const auto index = domain.label_index(cell);
            if (!index) {
                throw FormatError(file, row.line_number, i + 2,
                                  "label '" + cell + "' is not in the domain");
            }
            values.push_back(static_cast<double>(*index));
        } else {
            char* end = nullptr;
            const double value = std::strtod(cell.c_str(), &end);
            if (end != cell.c_str() + cell.size()) {
                throw FormatError(file, row.line_number, i + 2,
                                  "cannot parse '" + cell + "' as a number");
            }
            if (!domain.contains(value)) {
                throw FormatError(file, row.line_number, i + 2,
                                  "value " + cell + " is outside [0, " +
                                      format_double(domain.upper_bound()) + "]");
            }
            values.push_back(value);
        }
    }
    return AnswerVector(std::move(values));
}

}  // namespace

EmpiricalPopulation load_dataset(const std::filesystem::path& path,
                                 const DomainSpec& spec) {
    const std::string file = path.string();
    const RawFile raw = parse_file(path);
    const AnswerDomain domain = resolve_domain(raw, spec, file);

    if (raw.declared_workers &&
        *raw.declared_workers != static_cast<long long>(raw.rows.size())) {
        throw FormatError(file + ": declared workers=" +
                          std::to_string(*raw.declared_workers) + " but file has " +
                          std::to_string(raw.rows.size()) + " worker rows");
    }
    if (raw.declared_questions &&
        *raw.declared_questions != static_cast<long long>(raw.question_ids.size())) {
        throw FormatError(file + ": declared k=" + std::to_string(*raw.declared_questions) +
                          " but header has " + std::to_string(raw.question_ids.size()) +
                          " questions");
    }

    const auto truth_vector = convert_row(raw.truth, domain, file, /*allow_missing=*/false);

    std::vector<std::string> worker_ids;
    std::vector<AnswerVector> workers;
    std::size_t dropped = 0;
    for (const auto& row : raw.rows) {
        auto converted = convert_row(row, domain, file, /*allow_missing=*/true);
        if (!converted) {
            ++dropped;
            continue;
        }
        worker_ids.push_back(row.id);
        workers.push_back(std::move(*converted));
    }
    if (workers.empty()) {
        throw FormatError(file + ": no complete workers remain after dropping " +
                          std::to_string(dropped) + " with missing answers");
    }

    return EmpiricalPopulation(path.stem().string(), domain, raw.question_ids,
                               std::move(worker_ids), std::move(workers),
                               GroundTruth{*truth_vector}, dropped);
}

void write_dataset(const std::filesystem::path& path,
                   const EmpiricalPopulation& population) {
    const auto& domain = population.domain();
    const auto cell_text = [&](double value) -> std::string {
        if (domain.is_categorical()) return domain.label(static_cast<std::size_t>(value));
        return format_double(value);
    };
    const auto check_token = [&](const std::string& token) {
        if (token.find(',') != std::string::npos || token.find('\n') != std::string::npos) {
            throw InvalidInputError("dataset tokens must not contain commas or newlines: '" +
                                    token + "'");
        }
    };

    std::ostringstream out;
    out << "# workers=" << population.worker_count() << "\n";
    out << "# k=" << population.question_count() << "\n";
    out << "worker";
    for (const auto& id : population.question_ids()) {
        check_token(id);
        out << "," << id;
    }
    out << "\n";

    const auto write_row = [&](const std::string& id, const AnswerVector& vector) {
        check_token(id);
        out << id;
        for (std::size_t q = 0; q < vector.size(); ++q) {
            const std::string text = cell_text(vector[q]);
            check_token(text);
            out << "," << text;
        }
        out << "\n";
    };
    write_row("GROUND_TRUTH", population.ground_truth().truth);
    for (std::size_t i = 0; i < population.worker_count(); ++i) {
        write_row(population.worker_ids()[i], population.workers()[i]);
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot open file for writing: " + path.string());
    file << out.str();
}

}  // namespace pcs
