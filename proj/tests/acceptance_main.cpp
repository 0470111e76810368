// Acceptance suite: one line per criterion, exit code = number of failures.
//
// Each criterion runs independently; a throwing criterion is a failure, not
// an abort. Statistical criteria use fixed seeds, so every run of this binary
// reproduces the same verdicts.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pcs/evaluation.hpp"
#include "pcs/experiment.hpp"
#include "pcs/theory.hpp"

using namespace pcs;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> run;
};

constexpr auto kPlurality = AggregationRule::WeightedPlurality;
constexpr auto kHamming = DistanceMetric::Hamming;

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

AnswerVector make_vector(std::initializer_list<double> entries) {
    return AnswerVector(std::vector<double>(entries));
}

// --- criterion 1 -----------------------------------------------------------

bool golden_example(std::string& detail) {
    const std::vector<AnswerVector> leaders{
        make_vector({0, 0, 0, 0}), make_vector({0, 1, 0, 1}),
        make_vector({0, 1, 1, 0}), make_vector({1, 1, 1, 1})};
    std::vector<PartialAnswerVector> followers;
    followers.push_back(PartialAnswerVector({0, 1, 0, 1}, {0, 1, 0, 1}));
    followers.push_back(PartialAnswerVector({0, 0, 1, 0}, {0, 1, 1, 0}));

    const auto start = std::chrono::steady_clock::now();
    const WeightVector weights = compute_weights(leaders, followers, kHamming);
    const AnswerVector answer =
        weighted_plurality(weights, leaders, AnswerDomain::binary(), RngStream(1));
    const auto stop = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(stop - start).count();

    const bool weights_ok =
        weights.exact(0) == Rational(4, 3) && weights.exact(1) == Rational(3, 2) &&
        weights.exact(2) == Rational(4, 3) && weights.exact(3) == Rational(11, 6);
    const bool answer_ok = answer == make_vector({0, 1, 1, 1});
    std::ostringstream out;
    out << "weights (" << to_string(weights.exact(0)) << ", " << to_string(weights.exact(1))
        << ", " << to_string(weights.exact(2)) << ", " << to_string(weights.exact(3))
        << "), aggregate (" << answer[0] << "," << answer[1] << "," << answer[2] << ","
        << answer[3] << "), " << ms << " ms";
    detail = out.str();
    return weights_ok && answer_ok && ms < 1.0;
}

// --- criterion 2 -----------------------------------------------------------

bool budget_arithmetic(std::string& detail) {
    const auto check_plan = [](const Rational& alpha, const Rational& beta,
                               long long budget, long long k, long long m,
                               long long n) {
        const PolicyPlan p =
            plan(Policy::pcs(alpha, beta, budget, kPlurality, kHamming), k);
        return p.leaders == m && p.followers == n;
    };
    bool ok = true;
    ok &= check_plan(parse_fraction("0.2"), parse_fraction("0.375"), 16 * 20, 20, 10, 30);
    ok &= check_plan(parse_fraction("0.2"), parse_fraction("1/3"), 1200, 20, 40, 100);
    ok &= check_plan(Rational(0), Rational(0), 12 * 25, 25, 12, 0);
    // the two readings of the 12k caption at k = 25: the beta = 1/3 arithmetic
    // gives (8, 20); 8 leaders with 40 followers requires beta = 1/2 at 16k
    ok &= check_plan(parse_fraction("0.2"), parse_fraction("1/3"), 300, 25, 8, 20);
    ok &= check_plan(parse_fraction("0.2"), parse_fraction("1/2"), 400, 25, 8, 40);
    detail = "plans (10,30), (40,100), (12,0), (8,20), (8,40)";
    return ok;
}

// --- criterion 3 -----------------------------------------------------------

bool dominance_grid(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    int points = 0, violations = 0;
    for (double p_high : {0.6, 0.7, 0.8, 0.9}) {
        for (double p_low : {0.55, 0.6, 0.7}) {
            if (!(p_high > p_low)) continue;
            for (double p_z : {0.55, 0.7, 0.9}) {
                for (long long questions : {1, 2, 5, 10, 20}) {
                    const CompetencePair pair{p_high, p_low, p_z, questions};
                    ++points;
                    if (misdirection_probability_exact(pair) > misdirection_bound(pair)) {
                        ++violations;
                    }
                }
            }
        }
    }
    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();
    std::ostringstream out;
    out << points << " grid points, " << violations << " violations, " << seconds << " s";
    detail = out.str();
    return points == 135 && violations == 0 && seconds < 10.0;
}

// --- criterion 4 -----------------------------------------------------------

bool expectation_identity(std::string& detail) {
    RngStream rng(20240404);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p_high = rng.next_real(0.01, 0.99);
        const double p_low = rng.next_real(0.01, 0.99);
        const double p_z = rng.next_real(0.01, 0.99);
        const DisagreementDistribution b = b_distribution(p_high, p_low, p_z);
        const double identity = (2.0 * p_z - 1.0) * (p_low - p_high);
        worst = std::max(worst, std::abs(b.expectation() - identity));
    }
    std::ostringstream out;
    out << "1000 triples, max deviation " << worst;
    detail = out.str();
    return worst <= 1e-12;
}

// --- criterion 5 -----------------------------------------------------------

bool weight_conservation(std::string& detail) {
    RngStream rng(20240505);
    int checked = 0;
    for (int round = 0; round < 10000; ++round) {
        const std::size_t k = 1 + rng.next_index(12);
        const std::size_t m = 1 + rng.next_index(20);
        const std::size_t n = rng.next_index(101);

        // random domain: binary, categorical, or continuous
        const std::size_t domain_kind = rng.next_index(3);
        const std::size_t labels = domain_kind == 0 ? 2 : 2 + rng.next_index(9);
        const bool categorical = domain_kind != 2;
        const DistanceMetric metric =
            categorical ? DistanceMetric::Hamming : DistanceMetric::L1;

        const auto random_entry = [&]() -> double {
            return categorical ? static_cast<double>(rng.next_index(labels))
                               : rng.next_real(0.0, 100.0);
        };

        std::vector<AnswerVector> leaders;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> entries(k);
            for (auto& e : entries) e = random_entry();
            leaders.emplace_back(std::move(entries));
        }
        std::vector<PartialAnswerVector> followers;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> entries(k, 0.0);
            std::vector<std::uint8_t> valid(k, 0);
            const std::size_t answered = 1 + rng.next_index(k);
            for (std::size_t j = 0; j < answered; ++j) valid[rng.next_index(k)] = 1;
            for (std::size_t j = 0; j < k; ++j) {
                if (valid[j]) entries[j] = random_entry();
            }
            followers.emplace_back(std::move(entries), std::move(valid));
        }

        const WeightVector weights = compute_weights(leaders, followers, metric);
        if (weights.total() != Rational(static_cast<long long>(m + n))) {
            std::ostringstream out;
            out << "violated at round " << round << " (m=" << m << ", n=" << n << ")";
            detail = out.str();
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " random instances, all sums exact";
    return true;
}

// --- criterion 6 -----------------------------------------------------------

bool zero_beta_equivalence(std::string& detail) {
    const SyntheticBinaryPopulation population(0.1, 0.9, 25);
    const GroundTruth& truth = population.ground_truth();
    const LossEstimate cs =
        estimate_loss(Policy::cs(300, kPlurality, kHamming), population, truth, 1000,
                      20240606, 1);
    const LossEstimate zero_beta = estimate_loss(
        Policy::pcs(parse_fraction("0.2"), Rational(0), 300, kPlurality, kHamming),
        population, truth, 1000, 20240606, 4);
    const double diff = std::abs(cs.mean_loss - zero_beta.mean_loss);
    std::ostringstream out;
    out << "matched-seed difference " << diff;
    detail = out.str();
    return diff == 0.0;
}

// --- criteria 7 and 8 ------------------------------------------------------

bool loss_separation(double v1, double v2, bool expect_benefit, std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const SyntheticBinaryPopulation population(v1, v2, 25);
    const GroundTruth& truth = population.ground_truth();
    const LossEstimate cs = estimate_loss(Policy::cs(300, kPlurality, kHamming),
                                          population, truth, 5000, 20240707, 4);
    const LossEstimate pcs_loss = estimate_loss(
        Policy::pcs(parse_fraction("0.2"), parse_fraction("1/3"), 300, kPlurality,
                    kHamming),
        population, truth, 5000, 20240707, 4);
    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();

    const double gap = cs.mean_loss - pcs_loss.mean_loss;
    const double se = combined_se(cs.std_error, pcs_loss.std_error);
    std::ostringstream out;
    out << "CS " << cs.mean_loss << ", PCS " << pcs_loss.mean_loss << ", gap " << gap
        << " = " << gap / se << " combined SEs, " << seconds << " s";
    detail = out.str();
    if (expect_benefit) return gap > 3.0 * se && seconds < 30.0;
    return std::abs(gap) <= 2.0 * se;
}

// --- criterion 9 -----------------------------------------------------------

bool rank_endpoint_separation(std::string& detail) {
    const SyntheticBinaryPopulation population(0.1, 0.9, 25);
    const Policy policy = Policy::pcs(parse_fraction("0.2"), parse_fraction("0.375"),
                                      16 * 25, kPlurality, kHamming);
    const WeightByRankTable table = weight_by_rank(
        policy, population, population.ground_truth(), 5000, 20240909, 4);
    const double first = table.mean_weights.front();
    const double last = table.mean_weights.back();
    const double se = combined_se(table.std_errors.front(), table.std_errors.back());
    std::ostringstream out;
    out << "rank 1 weight " << first << ", rank " << table.mean_weights.size()
        << " weight " << last << ", gap " << (first - last) / se << " combined SEs";
    detail = out.str();
    return first - last > 3.0 * se;
}

// --- criterion 10 ----------------------------------------------------------

bool all_followers_null(std::string& detail) {
    const SyntheticBinaryPopulation population(0.1, 0.9, 25);
    const GroundTruth& truth = population.ground_truth();
    const AllFollowersLossEstimate all_followers = estimate_all_followers_loss(
        parse_fraction("0.2"), 300, kPlurality, population, truth, 5000, 20241010, 4);
    const LossEstimate cs = estimate_loss(Policy::cs(300, kPlurality, kHamming),
                                          population, truth, 5000, 20241010, 4);
    const double gap = std::abs(all_followers.mean_loss - cs.mean_loss);
    const double se = combined_se(all_followers.std_error, cs.std_error);
    std::ostringstream out;
    out << "all-followers " << all_followers.mean_loss << ", CS " << cs.mean_loss
        << ", |gap| " << gap / se << " combined SEs";
    detail = out.str();
    return gap <= 2.0 * se;
}

// --- criterion 11 ----------------------------------------------------------

std::string read_file(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream out;
    out << file.rdbuf();
    return out.str();
}

bool determinism(std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "pcs_acceptance_determinism";
    fs::remove_all(base);

    nlohmann::json doc{
        {"population", {{"synthetic", {{"v1", "0.2"}, {"v2", "1"}, {"k", 12}}}}},
        {"metric", "hamming"},
        {"rule", "weighted-plurality"},
        {"policies", {{"alpha", {"0.25"}}, {"beta", {"0", "1/3"}}, {"budget", {144}}}},
        {"trials", 150},
        {"seed", 20241111},
        {"output_dir", (base / "a").string()},
        {"analyses",
         {"loss", "sweep", "weight-by-rank", "weighted-vs-unweighted", "all-followers",
          "bound-check"}},
        {"bound_check",
         {{"p_high", {0.8}},
          {"p_low", {0.6}},
          {"p_follower", {0.7}},
          {"questions", {4}},
          {"mc_samples", 1000}}},
    };
    const ExperimentConfig config = ExperimentConfig::from_json(doc);

    RunOptions serial;
    serial.threads = 1;
    const ReportBundle first = run_experiment(config, serial);
    RunOptions rerun;
    rerun.threads = 1;
    rerun.output_dir = (base / "b").string();
    const ReportBundle second = run_experiment(config, rerun);
    RunOptions parallel;
    parallel.threads = 4;
    parallel.output_dir = (base / "c").string();
    const ReportBundle third = run_experiment(config, parallel);

    std::size_t files = 0;
    for (const auto& [name, content] : first.tables) {
        const std::string b = read_file(base / "b" / name);
        const std::string c = read_file(base / "c" / name);
        const std::string a = read_file(base / "a" / name);
        if (a != content || b != content || c != content) {
            detail = "mismatch in " + name;
            return false;
        }
        ++files;
    }
    (void)second;
    (void)third;
    detail = std::to_string(files) + " report files byte-identical across reruns and " +
             "thread counts";
    return files >= 6;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;
    criteria.push_back({1, "golden example: exact weights and aggregate", golden_example});
    criteria.push_back({2, "budget arithmetic reference plans", budget_arithmetic});
    criteria.push_back({3, "misdirection bound dominates exact probability on the grid",
                        dominance_grid});
    criteria.push_back({4, "disagreement expectation identity to 1e-12",
                        expectation_identity});
    criteria.push_back({5, "weight conservation over 10000 random instances",
                        weight_conservation});
    criteria.push_back({6, "zero-beta policy equals plain crowdsourcing under matched seeds",
                        zero_beta_equivalence});
    criteria.push_back({7, "U[0.1,0.9]: weighted policy beats plain crowdsourcing by > 3 SE",
                        [](std::string& d) { return loss_separation(0.1, 0.9, true, d); }});
    criteria.push_back({8, "U[0.45,0.55]: no separation beyond 2 SE",
                        [](std::string& d) { return loss_separation(0.45, 0.55, false, d); }});
    criteria.push_back({9, "U[0.1,0.9]: rank-1 leader outweighs rank-m by > 3 SE",
                        rank_endpoint_separation});
    criteria.push_back({10, "all-followers spending matches plain crowdsourcing within 2 SE",
                        all_followers_null});
    criteria.push_back({11, "byte-identical reports across reruns and thread counts",
                        determinism});

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& error) {
            detail = std::string("exception: ") + error.what();
        }
        if (!passed) ++failures;
        std::printf("[%s] criterion %2d: %s — %s\n", passed ? "PASS" : "FAIL",
                    criterion.number, criterion.title.c_str(), detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
