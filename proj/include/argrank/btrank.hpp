#pragma once

#include <map>
#include <string>
#include <vector>

#include "argrank/core.hpp"

namespace argrank::bt {

struct BTConfig {
    // Pseudo-count wins added in both directions for every observed
    // unordered pair; keeps the MLE finite when an item wins or loses
    // everything.
    double epsilon = 0.05;
    int max_iter = 10000;
    // Convergence on relative log-likelihood change (scale-free and
    // monotone under MM).
    double tol = 1e-10;
    enum class TiePolicy { HalfWin };
    TiePolicy tie_policy = TiePolicy::HalfWin;
    // When set, BTFit::ll_trace records the log-likelihood after every
    // iteration.
    bool record_trace = false;
};

struct BTFit {
    std::vector<std::string> item_ids;
    std::vector<double> gamma;  // strengths, geometric mean normalized to 1
    std::vector<double> theta;  // ln(gamma), mean 0
    std::vector<double> z;      // theta standardized to mean 0, sd 1
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> ll_trace;  // populated when BTConfig::record_trace
};

// One aggregated outcome record between two items.
struct Outcome {
    std::string item_i;
    std::string item_j;
    double wins_ij = 0.0;
    double wins_ji = 0.0;
    double ties = 0.0;
};

// P(i beats j) = gamma_i / (gamma_i + gamma_j).
// Throws ConfigError on non-finite or non-positive input.
double bt_probability(double gamma_i, double gamma_j);

// Maximum-likelihood strengths by minorization-maximization:
//   gamma_i <- W_i / sum_{j != i} N_ij / (gamma_i + gamma_j)
// with W_i = wins of i + 0.5*ties involving i + epsilon per observed pair
// and N_ij = all comparisons between i and j (ties count once) + 2*epsilon.
// Deterministic for fixed input ordering and config; item order follows
// first appearance in `outcomes`.
// Throws ValidationError if the comparison graph is disconnected and
// epsilon == 0 (the error names the components), on < 2 items, negative
// counts, or zero comparisons. An all-ties input is NOT an error (uniform
// fit).
BTFit fit_bt(const std::vector<Outcome>& outcomes, const BTConfig& config = {});

// Mean 0, sd 1 (population sd). Constant input maps to all zeros.
std::vector<double> standardize(const std::vector<double>& values);

// Fits per (topic, dimension) from majority-voted labels keyed by
// (pair_id, dimension). A is one win for arg_a, B for arg_b, Tie splits
// 0.5/0.5 under HalfWin.
struct TopicDimKey {
    std::string topic_id;
    Dimension::Kind dimension;
    auto operator<=>(const TopicDimKey&) const = default;
};

struct FitAllResult {
    std::map<TopicDimKey, BTFit> fits;
    // Topics skipped for having < 2 compared arguments.
    std::vector<std::string> warnings;
};

FitAllResult fit_all(
    const std::map<std::pair<std::string, Dimension::Kind>, Label>& labels,
    const Corpus& corpus, const BTConfig& config = {});

}  // namespace argrank::bt
