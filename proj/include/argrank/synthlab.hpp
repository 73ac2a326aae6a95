#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "argrank/btrank.hpp"
#include "argrank/corpusio.hpp"
#include "argrank/judge.hpp"
#include "argrank/sampler.hpp"

namespace argrank::synth {

// Fully seeded synthetic corpus: per-argument hidden strengths theta*,
// circulant pairs, gold labels from the deterministic oracle on theta*,
// and gold scores equal to standardized theta*.
struct SynthSpec {
    int n_topics = 1;
    int n_args_per_topic = 10;
    std::uint64_t seed = 0;
    sampling::SamplingPlan plan;       // offsets applied per topic
    std::optional<int> budget_per_topic;  // overrides plan offsets when set
    judge::OracleParams::Noise noise = judge::OracleParams::Noise::Deterministic;
    double tie_band = 0.0;
    int runs = 3;
    // When true, gold scores come from re-fitting BT on the gold labels
    // instead of the hidden truth (end-to-end realism at the cost of an
    // exact reference).
    bool refit_gold_scores = false;
};

struct SynthResult {
    io::CorpusBundle bundle;
    std::map<std::string, double> theta_star;  // hidden truth per argument
};

SynthResult generate(const SynthSpec& spec);

struct RecoveryReport {
    std::map<Dimension::Kind, double> spearman_vs_truth;
    std::map<Dimension::Kind, double> kendall_vs_truth;
    double mean_spearman = 0.0;
    double mean_kendall = 0.0;
};

// Oracle judge campaign -> majority vote -> BT fits -> correlation of the
// fitted scores against theta*. Deterministic given the spec seed.
// judgments_path, when given, persists the campaign store there.
RecoveryReport recovery_experiment(const SynthSpec& spec, const bt::BTConfig& bt_config = {},
                                   const std::optional<std::string>& judgments_path =
                                       std::nullopt);

}  // namespace argrank::synth
