#include "argrank/synthlab.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>

#include "argrank/errors.hpp"
#include "argrank/metrics.hpp"
#include "argrank/promptkit.hpp"
#include "argrank/rng.hpp"

namespace argrank::synth {

namespace {

std::string topic_id_for(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "T%02d", index + 1);
    return buf;
}

std::string arg_id_for(const std::string& topic_id, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "-a%03d", index + 1);
    return topic_id + buf;
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
    if (spec.n_topics < 1) throw ConfigError("synth: n_topics must be >= 1");
    if (spec.n_args_per_topic < 2) throw ConfigError("synth: n_args_per_topic must be >= 2");
    if (spec.runs < 1) throw ConfigError("synth: runs must be >= 1");

    SynthResult result;
    Corpus& corpus = result.bundle.corpus;

    for (int t = 0; t < spec.n_topics; ++t) {
        const std::string topic_id = topic_id_for(t);
        corpus.topics.push_back(Topic{topic_id, "Synthetic debate topic " + topic_id});

        std::vector<Argument> topic_args;
        KeyedRng theta_rng(spec.seed, "theta\x1f" + topic_id);
        for (int a = 0; a < spec.n_args_per_topic; ++a) {
            const std::string arg_id = arg_id_for(topic_id, a);
            const double theta = theta_rng.next_normal();
            result.theta_star.emplace(arg_id, theta);
            topic_args.push_back(Argument{
                arg_id, topic_id,
                "Synthetic argument " + arg_id + " about topic " + topic_id + ".", true});
        }
        corpus.arguments.insert(corpus.arguments.end(), topic_args.begin(),
                                topic_args.end());

        sampling::SamplingPlan plan = spec.plan;
        plan.seed = spec.seed ^ fnv1a64(topic_id);
        if (spec.budget_per_topic) {
            const auto budgeted =
                sampling::plan_for_budget(spec.n_args_per_topic, *spec.budget_per_topic);
            plan.offsets = budgeted.offsets;
        }
        const auto pairs = sampling::circulant_pairs(topic_args, plan);
        corpus.pairs.insert(corpus.pairs.end(), pairs.begin(), pairs.end());
    }
    corpus.reindex();

    // Gold labels: the deterministic oracle on theta*, one label per
    // dimension. Sampled noise stays out of gold by design.
    judge::OracleParams gold_oracle;
    gold_oracle.theta_star = result.theta_star;
    gold_oracle.tie_band = spec.tie_band;
    gold_oracle.noise = judge::OracleParams::Noise::Deterministic;
    for (const auto& pair : corpus.pairs) {
        for (const Dimension::Kind dim : all_dimensions()) {
            result.bundle.gold.pair_labels.emplace(
                std::make_pair(pair.pair_id, dim),
                judge::oracle_judge(pair, dim, gold_oracle, spec.seed));
        }
    }

    // Gold scores: standardized theta* per topic (the exact reference), or
    // a BT re-fit on the gold labels when realism is preferred.
    if (!spec.refit_gold_scores) {
        for (const auto& topic : corpus.topics) {
            std::vector<std::string> ids;
            std::vector<double> thetas;
            for (const auto& arg : corpus.arguments) {
                if (arg.topic_id != topic.id) continue;
                ids.push_back(arg.id);
                thetas.push_back(result.theta_star.at(arg.id));
            }
            const auto z = bt::standardize(thetas);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                for (const Dimension::Kind dim : all_dimensions()) {
                    result.bundle.gold.arg_scores.emplace(std::make_pair(ids[i], dim), z[i]);
                }
            }
        }
    } else {
        const auto fits = bt::fit_all(result.bundle.gold.pair_labels, corpus);
        for (const auto& [key, fit] : fits.fits) {
            for (std::size_t i = 0; i < fit.item_ids.size(); ++i) {
                result.bundle.gold.arg_scores.emplace(
                    std::make_pair(fit.item_ids[i], key.dimension), fit.z[i]);
            }
        }
    }

    result.bundle.source_path = "synthetic";
    return result;
}

RecoveryReport recovery_experiment(const SynthSpec& spec, const bt::BTConfig& bt_config,
                                   const std::optional<std::string>& judgments_path) {
    const SynthResult synth = generate(spec);
    const Corpus& corpus = synth.bundle.corpus;

    judge::OracleParams params;
    params.theta_star = synth.theta_star;
    params.tie_band = spec.tie_band;
    params.noise = spec.noise;
    judge::OracleBackend backend(params, spec.seed);

    judge::JudgeConfig config;
    config.backend = judge::JudgeConfig::Backend::Oracle;
    config.runs = spec.runs;
    config.base_seed = spec.seed;

    std::string store_path;
    if (judgments_path) {
        store_path = *judgments_path;
    } else {
        store_path = (std::filesystem::temp_directory_path() /
                      ("argrank-recovery-" + std::to_string(spec.seed) + "-" +
                       std::to_string(::getpid()) + ".jsonl"))
                         .string();
        std::filesystem::remove(store_path);
    }

    judge::JudgmentStore store(store_path);
    const auto templates = prompts::TemplateSet::load(prompts::TemplateSet::default_dir());
    judge::CampaignSpec campaign;
    campaign.strategy = prompts::Strategy::ZeroShot;
    judge::run_campaign(corpus.pairs, campaign, corpus, templates, nullptr, backend, config,
                        store);

    const auto labels = judge::aggregate_majority(store.judgments(), config.runs);
    if (!judgments_path) std::filesystem::remove(store_path);

    const auto fit_result = bt::fit_all(labels, corpus, bt_config);

    RecoveryReport report;
    for (const Dimension::Kind dim : all_dimensions()) {
        std::vector<double> fitted;
        std::vector<double> truth;
        for (const auto& [key, fit] : fit_result.fits) {
            if (key.dimension != dim) continue;
            // Standardize the truth over the fitted items so pooled topics
            // share a scale, mirroring the fitted z.
            std::vector<double> topic_truth;
            for (const auto& id : fit.item_ids) {
                topic_truth.push_back(synth.theta_star.at(id));
            }
            const auto z_truth = bt::standardize(topic_truth);
            fitted.insert(fitted.end(), fit.z.begin(), fit.z.end());
            truth.insert(truth.end(), z_truth.begin(), z_truth.end());
        }
        if (fitted.size() < 2) continue;
        const auto rho = metrics::spearman(fitted, truth);
        const auto tau = metrics::kendall_tau_b(fitted, truth);
        if (rho) report.spearman_vs_truth.emplace(dim, *rho);
        if (tau) report.kendall_vs_truth.emplace(dim, *tau);
    }

    for (const auto& [dim, v] : report.spearman_vs_truth) report.mean_spearman += v;
    if (!report.spearman_vs_truth.empty()) {
        report.mean_spearman /= static_cast<double>(report.spearman_vs_truth.size());
    }
    for (const auto& [dim, v] : report.kendall_vs_truth) report.mean_kendall += v;
    if (!report.kendall_vs_truth.empty()) {
        report.mean_kendall /= static_cast<double>(report.kendall_vs_truth.size());
    }
    return report;
}

}  // namespace argrank::synth
