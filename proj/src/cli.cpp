#include "argrank/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "argrank/btrank.hpp"
#include "argrank/core.hpp"
#include "argrank/corpusio.hpp"
#include "argrank/csv.hpp"
#include "argrank/digest.hpp"
#include "argrank/errors.hpp"
#include "argrank/http_judge.hpp"
#include "argrank/judge.hpp"
#include "argrank/manifest.hpp"
#include "argrank/metrics.hpp"
#include "argrank/promptkit.hpp"
#include "argrank/report.hpp"
#include "argrank/sampler.hpp"
#include "argrank/synthlab.hpp"
#include "argrank/toml.hpp"

#ifndef ARGRANK_DATA_DIR
#define ARGRANK_DATA_DIR "data"
#endif

namespace argrank::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitJudge = 2;
constexpr int kExitIo = 3;

std::vector<Dimension::Kind> parse_dimension_arg(const std::string& value) {
    if (value == "all") return all_dimensions();
    return {parse_dimension(value)};
}

void require_file(const std::string& path, const std::string& stage_hint) {
    if (!fs::exists(path)) {
        throw ConfigError("missing input '" + path + "'; " + stage_hint);
    }
}

std::map<std::string, double> read_theta_file(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto id_col = table.column("argument_id", path);
    const auto theta_col = table.column("theta", path);
    std::map<std::string, double> theta;
    for (const auto& row : table.rows) {
        try {
            theta[row.fields[id_col]] = std::stod(row.fields[theta_col]);
        } catch (...) {
            throw IoError(path + ":" + std::to_string(row.line) + ": bad theta value");
        }
    }
    return theta;
}

void write_theta_file(const std::string& path, const std::map<std::string, double>& theta) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [id, value] : theta) {
        rows.push_back({id, csv::format_double(value)});
    }
    csv::write_file(path, {"argument_id", "theta"}, rows);
}

std::map<judge::ScriptedBackend::Key, std::string> read_script_file(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto pair_col = table.column("pair_id", path);
    const auto dim_col = table.column("dimension", path);
    const auto run_col = table.column("run_id", path);
    const auto response_col = table.column("response", path);
    std::map<judge::ScriptedBackend::Key, std::string> script;
    for (const auto& row : table.rows) {
        script[{row.fields[pair_col], parse_dimension(row.fields[dim_col]),
                std::stoi(row.fields[run_col])}] = row.fields[response_col];
    }
    return script;
}

std::vector<ComparisonPair> read_pairs_file(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto id_col = table.column("pair_id", path);
    const auto topic_col = table.column("topic_id", path);
    const auto a_col = table.column("arg_a", path);
    const auto b_col = table.column("arg_b", path);
    std::vector<ComparisonPair> pairs;
    for (const auto& row : table.rows) {
        pairs.push_back(ComparisonPair{row.fields[id_col], row.fields[topic_col],
                                       row.fields[a_col], row.fields[b_col]});
    }
    return pairs;
}

// Preset lookup: named judge configurations for the open-weight models the
// reference results cover.
void apply_preset(judge::JudgeConfig& config, const std::string& preset,
                  const std::string& presets_file) {
    const auto doc = toml::Document::parse_file(presets_file);
    const std::string prefix = "preset." + preset + ".";
    if (auto v = doc.get_string(prefix + "model")) {
        config.model_name = *v;
    } else {
        throw ConfigError("unknown judge preset '" + preset + "' in " + presets_file);
    }
    if (auto v = doc.get_double(prefix + "temperature")) config.temperature = *v;
    if (auto v = doc.get_int(prefix + "runs")) config.runs = static_cast<int>(*v);
}

struct GlobalOptions {
    std::string templates_dir;
    std::optional<toml::Document> config;
};

// Config-file values act as defaults; flags override them.
template <typename T, typename Getter>
void config_default(const GlobalOptions& options, const std::string& key, T& target,
                    Getter getter) {
    if (!options.config) return;
    if (auto v = (*options.config.*getter)(key)) target = static_cast<T>(*v);
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Comparative-judgment ranking and evaluation pipeline"};
    app.require_subcommand(1);

    GlobalOptions global;
    std::string config_path;
    app.add_option("--config", config_path, "TOML config file with stage defaults");
    app.add_option("--templates", global.templates_dir,
                   "Prompt template directory (default: built-in path or "
                   "ARGRANK_TEMPLATES)");

    // Pre-scan for --config so its values can seed defaults below.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            global.config = toml::Document::parse_file(argv[i + 1]);
        }
    }
    auto cfg_int = [&](const std::string& key, auto& target) {
        config_default(global, key, target, &toml::Document::get_int);
    };
    auto cfg_double = [&](const std::string& key, auto& target) {
        config_default(global, key, target, &toml::Document::get_double);
    };
    auto cfg_string = [&](const std::string& key, std::string& target) {
        config_default(global, key, target, &toml::Document::get_string);
    };

    auto templates_dir = [&] {
        return global.templates_dir.empty() ? prompts::TemplateSet::default_dir()
                                            : global.templates_dir;
    };

    // ----- ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Import a source corpus or validate a canonical one");
    std::string ingest_webis, ingest_mapping, ingest_canonical, ingest_out;
    ingest->add_option("--webis", ingest_webis, "Source corpus directory");
    ingest->add_option("--mapping", ingest_mapping, "Column mapping TOML");
    ingest->add_option("--canonical", ingest_canonical, "Canonical corpus directory to validate");
    ingest->add_option("--out", ingest_out, "Output directory for canonical files");

    // ----- sample ---------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "Generate circulant comparison pairs");
    std::string sample_corpus, sample_out;
    std::vector<int> sample_offsets;
    int sample_budget = 0;
    std::uint64_t sample_seed = 0;
    bool sample_no_shuffle = false;
    cfg_int("sample.seed", sample_seed);
    sample->add_option("--corpus", sample_corpus, "Canonical corpus directory")->required();
    sample->add_option("--out", sample_out, "Output pairs CSV")->required();
    sample->add_option("--offsets", sample_offsets, "Ring offsets, e.g. 1 2 3");
    sample->add_option("--budget", sample_budget, "Total pair budget across each topic");
    sample->add_option("--seed", sample_seed, "Shuffle seed");
    sample->add_flag("--no-shuffle", sample_no_shuffle, "Keep corpus order");

    // ----- prompts render -------------------------------------------------
    auto* prompts_cmd = app.add_subcommand("prompts", "Prompt utilities");
    auto* render = prompts_cmd->add_subcommand("render", "Render prompts as JSON lines");
    std::string render_corpus, render_pairs, render_out;
    std::string render_strategy = "zero", render_dimension = "all";
    bool render_no_exclude = false;
    render->add_option("--corpus", render_corpus, "Canonical corpus directory")->required();
    render->add_option("--pairs", render_pairs, "Pairs CSV (defaults to corpus pairs)");
    render->add_option("--strategy", render_strategy, "zero|few|cot");
    render->add_option("--dimension", render_dimension, "logic|rhetoric|dialectic|all");
    render->add_option("--out", render_out, "Output JSONL")->required();
    render->add_flag("--no-exclude", render_no_exclude,
                     "Allow the evaluated pair among its own few-shot exemplars");

    // ----- judge run --------------------------------------------------------
    auto* judge_cmd = app.add_subcommand("judge", "Judge operations");
    auto* judge_run = judge_cmd->add_subcommand("run", "Run a judgment campaign");
    std::string jr_corpus, jr_pairs, jr_store, jr_backend = "oracle";
    std::string jr_strategy = "zero", jr_dimension = "all";
    std::string jr_endpoint, jr_model, jr_theta, jr_script, jr_preset;
    std::string jr_presets_file = std::string(ARGRANK_DATA_DIR) + "/judge_presets.toml";
    double jr_temperature = 1.0, jr_tie_band = 0.0, jr_invalid_rate = 0.1;
    int jr_runs = 3, jr_max_in_flight = 8, jr_max_retries = 3, jr_timeout_ms = 30000;
    std::uint64_t jr_seed = 0;
    std::size_t jr_max_new = 0;
    bool jr_bt_sampled = false, jr_no_exclude = false;
    cfg_string("judge.endpoint_url", jr_endpoint);
    cfg_string("judge.model", jr_model);
    cfg_string("judge.backend", jr_backend);
    cfg_double("judge.temperature", jr_temperature);
    cfg_int("judge.runs", jr_runs);
    cfg_int("judge.max_in_flight", jr_max_in_flight);
    cfg_int("judge.max_retries", jr_max_retries);
    cfg_int("judge.timeout_ms", jr_timeout_ms);
    cfg_int("judge.seed", jr_seed);
    judge_run->add_option("--corpus", jr_corpus, "Canonical corpus directory")->required();
    judge_run->add_option("--pairs", jr_pairs, "Pairs CSV (defaults to corpus pairs)");
    judge_run->add_option("--store", jr_store, "Judgment store JSONL path")->required();
    judge_run->add_option("--strategy", jr_strategy, "zero|few|cot");
    judge_run->add_option("--dimension", jr_dimension, "logic|rhetoric|dialectic|all");
    judge_run->add_option("--backend", jr_backend, "http|oracle|scripted|noisy");
    judge_run->add_option("--endpoint", jr_endpoint, "Chat-completions base URL (http)");
    judge_run->add_option("--model", jr_model, "Model name (http)");
    judge_run->add_option("--preset", jr_preset, "Named judge preset");
    judge_run->add_option("--presets-file", jr_presets_file, "Preset definitions TOML");
    judge_run->add_option("--temperature", jr_temperature, "Sampling temperature");
    judge_run->add_option("--runs", jr_runs, "Independent runs per pair");
    judge_run->add_option("--max-in-flight", jr_max_in_flight, "Concurrent judge calls");
    judge_run->add_option("--max-retries", jr_max_retries, "Attempts per judgment");
    judge_run->add_option("--timeout-ms", jr_timeout_ms, "HTTP timeout");
    judge_run->add_option("--seed", jr_seed, "Base seed for sampled judges");
    judge_run->add_option("--theta", jr_theta, "Hidden-truth CSV for oracle/noisy backends");
    judge_run->add_option("--tie-band", jr_tie_band, "Oracle tie band");
    judge_run->add_option("--invalid-rate", jr_invalid_rate, "Noisy backend bad-output rate");
    judge_run->add_option("--script", jr_script, "Scripted responses CSV");
    judge_run->add_option("--max-new", jr_max_new, "Stop after this many new judgments");
    judge_run->add_flag("--bt-sampled", jr_bt_sampled, "Sample oracle labels from BT");
    judge_run->add_flag("--no-exclude", jr_no_exclude,
                        "Allow the evaluated pair among its own few-shot exemplars");

    // ----- aggregate --------------------------------------------------------
    auto* aggregate = app.add_subcommand("aggregate", "Majority-vote labels per pair");
    std::string agg_store, agg_out;
    int agg_runs = 3;
    cfg_int("judge.runs", agg_runs);
    aggregate->add_option("--store", agg_store, "Judgment store JSONL")->required();
    aggregate->add_option("--out", agg_out, "Output labels CSV")->required();
    aggregate->add_option("--runs", agg_runs, "Expected runs per pair");

    // ----- fit --------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "Fit Bradley-Terry scores per topic and dimension");
    std::string fit_corpus, fit_labels, fit_out;
    bt::BTConfig bt_config;
    cfg_double("bt.epsilon", bt_config.epsilon);
    cfg_int("bt.max_iter", bt_config.max_iter);
    cfg_double("bt.tol", bt_config.tol);
    fit->add_option("--corpus", fit_corpus, "Canonical corpus directory")->required();
    fit->add_option("--labels", fit_labels, "Aggregated labels CSV")->required();
    fit->add_option("--out", fit_out, "Output fits CSV")->required();
    fit->add_option("--epsilon", bt_config.epsilon, "Smoothing pseudo-count");
    fit->add_option("--max-iter", bt_config.max_iter, "Iteration cap");
    fit->add_option("--tol", bt_config.tol, "Relative log-likelihood tolerance");

    // ----- evaluate -----------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "Score LLM outputs against expert gold");
    std::string eval_corpus, eval_fits, eval_labels, eval_prefix;
    evaluate->add_option("--corpus", eval_corpus, "Canonical corpus directory")->required();
    evaluate->add_option("--fits", eval_fits, "Fitted scores CSV")->required();
    evaluate->add_option("--labels", eval_labels, "Aggregated labels CSV")->required();
    evaluate->add_option("--out-prefix", eval_prefix, "Writes <prefix>.csv and <prefix>.md");

    // ----- stability -----------------------------------------------------------
    auto* stability = app.add_subcommand("stability", "Run-variability statistics for a store");
    std::string stab_store, stab_prefix;
    int stab_runs = 3;
    cfg_int("judge.runs", stab_runs);
    stability->add_option("--store", stab_store, "Judgment store JSONL")->required();
    stability->add_option("--runs", stab_runs, "Runs per pair");
    stability->add_option("--out-prefix", stab_prefix, "Writes <prefix>.csv and <prefix>.md");

    // ----- simulate -----------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus and recovery report");
    synth::SynthSpec spec;
    std::string sim_out;
    std::vector<int> sim_offsets;
    int sim_budget = 0;
    bool sim_bt_sampled = false;
    simulate->add_option("--topics", spec.n_topics, "Topic count");
    simulate->add_option("--args", spec.n_args_per_topic, "Arguments per topic");
    simulate->add_option("--seed", spec.seed, "Generation seed");
    simulate->add_option("--offsets", sim_offsets, "Ring offsets");
    simulate->add_option("--budget", sim_budget, "Pair budget per topic");
    simulate->add_option("--tie-band", spec.tie_band, "Oracle tie band");
    simulate->add_option("--runs", spec.runs, "Judge runs in the recovery experiment");
    simulate->add_flag("--bt-sampled", sim_bt_sampled, "Sampled (noisy) oracle judge");
    simulate->add_flag("--refit-gold", spec.refit_gold_scores,
                       "Gold scores from a BT re-fit instead of hidden truth");
    simulate->add_option("--out", sim_out, "Output directory")->required();

    // ----- report -----------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "Render result tables and score exports");
    std::string rep_results, rep_variability, rep_fits, rep_corpus, rep_prefix;
    report_cmd->add_option("--results", rep_results, "Reference or own results CSV");
    report_cmd->add_option("--variability", rep_variability, "Reference variability CSV");
    report_cmd->add_option("--fits", rep_fits, "Fitted scores CSV for distribution export");
    report_cmd->add_option("--corpus", rep_corpus, "Canonical corpus (expert scores)");
    report_cmd->add_option("--out-prefix", rep_prefix, "Output file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        // ---- ingest ----
        if (*ingest) {
            if (!ingest_canonical.empty()) {
                const auto bundle = io::load_canonical(ingest_canonical);
                const auto s = io::stats(bundle);
                std::printf("topics: %zu\ntexts: %zu\nargumentative: %zu\npairs: %zu\n"
                            "gold labels: %zu\ngold scores: %zu\ndigest: %s\n",
                            s.n_topics, s.n_texts, s.n_argumentative, s.n_pairs,
                            s.n_gold_labels, s.n_gold_scores, bundle.content_digest.c_str());
                return kExitOk;
            }
            if (ingest_webis.empty() || ingest_out.empty()) {
                throw ConfigError("ingest needs either --canonical DIR or --webis DIR --out DIR");
            }
            io::WebisMapping mapping;
            if (!ingest_mapping.empty()) mapping = io::load_mapping(ingest_mapping);
            const auto bundle = io::import_webis(ingest_webis, mapping, ingest_out);
            const auto s = io::stats(bundle);
            std::printf("topics: %zu\ntexts: %zu\nargumentative: %zu\npairs: %zu\n"
                        "gold labels: %zu\ngold scores: %zu\ndigest: %s\n",
                        s.n_topics, s.n_texts, s.n_argumentative, s.n_pairs,
                        s.n_gold_labels, s.n_gold_scores, bundle.content_digest.c_str());
            RunManifest manifest(ingest_out);
            manifest.set_meta("corpus_digest", bundle.content_digest);
            for (const char* name : {"topics.csv", "arguments.csv", "pairs.csv",
                                     "gold_labels.csv", "gold_scores.csv"}) {
                manifest.record("ingest", name);
            }
            manifest.save();
            return kExitOk;
        }

        // ---- sample ----
        if (*sample) {
            const auto bundle = io::load_canonical(sample_corpus);
            sampling::SamplingPlan plan;
            plan.seed = sample_seed;
            plan.shuffle = !sample_no_shuffle;

            std::vector<std::vector<std::string>> rows;
            for (const auto& topic : bundle.corpus.topics) {
                std::vector<Argument> args;
                for (const auto& arg : bundle.corpus.arguments) {
                    if (arg.topic_id == topic.id && arg.is_argumentative) args.push_back(arg);
                }
                if (args.size() < 2) continue;
                if (!sample_offsets.empty()) {
                    plan.offsets = sample_offsets;
                } else if (sample_budget > 0) {
                    plan.offsets =
                        sampling::plan_for_budget(static_cast<int>(args.size()), sample_budget)
                            .offsets;
                } else {
                    plan.offsets = {1};
                }
                for (const auto& pair : sampling::circulant_pairs(args, plan)) {
                    rows.push_back({pair.pair_id, pair.topic_id, pair.arg_a, pair.arg_b});
                }
            }
            csv::write_file(sample_out, {"pair_id", "topic_id", "arg_a", "arg_b"}, rows);
            RunManifest manifest(fs::path(sample_out).parent_path().string());
            manifest.set_meta("corpus_digest", bundle.content_digest);
            manifest.set_meta("sample_seed", std::to_string(sample_seed));
            manifest.record("sample", fs::path(sample_out).filename().string());
            manifest.save();
            std::printf("pairs: %zu\n", rows.size());
            return kExitOk;
        }

        // ---- prompts render ----
        if (*render) {
            const auto bundle = io::load_canonical(render_corpus);
            const auto templates = prompts::TemplateSet::load(templates_dir());
            const auto strategy = prompts::parse_strategy(render_strategy);
            const auto dims = parse_dimension_arg(render_dimension);
            const auto pairs = render_pairs.empty() ? bundle.corpus.pairs
                                                    : read_pairs_file(render_pairs);

            std::optional<prompts::FewShotSelector> selector;
            if (strategy == prompts::Strategy::FewShot) {
                selector.emplace(bundle.corpus, bundle.gold);
            }
            std::ofstream out(render_out, std::ios::binary);
            if (!out) throw IoError("cannot write " + render_out);
            for (const auto& pair : pairs) {
                const Argument* a = bundle.corpus.find_argument(pair.arg_a);
                const Argument* b = bundle.corpus.find_argument(pair.arg_b);
                if (a == nullptr || b == nullptr) {
                    throw ValidationError("pair '" + pair.pair_id +
                                          "' references unknown arguments");
                }
                for (const auto dim : dims) {
                    std::optional<prompts::FewShotBundle> bundle_opt;
                    if (selector) {
                        bundle_opt = selector->bundle_for(
                            pair.topic_id, dim,
                            render_no_exclude ? std::nullopt
                                              : std::optional<std::string>(pair.pair_id));
                    }
                    const auto prompt =
                        templates.render(strategy, dim, a->text, b->text, bundle_opt);
                    json line;
                    line["pair_id"] = pair.pair_id;
                    line["dimension"] = dimension_name(dim);
                    line["strategy"] = prompts::strategy_name(strategy);
                    line["system"] = prompt.system;
                    line["user"] = prompt.user;
                    line["allowed_labels"] = prompt.allowed_labels;
                    line["prompt_hash"] = prompt.prompt_hash;
                    out << line.dump() << '\n';
                }
            }
            return kExitOk;
        }

        // ---- judge run ----
        if (*judge_run) {
            const auto bundle = io::load_canonical(jr_corpus);
            const auto templates = prompts::TemplateSet::load(templates_dir());

            judge::JudgeConfig config;
            config.endpoint_url = jr_endpoint;
            config.model_name = jr_model;
            config.temperature = jr_temperature;
            config.max_in_flight = jr_max_in_flight;
            config.max_retries = jr_max_retries;
            config.timeout_ms = jr_timeout_ms;
            config.runs = jr_runs;
            config.base_seed = jr_seed;
            if (jr_max_new > 0) config.max_new_judgments = jr_max_new;
            if (!jr_preset.empty()) {
                // Explicit flags take precedence over preset values.
                judge::JudgeConfig preset_values = config;
                apply_preset(preset_values, jr_preset, jr_presets_file);
                if (judge_run->get_option("--model")->count() == 0) {
                    config.model_name = preset_values.model_name;
                }
                if (judge_run->get_option("--temperature")->count() == 0) {
                    config.temperature = preset_values.temperature;
                }
                if (judge_run->get_option("--runs")->count() == 0) {
                    config.runs = preset_values.runs;
                }
            }

            std::unique_ptr<judge::JudgeBackend> backend;
            if (jr_backend == "http") {
                config.backend = judge::JudgeConfig::Backend::Http;
                backend = std::make_unique<judge::HttpBackend>(config);
            } else if (jr_backend == "oracle" || jr_backend == "noisy") {
                judge::OracleParams params;
                require_file(jr_theta, "oracle backends need --theta (see `simulate`)");
                params.theta_star = read_theta_file(jr_theta);
                params.tie_band = jr_tie_band;
                params.noise = jr_bt_sampled ? judge::OracleParams::Noise::BTSampled
                                             : judge::OracleParams::Noise::Deterministic;
                if (jr_backend == "oracle") {
                    config.backend = judge::JudgeConfig::Backend::Oracle;
                    backend = std::make_unique<judge::OracleBackend>(params, jr_seed);
                } else {
                    config.backend = judge::JudgeConfig::Backend::Noisy;
                    backend = std::make_unique<judge::NoisyBackend>(params, jr_seed,
                                                                    jr_invalid_rate);
                }
            } else if (jr_backend == "scripted") {
                config.backend = judge::JudgeConfig::Backend::Scripted;
                require_file(jr_script, "scripted backend needs --script");
                backend = std::make_unique<judge::ScriptedBackend>(read_script_file(jr_script));
            } else {
                throw ConfigError("unknown backend '" + jr_backend + "'");
            }

            judge::CampaignSpec campaign;
            campaign.strategy = prompts::parse_strategy(jr_strategy);
            campaign.dimensions = parse_dimension_arg(jr_dimension);
            campaign.fewshot_exclude_evaluated = !jr_no_exclude;

            const auto pairs =
                jr_pairs.empty() ? bundle.corpus.pairs : read_pairs_file(jr_pairs);
            judge::JudgmentStore store(jr_store);
            const auto summary = judge::run_campaign(
                pairs, campaign, bundle.corpus, templates,
                campaign.strategy == prompts::Strategy::FewShot ? &bundle.gold : nullptr,
                *backend, config, store);

            std::printf("new: %zu\ncached: %zu\nfailed: %zu\n", summary.new_judgments,
                        summary.cached, summary.failed);
            for (const auto& failure : summary.failures) {
                std::fprintf(stderr, "failure: %s\n", failure.c_str());
            }
            if (summary.budget_exhausted) std::printf("stopped: budget exhausted\n");

            const auto store_dir = fs::path(jr_store).parent_path().string();
            RunManifest manifest(store_dir.empty() ? "." : store_dir);
            manifest.set_meta("corpus_digest", bundle.content_digest);
            manifest.set_meta("strategy", prompts::strategy_name(campaign.strategy));
            manifest.set_meta("judge_id", backend->id());
            manifest.set_meta("seed", std::to_string(jr_seed));
            manifest.record("judge", fs::path(jr_store).filename().string());
            manifest.save();
            return summary.failed == 0 ? kExitOk : kExitJudge;
        }

        // ---- aggregate ----
        if (*aggregate) {
            require_file(agg_store, "run `argrank judge run` first");
            judge::JudgmentStore store(agg_store);
            const auto labels = judge::aggregate_majority(store.judgments(), agg_runs);
            io::write_labels(agg_out, labels);
            std::printf("labels: %zu\n", labels.size());
            return kExitOk;
        }

        // ---- fit ----
        if (*fit) {
            require_file(fit_labels, "run `argrank aggregate` first");
            const auto bundle = io::load_canonical(fit_corpus);
            const auto labels = io::read_labels(fit_labels);
            const auto result = bt::fit_all(labels, bundle.corpus, bt_config);
            for (const auto& warning : result.warnings) {
                std::fprintf(stderr, "warning: %s\n", warning.c_str());
            }
            io::write_fits(fit_out, result.fits);
            std::printf("fits: %zu\n", result.fits.size());
            return kExitOk;
        }

        // ---- evaluate ----
        if (*evaluate) {
            require_file(eval_fits, "missing stage: run `argrank fit` first");
            require_file(eval_labels, "missing stage: run `argrank aggregate` first");
            const auto bundle = io::load_canonical(eval_corpus);
            const auto fits = io::read_fits(eval_fits);
            const auto labels = io::read_labels(eval_labels);
            const auto result = metrics::evaluate(fits, labels, bundle.gold, bundle.corpus);

            const std::string markdown = report::render_metric_report_markdown(result);
            std::fputs(markdown.c_str(), stdout);
            if (!eval_prefix.empty()) {
                report::write_metric_report_csv(eval_prefix + ".csv", result);
                std::ofstream md(eval_prefix + ".md", std::ios::binary);
                if (!md) throw IoError("cannot write " + eval_prefix + ".md");
                md << markdown;
            }
            return kExitOk;
        }

        // ---- stability ----
        if (*stability) {
            require_file(stab_store, "run `argrank judge run` first");
            judge::JudgmentStore store(stab_store);
            std::map<std::pair<std::string, Dimension::Kind>, std::vector<Label>> grouped;
            for (const auto& j : store.judgments()) {
                grouped[{j.pair_id, j.dimension}].push_back(j.label);
            }
            std::vector<std::vector<Label>> items;
            for (auto& [key, labels] : grouped) {
                if (labels.size() == static_cast<std::size_t>(stab_runs)) {
                    items.push_back(labels);
                }
            }
            const auto result = metrics::variability_classify(items, stab_runs);
            const std::string markdown = report::render_variability_markdown(result);
            std::fputs(markdown.c_str(), stdout);
            if (!stab_prefix.empty()) {
                report::write_variability_csv(stab_prefix + ".csv", result);
                std::ofstream md(stab_prefix + ".md", std::ios::binary);
                if (!md) throw IoError("cannot write " + stab_prefix + ".md");
                md << markdown;
            }
            return kExitOk;
        }

        // ---- simulate ----
        if (*simulate) {
            if (!sim_offsets.empty()) {
                spec.plan.offsets = sim_offsets;
            } else if (sim_budget > 0) {
                spec.budget_per_topic = sim_budget;
            }
            spec.noise = sim_bt_sampled ? judge::OracleParams::Noise::BTSampled
                                        : judge::OracleParams::Noise::Deterministic;

            const auto result = synth::generate(spec);
            io::write_canonical(sim_out, result.bundle.corpus, result.bundle.gold);
            write_theta_file(sim_out + "/theta_star.csv", result.theta_star);

            const auto recovery = synth::recovery_experiment(spec);
            std::vector<std::vector<std::string>> rows;
            for (const auto dim : all_dimensions()) {
                auto rho = recovery.spearman_vs_truth.find(dim);
                auto tau = recovery.kendall_vs_truth.find(dim);
                rows.push_back({dimension_name(dim),
                                rho != recovery.spearman_vs_truth.end()
                                    ? csv::format_double(rho->second)
                                    : "NA",
                                tau != recovery.kendall_vs_truth.end()
                                    ? csv::format_double(tau->second)
                                    : "NA"});
            }
            rows.push_back({"mean", csv::format_double(recovery.mean_spearman),
                            csv::format_double(recovery.mean_kendall)});
            csv::write_file(sim_out + "/recovery.csv",
                            {"dimension", "spearman_vs_truth", "kendall_vs_truth"}, rows);

            RunManifest manifest(sim_out);
            manifest.set_meta("seed", std::to_string(spec.seed));
            for (const char* name :
                 {"topics.csv", "arguments.csv", "pairs.csv", "gold_labels.csv",
                  "gold_scores.csv", "theta_star.csv", "recovery.csv"}) {
                manifest.record("simulate", name);
            }
            manifest.save();
            std::printf("recovery spearman: %.4f kendall: %.4f\n", recovery.mean_spearman,
                        recovery.mean_kendall);
            return kExitOk;
        }

        // ---- report ----
        if (*report_cmd) {
            bool did_anything = false;
            if (!rep_results.empty()) {
                require_file(rep_results, "results CSV not found");
                const auto rows = report::read_reference_results(rep_results);
                const std::string markdown = report::render_reference_results_markdown(rows);
                std::fputs(markdown.c_str(), stdout);
                if (!rep_prefix.empty()) {
                    std::ofstream md(rep_prefix + "_results.md", std::ios::binary);
                    if (!md) throw IoError("cannot write " + rep_prefix + "_results.md");
                    md << markdown;
                }
                did_anything = true;
            }
            if (!rep_variability.empty()) {
                require_file(rep_variability, "variability CSV not found");
                const auto rows = report::read_reference_variability(rep_variability);
                const std::string markdown =
                    report::render_reference_variability_markdown(rows);
                std::fputs(markdown.c_str(), stdout);
                if (!rep_prefix.empty()) {
                    std::ofstream md(rep_prefix + "_variability.md", std::ios::binary);
                    if (!md) throw IoError("cannot write " + rep_prefix + "_variability.md");
                    md << markdown;
                }
                did_anything = true;
            }
            if (!rep_fits.empty()) {
                require_file(rep_fits, "missing stage: run `argrank fit` first");
                if (rep_corpus.empty()) {
                    throw ConfigError("score distribution export needs --corpus");
                }
                const auto bundle = io::load_canonical(rep_corpus);
                const auto fits = io::read_fits(rep_fits);
                const std::string out = rep_prefix.empty()
                                            ? std::string("score_distribution.csv")
                                            : rep_prefix + "_distribution.csv";
                report::write_score_distribution_csv(out, fits, bundle.gold);
                std::printf("wrote %s\n", out.c_str());
                did_anything = true;
            }
            if (!did_anything) {
                throw ConfigError("report needs --results, --variability or --fits");
            }
            return kExitOk;
        }
    } catch (const JudgeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitJudge;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace argrank::cli
