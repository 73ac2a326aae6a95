#include "argrank/judge.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "argrank/errors.hpp"
#include "argrank/rng.hpp"

namespace argrank::judge {

using nlohmann::json;

void JudgeConfig::validate() const {
    if (temperature < 0.0) throw ConfigError("judge: temperature must be >= 0");
    if (runs < 1) throw ConfigError("judge: runs must be >= 1");
    if (max_in_flight < 1) throw ConfigError("judge: max_in_flight must be >= 1");
    if (max_retries < 1) throw ConfigError("judge: max_retries must be >= 1");
    if (backend == Backend::Http && endpoint_url.empty()) {
        throw ConfigError("judge: http backend requires endpoint_url");
    }
}

namespace {

std::string rng_key(const ComparisonPair& pair, Dimension::Kind dimension, int run_id) {
    return pair.pair_id + '\x1f' + dimension_name(dimension) + '\x1f' +
           std::to_string(run_id);
}

double oracle_theta(const OracleParams& params, const std::string& argument_id) {
    auto it = params.theta_star.find(argument_id);
    if (it == params.theta_star.end()) {
        throw ValidationError("oracle judge: no theta for argument '" + argument_id + "'");
    }
    return it->second;
}

}  // namespace

Label oracle_judge(const ComparisonPair& pair, Dimension::Kind dimension,
                   const OracleParams& params, std::uint64_t seed, int run_id) {
    const double diff = oracle_theta(params, pair.arg_a) - oracle_theta(params, pair.arg_b);
    if (params.noise == OracleParams::Noise::Deterministic) {
        if (diff >= params.tie_band) return Label::A;
        if (diff <= -params.tie_band) return Label::B;
        return Label::Tie;
    }
    if (std::fabs(diff) < params.tie_band) return Label::Tie;
    KeyedRng rng(seed, rng_key(pair, dimension, run_id));
    const double p_a = 1.0 / (1.0 + std::exp(-diff));
    return rng.next_unit() < p_a ? Label::A : Label::B;
}

std::string OracleBackend::complete(const JudgeRequest& request, int attempt) {
    (void)attempt;
    return label_name(
        oracle_judge(*request.pair, request.dimension, params_, seed_, request.run_id));
}

std::string ScriptedBackend::complete(const JudgeRequest& request, int attempt) {
    (void)attempt;
    auto it = responses_.find({request.pair->pair_id, request.dimension, request.run_id});
    return it == responses_.end() ? default_response_ : it->second;
}

std::string NoisyBackend::complete(const JudgeRequest& request, int attempt) {
    KeyedRng rng(seed_, rng_key(*request.pair, request.dimension, request.run_id) +
                            "\x1f" "attempt" + std::to_string(attempt));
    if (rng.next_unit() < invalid_rate_) {
        return "I believe Argument A is the stronger one.";
    }
    return label_name(
        oracle_judge(*request.pair, request.dimension, params_, seed_, request.run_id));
}

Judgment judge_one(JudgeBackend& backend, const JudgeRequest& request,
                   const JudgeConfig& config) {
    std::string last_raw;
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        const auto start = std::chrono::steady_clock::now();
        last_raw = backend.complete(request, attempt);
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);

        const auto label = parse_label_lenient(last_raw);
        if (!label) continue;

        Judgment judgment;
        judgment.pair_id = request.pair->pair_id;
        judgment.dimension = request.dimension;
        judgment.run_id = request.run_id;
        judgment.judge_id = backend.id();
        judgment.label = *label;
        judgment.raw_response = last_raw;
        judgment.prompt_hash = request.prompt.prompt_hash;
        if (backend.records_latency()) judgment.latency_ms = elapsed.count();
        return judgment;
    }
    throw JudgeError("unparseable judge output after " + std::to_string(config.max_retries) +
                         " attempts for pair '" + request.pair->pair_id + "'",
                     last_raw);
}

Label majority_vote(const std::vector<Label>& labels) {
    if (labels.empty()) throw ValidationError("majority_vote: empty input");
    std::size_t counts[3] = {0, 0, 0};
    for (const Label label : labels) counts[static_cast<std::size_t>(label)] += 1;
    const std::size_t best = *std::max_element(counts, counts + 3);
    int winners = 0;
    Label winner = Label::Tie;
    for (std::size_t i = 0; i < 3; ++i) {
        if (counts[i] == best) {
            ++winners;
            winner = static_cast<Label>(i);
        }
    }
    return winners == 1 ? winner : Label::Tie;
}

// ---------------------------------------------------------------------------
// JudgmentStore
// ---------------------------------------------------------------------------

std::string JudgmentStore::to_json_line(const Judgment& j) {
    json obj;
    obj["pair_id"] = j.pair_id;
    obj["dimension"] = dimension_name(j.dimension);
    obj["run_id"] = j.run_id;
    obj["judge_id"] = j.judge_id;
    obj["label"] = label_name(j.label);
    obj["raw_response"] = j.raw_response;
    obj["prompt_hash"] = j.prompt_hash;
    if (j.latency_ms) obj["latency_ms"] = *j.latency_ms;
    return obj.dump();
}

Judgment JudgmentStore::from_json_line(const std::string& line, std::size_t line_no,
                                       const std::string& file) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::exception& e) {
        throw IoError(file + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
    }
    try {
        Judgment j;
        j.pair_id = obj.at("pair_id").get<std::string>();
        j.dimension = parse_dimension(obj.at("dimension").get<std::string>());
        j.run_id = obj.at("run_id").get<int>();
        j.judge_id = obj.at("judge_id").get<std::string>();
        j.label = parse_label(obj.at("label").get<std::string>());
        j.raw_response = obj.at("raw_response").get<std::string>();
        j.prompt_hash = obj.at("prompt_hash").get<std::string>();
        if (obj.contains("latency_ms")) j.latency_ms = obj["latency_ms"].get<std::int64_t>();
        if (j.run_id < 1) {
            throw ValidationError("run_id must be >= 1");
        }
        return j;
    } catch (const json::exception& e) {
        throw IoError(file + ":" + std::to_string(line_no) + ": bad judgment: " + e.what());
    } catch (const Error& e) {
        throw IoError(file + ":" + std::to_string(line_no) + ": bad judgment: " + e.what());
    }
}

JudgmentStore::JudgmentStore(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;  // fresh store
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Judgment j = from_json_line(line, line_no, path_);
        const auto key = std::make_tuple(j.pair_id, j.dimension, j.run_id, j.judge_id);
        if (!unique_keys_.insert(key).second) {
            throw ValidationError(path_ + ":" + std::to_string(line_no) +
                                  ": duplicate judgment for pair '" + j.pair_id + "'");
        }
        hash_keys_.insert({j.prompt_hash, j.run_id, j.judge_id});
        judgments_.push_back(std::move(j));
    }
}

bool JudgmentStore::contains(const std::string& prompt_hash, int run_id,
                             const std::string& judge_id) const {
    return hash_keys_.contains({prompt_hash, run_id, judge_id});
}

void JudgmentStore::append(const Judgment& judgment) {
    const auto key = std::make_tuple(judgment.pair_id, judgment.dimension,
                                     judgment.run_id, judgment.judge_id);
    if (unique_keys_.contains(key)) {
        throw ValidationError("judgment store: duplicate judgment for pair '" +
                              judgment.pair_id + "' run " + std::to_string(judgment.run_id));
    }
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to judgment store " + path_);
    out << to_json_line(judgment) << '\n';
    out.flush();
    if (!out) throw IoError("write failed on judgment store " + path_);

    unique_keys_.insert(key);
    hash_keys_.insert({judgment.prompt_hash, judgment.run_id, judgment.judge_id});
    judgments_.push_back(judgment);
}

// ---------------------------------------------------------------------------
// run_campaign
// ---------------------------------------------------------------------------

namespace {

struct Task {
    const ComparisonPair* pair;
    Dimension::Kind dimension;
    const prompts::RenderedPrompt* prompt;
    int run_id;
};

struct TaskResult {
    std::optional<Judgment> judgment;
    bool cached = false;
    std::optional<std::string> error;
};

}  // namespace

CampaignSummary run_campaign(const std::vector<ComparisonPair>& pairs,
                             const CampaignSpec& spec, const Corpus& corpus,
                             const prompts::TemplateSet& templates,
                             const GoldStandard* gold_for_fewshot,
                             JudgeBackend& backend, const JudgeConfig& config,
                             JudgmentStore& store) {
    config.validate();
    if (spec.strategy == prompts::Strategy::FewShot && gold_for_fewshot == nullptr) {
        throw ConfigError("run_campaign: few-shot strategy needs a gold standard");
    }

    // Render every (pair, dimension) prompt up front; runs share the prompt.
    std::optional<prompts::FewShotSelector> selector;
    if (spec.strategy == prompts::Strategy::FewShot) {
        selector.emplace(corpus, *gold_for_fewshot);
    }
    std::vector<prompts::RenderedPrompt> rendered;
    rendered.reserve(pairs.size() * spec.dimensions.size());
    for (const auto& pair : pairs) {
        const Argument* arg_a = corpus.find_argument(pair.arg_a);
        const Argument* arg_b = corpus.find_argument(pair.arg_b);
        if (arg_a == nullptr || arg_b == nullptr) {
            throw ValidationError("run_campaign: pair '" + pair.pair_id +
                                  "' references unknown arguments");
        }
        for (const Dimension::Kind dim : spec.dimensions) {
            std::optional<prompts::FewShotBundle> bundle;
            if (selector) {
                bundle = selector->bundle_for(
                    pair.topic_id, dim,
                    spec.fewshot_exclude_evaluated
                        ? std::optional<std::string>(pair.pair_id)
                        : std::nullopt);
            }
            rendered.push_back(
                templates.render(spec.strategy, dim, arg_a->text, arg_b->text, bundle));
        }
    }

    std::vector<Task> tasks;
    tasks.reserve(rendered.size() * static_cast<std::size_t>(config.runs));
    {
        std::size_t prompt_index = 0;
        for (const auto& pair : pairs) {
            for (const Dimension::Kind dim : spec.dimensions) {
                const prompts::RenderedPrompt* prompt = &rendered[prompt_index++];
                for (int run = 1; run <= config.runs; ++run) {
                    tasks.push_back(Task{&pair, dim, prompt, run});
                }
            }
        }
    }

    CampaignSummary summary;
    const std::string judge_id = backend.id();

    std::mutex mu;
    std::map<std::size_t, TaskResult> pending;
    std::size_t next_task = 0;
    std::size_t next_commit = 0;
    bool stop = false;  // budget exhausted or store failure
    std::exception_ptr store_failure;

    auto worker = [&] {
        while (true) {
            std::size_t index;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (stop || next_task >= tasks.size()) return;
                index = next_task++;
            }
            const Task& task = tasks[index];

            TaskResult result;
            if (store.contains(task.prompt->prompt_hash, task.run_id, judge_id)) {
                result.cached = true;
            } else {
                JudgeRequest request{task.pair, task.dimension, *task.prompt, task.run_id};
                try {
                    result.judgment = judge_one(backend, request, config);
                } catch (const JudgeError& e) {
                    result.error = e.what();
                }
            }

            std::unique_lock<std::mutex> lock(mu);
            pending.emplace(index, std::move(result));
            // Commit every consecutive completed task, in task order.
            while (!pending.empty() && pending.begin()->first == next_commit) {
                TaskResult committed = std::move(pending.begin()->second);
                pending.erase(pending.begin());
                ++next_commit;
                if (committed.cached) {
                    ++summary.cached;
                } else if (committed.error) {
                    ++summary.failed;
                    summary.failures.push_back(std::move(*committed.error));
                } else if (!stop) {
                    if (config.max_new_judgments &&
                        summary.new_judgments >= *config.max_new_judgments) {
                        summary.budget_exhausted = true;
                        stop = true;
                        continue;
                    }
                    try {
                        store.append(*committed.judgment);
                    } catch (...) {
                        store_failure = std::current_exception();
                        stop = true;
                        continue;
                    }
                    ++summary.new_judgments;
                }
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(config.max_in_flight), tasks.size());
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) workers.emplace_back(worker);
    for (auto& t : workers) t.join();

    if (store_failure) std::rethrow_exception(store_failure);
    return summary;
}

std::map<std::pair<std::string, Dimension::Kind>, Label> aggregate_majority(
    const std::vector<Judgment>& judgments, int runs) {
    std::string judge_id;
    std::map<std::pair<std::string, Dimension::Kind>, std::vector<Label>> grouped;
    for (const auto& j : judgments) {
        if (judge_id.empty()) {
            judge_id = j.judge_id;
        } else if (judge_id != j.judge_id) {
            throw ValidationError(
                "aggregate: store mixes judges '" + judge_id + "' and '" + j.judge_id +
                "'; aggregate one judge at a time");
        }
        grouped[{j.pair_id, j.dimension}].push_back(j.label);
    }

    std::map<std::pair<std::string, Dimension::Kind>, Label> out;
    for (const auto& [key, labels] : grouped) {
        if (labels.size() != static_cast<std::size_t>(runs)) {
            throw ValidationError("aggregate: pair '" + key.first + "' dimension '" +
                                  dimension_name(key.second) + "' has " +
                                  std::to_string(labels.size()) + " runs, expected " +
                                  std::to_string(runs));
        }
        out.emplace(key, majority_vote(labels));
    }
    return out;
}

}  // namespace argrank::judge
