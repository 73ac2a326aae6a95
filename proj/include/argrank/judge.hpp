#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "argrank/core.hpp"
#include "argrank/promptkit.hpp"

namespace argrank::judge {

struct JudgeConfig {
    enum class Backend { Http, Oracle, Scripted, Noisy };
    Backend backend = Backend::Oracle;
    std::string endpoint_url;  // Http only, e.g. "http://host:8000/v1"
    std::string model_name;
    double temperature = 1.0;
    int max_in_flight = 8;
    int max_retries = 3;
    int timeout_ms = 30000;
    int runs = 3;
    std::uint64_t base_seed = 0;
    // Budget cap on newly issued judgments; the campaign stops cleanly at
    // the cap and can be resumed later.
    std::optional<std::size_t> max_new_judgments;

    void validate() const;
};

struct OracleParams {
    std::map<std::string, double> theta_star;  // argument_id -> hidden truth
    double tie_band = 0.0;
    enum class Noise { Deterministic, BTSampled };
    Noise noise = Noise::Deterministic;
};

// Deterministic mode: A iff theta_A - theta_B >= tie_band, B iff
// <= -tie_band, else Tie. BTSampled: Tie inside the band, otherwise A with
// probability e^theta_A / (e^theta_A + e^theta_B); the draw comes from a
// counter-based generator keyed by (seed, pair_id, dimension, run) so
// replay is exact. Throws ValidationError when a theta is missing.
Label oracle_judge(const ComparisonPair& pair, Dimension::Kind dimension,
                   const OracleParams& params, std::uint64_t seed, int run_id = 1);

// ---------------------------------------------------------------------------
// Judge contract
// ---------------------------------------------------------------------------

struct JudgeRequest {
    const ComparisonPair* pair = nullptr;
    Dimension::Kind dimension = Dimension::Kind::Logic;
    prompts::RenderedPrompt prompt;
    int run_id = 1;
};

class JudgeBackend {
public:
    virtual ~JudgeBackend() = default;
    // judge_id stored on every judgment this backend produces.
    virtual std::string id() const = 0;
    // Raw model text for one attempt (0-based); may throw JudgeError on
    // transport failure.
    virtual std::string complete(const JudgeRequest& request, int attempt) = 0;
    // Live backends record wall-clock latency; deterministic ones must not,
    // so their stores replay byte-identically.
    virtual bool records_latency() const { return false; }
};

class OracleBackend : public JudgeBackend {
public:
    OracleBackend(OracleParams params, std::uint64_t seed)
        : params_(std::move(params)), seed_(seed) {}
    std::string id() const override { return "oracle"; }
    std::string complete(const JudgeRequest& request, int attempt) override;

private:
    OracleParams params_;
    std::uint64_t seed_;
};

// Replays canned responses keyed by (pair_id, dimension, run_id); used for
// tests and offline what-if runs. Missing keys fall back to
// default_response (which may be unparseable on purpose).
class ScriptedBackend : public JudgeBackend {
public:
    using Key = std::tuple<std::string, Dimension::Kind, int>;

    explicit ScriptedBackend(std::map<Key, std::string> responses,
                             std::string default_response = "Tie")
        : responses_(std::move(responses)),
          default_response_(std::move(default_response)) {}

    std::string id() const override { return "scripted"; }
    std::string complete(const JudgeRequest& request, int attempt) override;

private:
    std::map<Key, std::string> responses_;
    std::string default_response_;
};

// Oracle labels plus a deterministic chance of emitting an unparseable
// response, exercising the retry path without a live endpoint.
class NoisyBackend : public JudgeBackend {
public:
    NoisyBackend(OracleParams params, std::uint64_t seed, double invalid_rate = 0.1)
        : params_(std::move(params)), seed_(seed), invalid_rate_(invalid_rate) {}
    std::string id() const override { return "noisy-oracle"; }
    std::string complete(const JudgeRequest& request, int attempt) override;

private:
    OracleParams params_;
    std::uint64_t seed_;
    double invalid_rate_;
};

// One labeled judgment. The raw response is parsed by trimming whitespace
// and case-insensitively matching the whole token against {a, b, tie};
// anything else is invalid and retried, up to max_retries attempts total.
// Throws JudgeError carrying the last raw response once retries are
// exhausted.
Judgment judge_one(JudgeBackend& backend, const JudgeRequest& request,
                   const JudgeConfig& config);

// Strict plurality wins; any tie in counts (including three-way splits)
// returns Tie. Throws ValidationError on empty input.
Label majority_vote(const std::vector<Label>& labels);

// ---------------------------------------------------------------------------
// Judgment store: append-only JSONL, one judgment per line
// ---------------------------------------------------------------------------

class JudgmentStore {
public:
    // Loads any existing file; subsequent appends go to the same path.
    explicit JudgmentStore(std::string path);

    const std::vector<Judgment>& judgments() const { return judgments_; }
    const std::string& path() const { return path_; }

    bool contains(const std::string& prompt_hash, int run_id,
                  const std::string& judge_id) const;

    // Enforces (pair_id, dimension, run_id, judge_id) uniqueness; flushes
    // the line to disk before returning.
    void append(const Judgment& judgment);

    static std::string to_json_line(const Judgment& judgment);
    static Judgment from_json_line(const std::string& line, std::size_t line_no,
                                   const std::string& file);

private:
    std::string path_;
    std::vector<Judgment> judgments_;
    std::set<std::tuple<std::string, Dimension::Kind, int, std::string>> unique_keys_;
    std::set<std::tuple<std::string, int, std::string>> hash_keys_;
};

// ---------------------------------------------------------------------------
// Campaign orchestration
// ---------------------------------------------------------------------------

struct CampaignSpec {
    prompts::Strategy strategy = prompts::Strategy::ZeroShot;
    std::vector<Dimension::Kind> dimensions = all_dimensions();
    // The evaluated pair never appears among its own few-shot exemplars
    // unless this is turned off for strict replication runs.
    bool fewshot_exclude_evaluated = true;
};

struct CampaignSummary {
    std::size_t new_judgments = 0;
    std::size_t cached = 0;
    std::size_t failed = 0;
    std::vector<std::string> failures;  // one message per failed item
    bool budget_exhausted = false;
};

// Issues one judgment per (pair, dimension, run) not already in the store
// (keyed by prompt hash + run + judge id), with at most max_in_flight
// concurrent judge calls. Judgments are committed to the store in task
// order regardless of completion order, so deterministic backends produce
// byte-identical stores and an interrupted campaign resumes seamlessly.
// Per-item failures are collected in the summary; only store I/O aborts.
CampaignSummary run_campaign(const std::vector<ComparisonPair>& pairs,
                             const CampaignSpec& spec, const Corpus& corpus,
                             const prompts::TemplateSet& templates,
                             const GoldStandard* gold_for_fewshot,
                             JudgeBackend& backend, const JudgeConfig& config,
                             JudgmentStore& store);

// Majority-voted label per (pair_id, dimension) over exactly `runs` runs.
// Judgments from multiple judge ids in one store are rejected; groups with
// a wrong run count are reported as errors.
std::map<std::pair<std::string, Dimension::Kind>, Label> aggregate_majority(
    const std::vector<Judgment>& judgments, int runs);

}  // namespace argrank::judge
