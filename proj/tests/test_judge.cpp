#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "argrank/errors.hpp"
#include "argrank/http_judge.hpp"
#include "argrank/judge.hpp"
#include "argrank/promptkit.hpp"
#include "argrank/rng.hpp"

using namespace argrank;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("argrank-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static std::atomic<int>& counter() {
        static std::atomic<int> c{0};
        return c;
    }
};

// A small world: one topic, four arguments with known strengths.
struct JudgeFixture {
    Corpus corpus;
    judge::OracleParams params;
    prompts::TemplateSet templates =
        prompts::TemplateSet::load(std::string(ARGRANK_SOURCE_DIR) + "/templates");

    JudgeFixture() {
        corpus.topics = {{"t1", "Topic"}};
        const std::vector<std::pair<std::string, double>> args = {
            {"a1", 1.5}, {"a2", 0.5}, {"a3", -0.5}, {"a4", -1.5}};
        for (const auto& [id, theta] : args) {
            corpus.arguments.push_back({id, "t1", "Text of " + id, true});
            params.theta_star[id] = theta;
        }
        corpus.pairs = {
            {"p1", "t1", "a1", "a2"},
            {"p2", "t1", "a2", "a3"},
            {"p3", "t1", "a3", "a4"},
            {"p4", "t1", "a1", "a4"},
            {"p5", "t1", "a2", "a4"},
        };
        corpus.reindex();
    }

    judge::JudgeRequest request(const std::string& pair_id, int run = 1) const {
        judge::JudgeRequest req;
        req.pair = corpus.find_pair(pair_id);
        req.dimension = Dimension::Kind::Logic;
        req.prompt = templates.render(prompts::Strategy::ZeroShot, Dimension::Kind::Logic,
                                      corpus.find_argument(req.pair->arg_a)->text,
                                      corpus.find_argument(req.pair->arg_b)->text);
        req.run_id = run;
        return req;
    }
};

}  // namespace

TEST_CASE("majority vote: strict plurality else Tie, over all 27 triples") {
    using enum Label;
    const Label values[] = {A, B, Tie};
    int plurality_cases = 0;
    for (const Label x : values) {
        for (const Label y : values) {
            for (const Label z : values) {
                int counts[3] = {0, 0, 0};
                for (const Label l : {x, y, z}) counts[static_cast<int>(l)]++;

                Label expected = Tie;
                for (int c = 0; c < 3; ++c) {
                    const bool strict = counts[c] >= 2;
                    if (strict) expected = static_cast<Label>(c);
                }
                // A three-way split has no count >= 2 and stays Tie.
                const Label got = judge::majority_vote({x, y, z});
                CHECK(got == expected);
                if (counts[0] < 2 && counts[1] < 2 && counts[2] < 2) {
                    CHECK(got == Tie);
                } else {
                    ++plurality_cases;
                }

                // Permutation invariance.
                CHECK(judge::majority_vote({z, x, y}) == got);
                CHECK(judge::majority_vote({y, z, x}) == got);
            }
        }
    }
    CHECK(plurality_cases == 21);  // 27 triples minus the 6 all-distinct orderings
}

TEST_CASE("majority vote: paper examples, even splits, empty input") {
    using enum Label;
    CHECK(judge::majority_vote({A, A, B}) == A);
    CHECK(judge::majority_vote({A, B, Tie}) == Tie);
    CHECK(judge::majority_vote({B, B, B}) == B);
    // Exact 2-2 split generalizes to Tie.
    CHECK(judge::majority_vote({A, A, B, B}) == Tie);
    CHECK(judge::majority_vote({A, A, A, B}) == A);
    CHECK_THROWS_AS(judge::majority_vote({}), ValidationError);
}

TEST_CASE("oracle judge: deterministic sign and band rules") {
    const JudgeFixture f;
    judge::OracleParams params = f.params;

    const auto* p1 = f.corpus.find_pair("p1");  // theta 1.5 vs 0.5
    CHECK(judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 0) == Label::A);

    params.tie_band = 2.0;  // diff 1.0 falls inside the band
    CHECK(judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 0) == Label::Tie);

    params.tie_band = 0.0;
    params.theta_star["a1"] = params.theta_star["a2"];
    CHECK(judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 0) == Label::A);

    params.theta_star.erase("a1");
    CHECK_THROWS_AS(judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 0),
                    ValidationError);
}

TEST_CASE("oracle judge: BT-sampled draws are fair at equal strength") {
    const JudgeFixture f;
    judge::OracleParams params = f.params;
    params.noise = judge::OracleParams::Noise::BTSampled;
    params.theta_star["a1"] = 0.0;
    params.theta_star["a2"] = 0.0;
    const auto* p1 = f.corpus.find_pair("p1");

    int a_count = 0;
    for (int run = 1; run <= 10000; ++run) {
        const auto label = judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 42, run);
        CHECK(label != Label::Tie);
        if (label == Label::A) ++a_count;
    }
    const double freq = a_count / 10000.0;
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +/- 0.02

    // Replays are exact.
    CHECK(judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 42, 7) ==
          judge::oracle_judge(*p1, Dimension::Kind::Logic, params, 42, 7));
}

TEST_CASE("judge_one parses strictly and retries invalid output") {
    const JudgeFixture f;
    judge::JudgeConfig config;
    config.max_retries = 3;

    SUBCASE("exact and normalized tokens parse") {
        judge::ScriptedBackend exact({}, "A");
        auto judgment = judge::judge_one(exact, f.request("p1"), config);
        CHECK(judgment.label == Label::A);
        CHECK(judgment.raw_response == "A");
        CHECK(judgment.prompt_hash == f.request("p1").prompt.prompt_hash);
        CHECK(!judgment.latency_ms.has_value());

        judge::ScriptedBackend padded({}, " b\n");
        CHECK(judge::judge_one(padded, f.request("p1"), config).label == Label::B);
    }

    SUBCASE("prose responses exhaust retries and surface the last raw text") {
        judge::ScriptedBackend prose({}, "Argument A is better");
        try {
            judge::judge_one(prose, f.request("p1"), config);
            FAIL("expected JudgeError");
        } catch (const JudgeError& e) {
            CHECK(std::string(e.what()).find("unparseable") != std::string::npos);
            CHECK(e.last_raw_response == "Argument A is better");
        }
    }

    SUBCASE("noisy backend recovers within the retry budget") {
        judge::NoisyBackend noisy(f.params, 7, 0.4);
        judge::JudgeConfig generous = config;
        generous.max_retries = 10;
        int parsed = 0;
        for (const auto& pair : f.corpus.pairs) {
            judge::JudgeRequest req = f.request(pair.pair_id);
            req.pair = f.corpus.find_pair(pair.pair_id);
            const auto judgment = judge::judge_one(noisy, req, generous);
            parsed += judgment.label == Label::A || judgment.label == Label::B ||
                              judgment.label == Label::Tie
                          ? 1
                          : 0;
        }
        CHECK(parsed == 5);
    }
}

TEST_CASE("judgment store: round-trip, uniqueness, cache keys") {
    TempDir tmp;
    const std::string path = (tmp.path / "store.jsonl").string();

    Judgment j;
    j.pair_id = "p1";
    j.dimension = Dimension::Kind::Rhetoric;
    j.run_id = 2;
    j.judge_id = "oracle";
    j.label = Label::Tie;
    j.raw_response = "Tie";
    j.prompt_hash = std::string(64, 'a');

    {
        judge::JudgmentStore store(path);
        store.append(j);
        CHECK_THROWS_AS(store.append(j), ValidationError);
        CHECK(store.contains(j.prompt_hash, 2, "oracle"));
        CHECK(!store.contains(j.prompt_hash, 3, "oracle"));
    }
    {
        judge::JudgmentStore reloaded(path);
        REQUIRE(reloaded.judgments().size() == 1);
        const auto& r = reloaded.judgments()[0];
        CHECK(r.pair_id == j.pair_id);
        CHECK(r.dimension == j.dimension);
        CHECK(r.run_id == j.run_id);
        CHECK(r.label == j.label);
        CHECK(r.raw_response == j.raw_response);
        CHECK(r.prompt_hash == j.prompt_hash);
        CHECK(!r.latency_ms.has_value());
    }
}

TEST_CASE("campaign: cardinality, idempotence, determinism, resume") {
    const JudgeFixture f;
    judge::OracleBackend backend(f.params, 11);
    judge::JudgeConfig config;
    config.runs = 3;
    config.max_in_flight = 4;

    judge::CampaignSpec spec;  // zero-shot, all dimensions

    TempDir tmp;
    const std::string full_path = (tmp.path / "full.jsonl").string();

    // 5 pairs x 3 dims x 3 runs = 45 judgments.
    {
        judge::JudgmentStore store(full_path);
        const auto summary = judge::run_campaign(f.corpus.pairs, spec, f.corpus, f.templates,
                                                 nullptr, backend, config, store);
        CHECK(summary.new_judgments == 45);
        CHECK(summary.cached == 0);
        CHECK(summary.failed == 0);
    }
    // Re-running the same campaign touches nothing.
    {
        judge::JudgmentStore store(full_path);
        const auto summary = judge::run_campaign(f.corpus.pairs, spec, f.corpus, f.templates,
                                                 nullptr, backend, config, store);
        CHECK(summary.new_judgments == 0);
        CHECK(summary.cached == 45);
    }

    // A separate single-threaded run produces byte-identical output.
    const std::string serial_path = (tmp.path / "serial.jsonl").string();
    {
        judge::JudgeConfig serial = config;
        serial.max_in_flight = 1;
        judge::JudgmentStore store(serial_path);
        judge::run_campaign(f.corpus.pairs, spec, f.corpus, f.templates, nullptr, backend,
                            serial, store);
    }
    CHECK(read_file(full_path) == read_file(serial_path));

    // Interrupt at 50% (22 of 45) then resume: byte-identical to the full run.
    const std::string resumed_path = (tmp.path / "resumed.jsonl").string();
    {
        judge::JudgeConfig budgeted = config;
        budgeted.max_new_judgments = 22;
        judge::JudgmentStore store(resumed_path);
        const auto summary = judge::run_campaign(f.corpus.pairs, spec, f.corpus, f.templates,
                                                 nullptr, backend, budgeted, store);
        CHECK(summary.new_judgments == 22);
        CHECK(summary.budget_exhausted);
    }
    {
        judge::JudgmentStore store(resumed_path);
        const auto summary = judge::run_campaign(f.corpus.pairs, spec, f.corpus, f.templates,
                                                 nullptr, backend, config, store);
        CHECK(summary.new_judgments == 23);
        CHECK(summary.cached == 22);
    }
    CHECK(read_file(full_path) == read_file(resumed_path));
}

TEST_CASE("campaign: per-item parse failures are contained") {
    const JudgeFixture f;
    // Scripted: p2 always answers prose (unparseable), everything else "B".
    std::map<judge::ScriptedBackend::Key, std::string> script;
    for (const auto dim : all_dimensions()) {
        for (int run = 1; run <= 2; ++run) {
            script[{"p2", dim, run}] = "It depends.";
        }
    }
    judge::ScriptedBackend backend(std::move(script), "B");
    judge::JudgeConfig config;
    config.runs = 2;

    TempDir tmp;
    judge::JudgmentStore store((tmp.path / "failures.jsonl").string());
    const auto summary = judge::run_campaign(f.corpus.pairs, judge::CampaignSpec{}, f.corpus,
                                             f.templates, nullptr, backend, config, store);
    CHECK(summary.failed == 6);  // 3 dims x 2 runs on p2
    CHECK(summary.new_judgments == 24);
    CHECK(summary.failures.size() == 6);
}

TEST_CASE("aggregate_majority groups by pair and dimension") {
    const JudgeFixture f;
    judge::OracleBackend backend(f.params, 1);
    judge::JudgeConfig config;
    config.runs = 3;

    TempDir tmp;
    judge::JudgmentStore store((tmp.path / "agg.jsonl").string());
    judge::run_campaign(f.corpus.pairs, judge::CampaignSpec{}, f.corpus, f.templates, nullptr,
                        backend, config, store);

    const auto labels = judge::aggregate_majority(store.judgments(), 3);
    CHECK(labels.size() == 15);
    // Deterministic oracle: a1 > a2 everywhere, so p1 is A in every dimension.
    for (const auto dim : all_dimensions()) {
        CHECK(labels.at({"p1", dim}) == Label::A);
    }

    CHECK_THROWS_AS(judge::aggregate_majority(store.judgments(), 2), ValidationError);
}

TEST_CASE("http backend speaks the chat-completions wire shape") {
    const JudgeFixture f;

    httplib::Server server;
    std::atomic<int> hits{0};
    std::string seen_body;
    std::string seen_auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req,
                                            httplib::Response& res) {
        hits++;
        seen_body = req.body;
        seen_auth = req.get_header_value("Authorization");
        if (hits <= 1) {
            res.status = 500;  // first call fails, the client must retry
            return;
        }
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"A"}}]})",
                        "application/json");
    });

    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));

    setenv("ARGRANK_API_KEY", "test-key-123", 1);
    judge::JudgeConfig config;
    config.backend = judge::JudgeConfig::Backend::Http;
    config.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    config.model_name = "test-model";
    config.temperature = 1.0;
    config.max_retries = 3;
    config.timeout_ms = 5000;

    judge::HttpBackend backend(config);
    backend.set_backoff_scale(0.001);  // keep the test fast
    CHECK(backend.id() == "test-model");

    const auto judgment = judge::judge_one(backend, f.request("p1"), config);
    CHECK(judgment.label == Label::A);
    CHECK(judgment.raw_response == "A");
    CHECK(judgment.latency_ms.has_value());
    CHECK(hits == 2);

    // Wire assertions: model, temperature, and both chat messages.
    CHECK(seen_auth == "Bearer test-key-123");
    CHECK(seen_body.find("\"model\":\"test-model\"") != std::string::npos);
    CHECK(seen_body.find("\"temperature\":1.0") != std::string::npos);
    CHECK(seen_body.find("\"role\":\"system\"") != std::string::npos);
    CHECK(seen_body.find("\"role\":\"user\"") != std::string::npos);
    CHECK(seen_body.find("Argument A:") != std::string::npos);

    server.stop();
    server_thread.join();
    unsetenv("ARGRANK_API_KEY");
}

TEST_CASE("http backend: hard 4xx fails fast, exhaustion raises transport error") {
    const JudgeFixture f;
    httplib::Server server;
    server.Post("/v1/chat/completions",
                [&](const httplib::Request&, httplib::Response& res) { res.status = 401; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));

    judge::JudgeConfig config;
    config.backend = judge::JudgeConfig::Backend::Http;
    config.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    config.model_name = "m";
    judge::HttpBackend backend(config);
    backend.set_backoff_scale(0.001);

    CHECK_THROWS_WITH_AS(backend.complete(f.request("p1"), 0), doctest::Contains("401"),
                         JudgeError);

    server.stop();
    server_thread.join();
}

TEST_CASE("judge config validation") {
    judge::JudgeConfig config;
    CHECK_NOTHROW(config.validate());
    config.temperature = -0.1;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.temperature = 1.0;
    config.runs = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.runs = 3;
    config.max_in_flight = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.max_in_flight = 8;
    config.backend = judge::JudgeConfig::Backend::Http;
    CHECK_THROWS_AS(config.validate(), ConfigError);  // missing endpoint
    config.endpoint_url = "http://localhost:1234/v1";
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("campaign aborts on store I/O failure") {
    const JudgeFixture f;
    judge::OracleBackend backend(f.params, 1);
    judge::JudgeConfig config;
    config.runs = 1;
    // A store path inside a directory that does not exist: the first append
    // fails and must abort the whole campaign.
    judge::JudgmentStore store("/nonexistent-argrank-dir/store.jsonl");
    CHECK_THROWS_AS(judge::run_campaign(f.corpus.pairs, judge::CampaignSpec{}, f.corpus,
                                        f.templates, nullptr, backend, config, store),
                    IoError);
}
