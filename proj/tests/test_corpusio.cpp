#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "argrank/corpusio.hpp"
#include "argrank/csv.hpp"
#include "argrank/errors.hpp"
#include "argrank/judge.hpp"

using namespace argrank;
namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(ARGRANK_TEST_DIR) + "/fixtures/mini_corpus";

struct TempDir {
    fs::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("argrank-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void copy_fixture(const fs::path& dst) {
    for (const auto& entry : fs::directory_iterator(kFixture)) {
        fs::copy_file(entry.path(), dst / entry.path().filename());
    }
}

}  // namespace

TEST_CASE("csv: RFC-4180 quoting round-trips") {
    const std::string tricky = "He said \"no, really\",\nthen left.";
    const auto formatted = csv::format_row({"id", tricky, "plain"});
    const auto table = csv::parse("a,b,c\n" + formatted, "mem");
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].fields[1] == tricky);
}

TEST_CASE("csv: field count mismatches carry line numbers") {
    CHECK_THROWS_WITH_AS(csv::parse("a,b\n1,2\n3\n", "f.csv"), doctest::Contains("f.csv:3"),
                         IoError);
}

TEST_CASE("the shipped fixture loads with zero issues") {
    const auto bundle = io::load_canonical(kFixture);
    const auto s = io::stats(bundle);
    CHECK(s.n_topics == 2);
    CHECK(s.n_texts == 7);
    CHECK(s.n_argumentative == 6);
    CHECK(s.n_pairs == 6);
    CHECK(s.n_gold_labels == 18);
    CHECK(s.n_gold_scores == 18);
    CHECK(bundle.content_digest.size() == 64);

    // Quoted text with embedded quotes survives parsing.
    const Argument* a3 = bundle.corpus.find_argument("t1-a3");
    REQUIRE(a3 != nullptr);
    CHECK(a3->text.find("\"what to wear\"") != std::string::npos);
}

TEST_CASE("canonical load is insensitive to row order") {
    TempDir tmp;
    copy_fixture(tmp.path);
    // Reverse the data rows of arguments.csv.
    const auto table = csv::read_file((tmp.path / "arguments.csv").string());
    std::vector<std::vector<std::string>> reversed;
    for (auto it = table.rows.rbegin(); it != table.rows.rend(); ++it) {
        reversed.push_back(it->fields);
    }
    csv::write_file((tmp.path / "arguments.csv").string(), table.header, reversed);

    const auto base = io::load_canonical(kFixture);
    const auto shuffled = io::load_canonical(tmp.path.string());
    REQUIRE(base.corpus.arguments.size() == shuffled.corpus.arguments.size());
    for (std::size_t i = 0; i < base.corpus.arguments.size(); ++i) {
        CHECK(base.corpus.arguments[i].id == shuffled.corpus.arguments[i].id);
    }
}

TEST_CASE("schema violations name file, line and column") {
    TempDir tmp;
    copy_fixture(tmp.path);

    SUBCASE("unknown argument reference") {
        std::ofstream out(tmp.path / "pairs.csv", std::ios::app);
        out << "t1-p9,t1,t1-a1,ghost\n";
        out.close();
        CHECK_THROWS_WITH_AS(io::load_canonical(tmp.path.string()),
                             doctest::Contains("ghost"), ValidationError);
    }
    SUBCASE("duplicate gold label") {
        std::ofstream out(tmp.path / "gold_labels.csv", std::ios::app);
        out << "t1-p1,logic,B\n";
        out.close();
        CHECK_THROWS_WITH_AS(io::load_canonical(tmp.path.string()),
                             doctest::Contains("duplicate gold label"), IoError);
    }
    SUBCASE("bad label value carries position") {
        std::ofstream out(tmp.path / "gold_labels.csv", std::ios::app);
        out << "t1-p2,logic,maybe\n";
        out.close();
        try {
            io::load_canonical(tmp.path.string());
            FAIL("expected IoError");
        } catch (const IoError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("gold_labels.csv:20") != std::string::npos);
            CHECK(msg.find("label") != std::string::npos);
        }
    }
    SUBCASE("missing column lists the available headers") {
        csv::write_file((tmp.path / "topics.csv").string(), {"id", "name"}, {{"t1", "X"}});
        CHECK_THROWS_WITH_AS(io::load_canonical(tmp.path.string()),
                             doctest::Contains("available: id, name"), IoError);
    }
}

TEST_CASE("write_canonical/load_canonical round-trip is the identity") {
    const auto bundle = io::load_canonical(kFixture);
    TempDir tmp;
    io::write_canonical(tmp.path.string(), bundle.corpus, bundle.gold);
    const auto reloaded = io::load_canonical(tmp.path.string());

    CHECK(reloaded.corpus.topics.size() == bundle.corpus.topics.size());
    CHECK(reloaded.corpus.arguments.size() == bundle.corpus.arguments.size());
    CHECK(reloaded.corpus.pairs.size() == bundle.corpus.pairs.size());
    CHECK(reloaded.gold.pair_labels == bundle.gold.pair_labels);
    for (const auto& [key, score] : bundle.gold.arg_scores) {
        CHECK(reloaded.gold.arg_scores.at(key) == doctest::Approx(score).epsilon(1e-15));
    }
    for (std::size_t i = 0; i < bundle.corpus.arguments.size(); ++i) {
        CHECK(reloaded.corpus.arguments[i].text == bundle.corpus.arguments[i].text);
    }
}

TEST_CASE("judgment store round-trips 90 judgments byte-exactly") {
    TempDir tmp;
    const std::string path = (tmp.path / "store.jsonl").string();
    {
        judge::JudgmentStore store(path);
        for (int i = 0; i < 30; ++i) {
            for (int run = 1; run <= 3; ++run) {
                Judgment j;
                j.pair_id = "p" + std::to_string(i);
                j.dimension = static_cast<Dimension::Kind>(i % 3);
                j.run_id = run;
                j.judge_id = "oracle";
                j.label = static_cast<Label>((i + run) % 3);
                j.raw_response = label_name(j.label);
                j.prompt_hash = std::string(64, static_cast<char>('a' + i % 26));
                store.append(j);
            }
        }
        CHECK(store.judgments().size() == 90);
    }
    const std::string bytes = slurp(path);
    {
        judge::JudgmentStore reloaded(path);
        CHECK(reloaded.judgments().size() == 90);
        // Rewrite through the serializer: identical bytes.
        std::string rewritten;
        for (const auto& j : reloaded.judgments()) {
            rewritten += judge::JudgmentStore::to_json_line(j) + "\n";
        }
        CHECK(rewritten == bytes);
    }
}

TEST_CASE("fit CSV round-trip preserves theta to 1e-12") {
    std::map<bt::TopicDimKey, bt::BTFit> fits;
    bt::BTFit fit;
    fit.item_ids = {"a1", "a2", "a3"};
    fit.gamma = {1.4142135623730951, 1.0, 0.7071067811865475};
    fit.theta = {0.34657359027997264, 0.0, -0.34657359027997264};
    fit.z = {1.224744871391589, 0.0, -1.224744871391589};
    fits.emplace(bt::TopicDimKey{"t1", Dimension::Kind::Logic}, fit);

    TempDir tmp;
    const std::string path = (tmp.path / "fits.csv").string();
    io::write_fits(path, fits);
    const auto reloaded = io::read_fits(path);
    REQUIRE(reloaded.size() == 1);
    const auto& r = reloaded.begin()->second;
    REQUIRE(r.item_ids == fit.item_ids);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::fabs(r.theta[i] - fit.theta[i]) < 1e-12);
        CHECK(std::fabs(r.gamma[i] - fit.gamma[i]) < 1e-12);
        CHECK(std::fabs(r.z[i] - fit.z[i]) < 1e-12);
    }
}

TEST_CASE("labels CSV round-trip") {
    std::map<std::pair<std::string, Dimension::Kind>, Label> labels = {
        {{"p1", Dimension::Kind::Logic}, Label::A},
        {{"p1", Dimension::Kind::Rhetoric}, Label::Tie},
        {{"p2", Dimension::Kind::Dialectic}, Label::B},
    };
    TempDir tmp;
    const std::string path = (tmp.path / "labels.csv").string();
    io::write_labels(path, labels);
    CHECK(io::read_labels(path) == labels);
}

TEST_CASE("import_webis maps columns and is idempotent") {
    TempDir src;
    // A source export with different column names and label conventions.
    {
        std::ofstream args(src.path / "texts.csv");
        args << "text_id,debate,content,argumentative\n";
        args << "x1,uniforms,\"Uniforms reduce bullying.\",yes\n";
        args << "x2,uniforms,\"Uniforms are bad.\",yes\n";
        args << "x3,uniforms,\"Off topic remark.\",no\n";
        std::ofstream cmp(src.path / "judgments.csv");
        cmp << "debate,left,right,aspect,winner\n";
        cmp << "uniforms,x1,x2,logical quality,1\n";
        cmp << "uniforms,x1,x2,rhetorical quality,2\n";
        cmp << "uniforms,x1,x2,dialectical quality,0\n";
        std::ofstream scores(src.path / "bt_scores.csv");
        scores << "text_id,aspect,bt\n";
        scores << "x1,logical quality,0.8\n";
        scores << "x2,logical quality,-0.8\n";
    }
    {
        std::ofstream mapping(src.path / "mapping.toml");
        mapping << "[files]\n";
        mapping << "arguments = \"texts.csv\"\n";
        mapping << "comparisons = \"judgments.csv\"\n";
        mapping << "scores = \"bt_scores.csv\"\n";
        mapping << "[columns]\n";
        mapping << "argument_id = \"text_id\"\n";
        mapping << "argument_topic = \"debate\"\n";
        mapping << "argument_text = \"content\"\n";
        mapping << "argument_is_argumentative = \"argumentative\"\n";
        mapping << "comparison_topic = \"debate\"\n";
        mapping << "comparison_arg_a = \"left\"\n";
        mapping << "comparison_arg_b = \"right\"\n";
        mapping << "comparison_dimension = \"aspect\"\n";
        mapping << "comparison_label = \"winner\"\n";
        mapping << "score_argument_id = \"text_id\"\n";
        mapping << "score_dimension = \"aspect\"\n";
        mapping << "score_value = \"bt\"\n";
    }

    // "yes"/"no" are not in the default boolean vocabulary; extend via alias
    // by rewriting, or assert the error is informative. The importer accepts
    // true/false/1/0, so rewrite the source first.
    {
        auto table = csv::read_file((src.path / "texts.csv").string());
        std::vector<std::vector<std::string>> rows;
        for (auto& row : table.rows) {
            row.fields[3] = row.fields[3] == "yes" ? "true" : "false";
            rows.push_back(row.fields);
        }
        csv::write_file((src.path / "texts.csv").string(), table.header, rows);
    }

    const auto mapping = io::load_mapping((src.path / "mapping.toml").string());
    TempDir out1;
    const auto bundle =
        io::import_webis(src.path.string(), mapping, (out1.path / "canon").string());
    const auto s = io::stats(bundle);
    CHECK(s.n_topics == 1);
    CHECK(s.n_texts == 3);
    CHECK(s.n_argumentative == 2);
    CHECK(s.n_pairs == 1);
    CHECK(s.n_gold_labels == 3);
    CHECK(bundle.gold.pair_labels.begin()->second == Label::A);

    // Idempotence: a second import writes byte-identical canonical files.
    TempDir out2;
    io::import_webis(src.path.string(), mapping, (out2.path / "canon").string());
    for (const char* name : {"topics.csv", "arguments.csv", "pairs.csv", "gold_labels.csv",
                             "gold_scores.csv"}) {
        CHECK(slurp(out1.path / "canon" / name) == slurp(out2.path / "canon" / name));
    }
}

TEST_CASE("unknown mapped columns list available headers") {
    TempDir src;
    {
        std::ofstream args(src.path / "arguments.csv");
        args << "id,topic,text\n";
        args << "x1,t,\"Something.\"\n";
    }
    io::WebisMapping mapping;  // defaults expect argument_id etc.
    TempDir out;
    CHECK_THROWS_WITH_AS(
        io::import_webis(src.path.string(), mapping, (out.path / "c").string()),
        doctest::Contains("available: id, topic, text"), IoError);
}
