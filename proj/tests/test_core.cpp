#include <doctest.h>

#include "argrank/core.hpp"
#include "argrank/errors.hpp"

using namespace argrank;

TEST_CASE("dimension adverbs match the prompt vocabulary") {
    CHECK(dimension_adverb(Dimension::Kind::Logic) == "logically");
    CHECK(dimension_adverb(Dimension::Kind::Rhetoric) == "rhetorically");
    CHECK(dimension_adverb(Dimension::Kind::Dialectic) == "dialectically");
}

TEST_CASE("criteria counts are 3/5/3") {
    CHECK(dimension(Dimension::Kind::Logic).criteria.size() == 3);
    CHECK(dimension(Dimension::Kind::Rhetoric).criteria.size() == 5);
    CHECK(dimension(Dimension::Kind::Dialectic).criteria.size() == 3);
}

TEST_CASE("dimension names round-trip") {
    for (const auto kind : all_dimensions()) {
        CHECK(parse_dimension(dimension_name(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_dimension("bogus"), ValidationError);
}

TEST_CASE("labels round-trip through text for all three values") {
    for (const Label label : {Label::A, Label::B, Label::Tie}) {
        CHECK(parse_label(label_name(label)) == label);
    }
    CHECK_THROWS_AS(parse_label("tie"), ValidationError);  // strict storage parse
}

TEST_CASE("lenient label parsing trims and casefolds, nothing more") {
    CHECK(parse_label_lenient("A") == Label::A);
    CHECK(parse_label_lenient(" b\n") == Label::B);
    CHECK(parse_label_lenient("TIE") == Label::Tie);
    CHECK(parse_label_lenient("tie.") == std::nullopt);
    CHECK(parse_label_lenient("Argument A is better") == std::nullopt);
    CHECK(parse_label_lenient("") == std::nullopt);
}

namespace {

Corpus make_valid_corpus() {
    Corpus corpus;
    corpus.topics = {{"t1", "Climate"}, {"t2", "Tax"}};
    corpus.arguments = {
        {"a1", "t1", "Argument one.", true},
        {"a2", "t1", "Argument two.", true},
        {"b1", "t2", "Argument three.", false},
        {"b2", "t2", "Argument four.", true},
    };
    corpus.pairs = {
        {"p1", "t1", "a1", "a2"},
        {"p2", "t2", "b1", "b2"},
    };
    corpus.reindex();
    return corpus;
}

}  // namespace

TEST_CASE("validate_corpus: well-formed corpus has zero issues") {
    const auto corpus = make_valid_corpus();
    const auto report = validate_corpus(corpus.arguments, corpus.topics, corpus.pairs);
    CHECK(report.ok());
}

TEST_CASE("validate_corpus: cross-topic pair is reported") {
    auto corpus = make_valid_corpus();
    corpus.pairs.push_back({"p3", "t1", "a1", "b2"});
    const auto report = validate_corpus(corpus.arguments, corpus.topics, corpus.pairs);
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues[0].kind == ValidationIssue::Kind::CrossTopicPair);
    CHECK(report.issues[0].message.find("cross-topic pair") != std::string::npos);
}

TEST_CASE("validate_corpus: duplicate argument id is reported") {
    auto corpus = make_valid_corpus();
    corpus.arguments.push_back({"a1", "t1", "Duplicate.", true});
    const auto report = validate_corpus(corpus.arguments, corpus.topics, corpus.pairs);
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues[0].kind == ValidationIssue::Kind::DuplicateId);
    CHECK(report.issues[0].message.find("duplicate id") != std::string::npos);
}

TEST_CASE("validate_corpus: reports dangling refs, empty texts and self pairs") {
    auto corpus = make_valid_corpus();
    corpus.arguments.push_back({"ghost-topic", "t9", "Text.", true});
    corpus.arguments.push_back({"blank", "t1", "   \n\t ", true});
    corpus.pairs.push_back({"p4", "t1", "a1", "a1"});
    corpus.pairs.push_back({"p5", "t1", "a1", "missing"});
    const auto report = validate_corpus(corpus.arguments, corpus.topics, corpus.pairs);

    auto has = [&](ValidationIssue::Kind kind) {
        for (const auto& issue : report.issues) {
            if (issue.kind == kind) return true;
        }
        return false;
    };
    CHECK(has(ValidationIssue::Kind::DanglingReference));
    CHECK(has(ValidationIssue::Kind::EmptyText));
    CHECK(has(ValidationIssue::Kind::SelfPair));
}

TEST_CASE("corpus lookups") {
    const auto corpus = make_valid_corpus();
    REQUIRE(corpus.find_argument("a1") != nullptr);
    CHECK(corpus.find_argument("a1")->topic_id == "t1");
    CHECK(corpus.find_argument("nope") == nullptr);
    REQUIRE(corpus.find_pair("p2") != nullptr);
    CHECK(corpus.find_pair("p2")->arg_b == "b2");
    CHECK(corpus.find_topic("t2")->title == "Tax");
}
