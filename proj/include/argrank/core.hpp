#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace argrank {

// ---------------------------------------------------------------------------
// Quality dimensions
// ---------------------------------------------------------------------------

// One comparative sub-question with its definition, rendered verbatim into
// chain-of-thought prompts.
struct Criterion {
    std::string question;
    std::string definition;
};

struct Dimension {
    enum class Kind { Logic, Rhetoric, Dialectic };

    Kind kind;
    std::string adverb;  // "logically" | "rhetorically" | "dialectically"
    std::vector<Criterion> criteria;
};

// The three dimensions with their sub-question lists (3/5/3 entries).
const Dimension& dimension(Dimension::Kind kind);
const std::vector<Dimension::Kind>& all_dimensions();

// Adverb used in prompt substitution; pure function of the kind.
const std::string& dimension_adverb(Dimension::Kind kind);

// "logic" | "rhetoric" | "dialectic" as used in CSV files and CLI flags.
const std::string& dimension_name(Dimension::Kind kind);
Dimension::Kind parse_dimension(const std::string& name);

// ---------------------------------------------------------------------------
// Corpus entities
// ---------------------------------------------------------------------------

struct Topic {
    std::string id;
    std::string title;
};

struct Argument {
    std::string id;
    std::string topic_id;
    std::string text;  // non-empty after whitespace trim
    bool is_argumentative = true;
};

struct ComparisonPair {
    std::string pair_id;
    std::string topic_id;
    std::string arg_a;
    std::string arg_b;
};

enum class Label { A, B, Tie };

const std::string& label_name(Label label);               // "A" | "B" | "Tie"
Label parse_label(const std::string& text);               // strict, throws
std::optional<Label> parse_label_lenient(std::string text);  // trim + casefold

// One judge verdict for one pair, dimension and run.
struct Judgment {
    std::string pair_id;
    Dimension::Kind dimension = Dimension::Kind::Logic;
    int run_id = 1;  // >= 1
    std::string judge_id;
    Label label = Label::Tie;
    std::string raw_response;  // verbatim model output
    std::string prompt_hash;   // 64-hex digest
    std::optional<std::int64_t> latency_ms;
};

// Expert pair labels plus expert per-argument scores, per dimension.
struct GoldStandard {
    std::map<std::pair<std::string, Dimension::Kind>, Label> pair_labels;
    std::map<std::pair<std::string, Dimension::Kind>, double> arg_scores;

    std::optional<Label> pair_label(const std::string& pair_id,
                                    Dimension::Kind kind) const;
    std::optional<double> arg_score(const std::string& argument_id,
                                    Dimension::Kind kind) const;
};

// In-memory corpus with id lookups. Immutable once built.
struct Corpus {
    std::vector<Topic> topics;
    std::vector<Argument> arguments;
    std::vector<ComparisonPair> pairs;

    const Topic* find_topic(const std::string& id) const;
    const Argument* find_argument(const std::string& id) const;
    const ComparisonPair* find_pair(const std::string& id) const;

    // Builds the lookup indexes; call after filling the vectors.
    void reindex();

private:
    std::unordered_map<std::string, std::size_t> topic_index_;
    std::unordered_map<std::string, std::size_t> argument_index_;
    std::unordered_map<std::string, std::size_t> pair_index_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    enum class Kind {
        DuplicateId,
        DanglingReference,
        CrossTopicPair,
        EmptyText,
        SelfPair,
    };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Report-style: collects every problem, never aborts.
ValidationReport validate_corpus(const std::vector<Argument>& arguments,
                                 const std::vector<Topic>& topics,
                                 const std::vector<ComparisonPair>& pairs);

std::string trim_copy(const std::string& s);

}  // namespace argrank
