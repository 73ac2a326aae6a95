#include "argrank/core.hpp"

#include <algorithm>
#include <cctype>

#include "argrank/errors.hpp"

namespace argrank {

namespace {

Dimension make_logic() {
    return Dimension{
        Dimension::Kind::Logic,
        "logically",
        {
            {"which is more acceptable?",
             "A premise of an argument is acceptable if it is rationally worthy "
             "of being believed to be true."},
            {"which is more relevant to a conclusion?",
             "A premise of an argument is relevant if it contributes to the "
             "acceptance or rejection of the argument's conclusion."},
            {"which is more sufficient to justify a conclusion?",
             "An argument's premises are sufficient if, together, they give "
             "enough support to make it rational to draw its conclusion."},
        },
    };
}

Dimension make_rhetoric() {
    return Dimension{
        Dimension::Kind::Rhetoric,
        "rhetorically",
        {
            {"which appears more authorative/trust worthy?",
             "Argumentation creates credibility if it conveys arguments and "
             "similar in a way that makes the author worthy of credence."},
            {"which makes a stronger emotional appeal?",
             "Argumentation makes a successful emotional appeal if it creates "
             "emotions in a way that makes the target audience more open to "
             "the author's arguments."},
            {"which has a clearer style?",
             "Argumentation has a clear style if it uses correct and widely "
             "unambiguous language as well as if it avoids unnecessary "
             "complexity and deviation from the issue."},
            {"which has a more appropiate style?",
             "Argumentation has an appropriate style if the used language "
             "supports the creation of credibility and emotions as well as if "
             "it is proportional to the issue."},
            {"Which is better arranged?",
             "Argumentation is arranged properly if it presents the issue, the "
             "arguments, and its conclusion in the right order."},
        },
    };
}

Dimension make_dialectic() {
    return Dimension{
        Dimension::Kind::Dialectic,
        "dialectically",
        {
            {"which would be acceptable to the audience?",
             "Argumentation is acceptable if the target audience accepts both "
             "the consideration of the stated arguments for the issue and the "
             "way they are stated."},
            {"which contributes more to constructive dialogue?",
             "Argumentation is relevant if it contributes to the issue's "
             "resolution, i.e., if it states arguments or other information "
             "that help to arrive at an ultimate conclusion."},
            {"which better anticipates or refutes counterarguments?",
             "Argumentation is sufficient if it adequately rebuts those "
             "counterarguments to it that can be anticipated."},
        },
    };
}

}  // namespace

const Dimension& dimension(Dimension::Kind kind) {
    static const Dimension logic = make_logic();
    static const Dimension rhetoric = make_rhetoric();
    static const Dimension dialectic = make_dialectic();
    switch (kind) {
        case Dimension::Kind::Logic: return logic;
        case Dimension::Kind::Rhetoric: return rhetoric;
        case Dimension::Kind::Dialectic: return dialectic;
    }
    throw ConfigError("unknown dimension kind");
}

const std::vector<Dimension::Kind>& all_dimensions() {
    static const std::vector<Dimension::Kind> kinds = {
        Dimension::Kind::Logic,
        Dimension::Kind::Rhetoric,
        Dimension::Kind::Dialectic,
    };
    return kinds;
}

const std::string& dimension_adverb(Dimension::Kind kind) {
    return dimension(kind).adverb;
}

const std::string& dimension_name(Dimension::Kind kind) {
    static const std::string logic = "logic";
    static const std::string rhetoric = "rhetoric";
    static const std::string dialectic = "dialectic";
    switch (kind) {
        case Dimension::Kind::Logic: return logic;
        case Dimension::Kind::Rhetoric: return rhetoric;
        case Dimension::Kind::Dialectic: return dialectic;
    }
    throw ConfigError("unknown dimension kind");
}

Dimension::Kind parse_dimension(const std::string& name) {
    if (name == "logic") return Dimension::Kind::Logic;
    if (name == "rhetoric") return Dimension::Kind::Rhetoric;
    if (name == "dialectic") return Dimension::Kind::Dialectic;
    throw ValidationError("unknown dimension '" + name +
                          "' (expected logic, rhetoric or dialectic)");
}

const std::string& label_name(Label label) {
    static const std::string a = "A";
    static const std::string b = "B";
    static const std::string tie = "Tie";
    switch (label) {
        case Label::A: return a;
        case Label::B: return b;
        case Label::Tie: return tie;
    }
    throw ConfigError("unknown label");
}

Label parse_label(const std::string& text) {
    if (text == "A") return Label::A;
    if (text == "B") return Label::B;
    if (text == "Tie") return Label::Tie;
    throw ValidationError("unknown label '" + text + "' (expected A, B or Tie)");
}

std::optional<Label> parse_label_lenient(std::string text) {
    text = trim_copy(text);
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (text == "a") return Label::A;
    if (text == "b") return Label::B;
    if (text == "tie") return Label::Tie;
    return std::nullopt;
}

std::optional<Label> GoldStandard::pair_label(const std::string& pair_id,
                                              Dimension::Kind kind) const {
    auto it = pair_labels.find({pair_id, kind});
    if (it == pair_labels.end()) return std::nullopt;
    return it->second;
}

std::optional<double> GoldStandard::arg_score(const std::string& argument_id,
                                              Dimension::Kind kind) const {
    auto it = arg_scores.find({argument_id, kind});
    if (it == arg_scores.end()) return std::nullopt;
    return it->second;
}

void Corpus::reindex() {
    topic_index_.clear();
    argument_index_.clear();
    pair_index_.clear();
    for (std::size_t i = 0; i < topics.size(); ++i) topic_index_.emplace(topics[i].id, i);
    for (std::size_t i = 0; i < arguments.size(); ++i)
        argument_index_.emplace(arguments[i].id, i);
    for (std::size_t i = 0; i < pairs.size(); ++i) pair_index_.emplace(pairs[i].pair_id, i);
}

const Topic* Corpus::find_topic(const std::string& id) const {
    auto it = topic_index_.find(id);
    return it == topic_index_.end() ? nullptr : &topics[it->second];
}

const Argument* Corpus::find_argument(const std::string& id) const {
    auto it = argument_index_.find(id);
    return it == argument_index_.end() ? nullptr : &arguments[it->second];
}

const ComparisonPair* Corpus::find_pair(const std::string& id) const {
    auto it = pair_index_.find(id);
    return it == pair_index_.end() ? nullptr : &pairs[it->second];
}

std::string trim_copy(const std::string& s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(s[begin])) ++begin;
    while (end > begin && is_space(s[end - 1])) --end;
    return s.substr(begin, end - begin);
}

ValidationReport validate_corpus(const std::vector<Argument>& arguments,
                                 const std::vector<Topic>& topics,
                                 const std::vector<ComparisonPair>& pairs) {
    ValidationReport report;
    auto add = [&](ValidationIssue::Kind kind, std::string message) {
        report.issues.push_back({kind, std::move(message)});
    };

    std::unordered_set<std::string> topic_ids;
    for (const auto& topic : topics) {
        if (!topic_ids.insert(topic.id).second) {
            add(ValidationIssue::Kind::DuplicateId, "duplicate id: topic '" + topic.id + "'");
        }
    }

    std::unordered_map<std::string, const Argument*> args_by_id;
    for (const auto& arg : arguments) {
        if (!args_by_id.emplace(arg.id, &arg).second) {
            add(ValidationIssue::Kind::DuplicateId, "duplicate id: argument '" + arg.id + "'");
            continue;
        }
        if (trim_copy(arg.text).empty()) {
            add(ValidationIssue::Kind::EmptyText,
                "empty text: argument '" + arg.id + "'");
        }
        if (!topic_ids.contains(arg.topic_id)) {
            add(ValidationIssue::Kind::DanglingReference,
                "dangling reference: argument '" + arg.id + "' names unknown topic '" +
                    arg.topic_id + "'");
        }
    }

    std::unordered_set<std::string> pair_ids;
    for (const auto& pair : pairs) {
        if (!pair_ids.insert(pair.pair_id).second) {
            add(ValidationIssue::Kind::DuplicateId,
                "duplicate id: pair '" + pair.pair_id + "'");
            continue;
        }
        if (pair.arg_a == pair.arg_b) {
            add(ValidationIssue::Kind::SelfPair,
                "self pair: '" + pair.pair_id + "' compares '" + pair.arg_a +
                    "' with itself");
        }
        if (!topic_ids.contains(pair.topic_id)) {
            add(ValidationIssue::Kind::DanglingReference,
                "dangling reference: pair '" + pair.pair_id + "' names unknown topic '" +
                    pair.topic_id + "'");
        }
        bool sides_ok = true;
        for (const auto* side : {&pair.arg_a, &pair.arg_b}) {
            if (!args_by_id.contains(*side)) {
                add(ValidationIssue::Kind::DanglingReference,
                    "dangling reference: pair '" + pair.pair_id +
                        "' names unknown argument '" + *side + "'");
                sides_ok = false;
            }
        }
        if (sides_ok) {
            const Argument* a = args_by_id.at(pair.arg_a);
            const Argument* b = args_by_id.at(pair.arg_b);
            if (a->topic_id != pair.topic_id || b->topic_id != pair.topic_id) {
                add(ValidationIssue::Kind::CrossTopicPair,
                    "cross-topic pair: '" + pair.pair_id + "' mixes topics '" +
                        a->topic_id + "' and '" + b->topic_id + "' under '" +
                        pair.topic_id + "'");
            }
        }
    }
    return report;
}

}  // namespace argrank
