#include "argrank/promptkit.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "argrank/digest.hpp"
#include "argrank/errors.hpp"

#ifndef ARGRANK_TEMPLATE_DIR
#define ARGRANK_TEMPLATE_DIR "templates"
#endif

namespace argrank::prompts {

const std::string& strategy_name(Strategy strategy) {
    static const std::string zero = "zero";
    static const std::string few = "few";
    static const std::string cot = "cot";
    switch (strategy) {
        case Strategy::ZeroShot: return zero;
        case Strategy::FewShot: return few;
        case Strategy::ChainOfThought: return cot;
    }
    throw ConfigError("unknown prompt strategy");
}

Strategy parse_strategy(const std::string& name) {
    if (name == "zero") return Strategy::ZeroShot;
    if (name == "few") return Strategy::FewShot;
    if (name == "cot") return Strategy::ChainOfThought;
    throw ConfigError("unknown prompt strategy '" + name +
                      "' (expected zero, few or cot)");
}

namespace {

std::string read_template(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open template " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // POSIX text files end with a newline that is not part of the template.
    if (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return text;
}

// Single-pass substitution: the template is split into literals and
// placeholders up front, so braces inside substituted values can never be
// re-interpreted, and an unknown placeholder is caught every time.
std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        const char c = tmpl[i];
        if (c != '{') {
            out += c;
            ++i;
            continue;
        }
        const std::size_t close = tmpl.find('}', i);
        if (close == std::string::npos) {
            throw ValidationError("template: unterminated placeholder near '" +
                                  tmpl.substr(i, 20) + "'");
        }
        const std::string name = tmpl.substr(i + 1, close - i - 1);
        auto it = values.find(name);
        if (it == values.end()) {
            throw ValidationError("template: unknown placeholder '{" + name + "}'");
        }
        out += it->second;
        i = close + 1;
    }
    return out;
}

std::string criteria_block(Dimension::Kind kind) {
    const Dimension& dim = dimension(kind);
    std::string out;
    for (std::size_t i = 0; i < dim.criteria.size(); ++i) {
        if (i) out += '\n';
        out += "- " + dim.criteria[i].question + " " + dim.criteria[i].definition;
    }
    return out;
}

}  // namespace

TemplateSet TemplateSet::load(const std::string& dir) {
    TemplateSet set;
    set.zero_shot_ = read_template(dir + "/zero_shot.txt");
    set.few_shot_ = read_template(dir + "/few_shot.txt");
    set.chain_of_thought_ = read_template(dir + "/chain_of_thought.txt");
    set.user_ = read_template(dir + "/user.txt");
    return set;
}

std::string TemplateSet::default_dir() {
    if (const char* env = std::getenv("ARGRANK_TEMPLATES")) return env;
    return ARGRANK_TEMPLATE_DIR;
}

RenderedPrompt TemplateSet::render(Strategy strategy, Dimension::Kind dim,
                                   const std::string& text_a, const std::string& text_b,
                                   const std::optional<FewShotBundle>& bundle) const {
    if (strategy == Strategy::FewShot && !bundle) {
        throw ConfigError("render: few-shot strategy requires an exemplar bundle");
    }
    if (strategy != Strategy::FewShot && bundle) {
        throw ConfigError("render: exemplar bundle given for a non-few-shot strategy");
    }

    std::map<std::string, std::string> values = {
        {"dim_adverb", dimension_adverb(dim)},
        {"a", text_a},
        {"b", text_b},
    };

    const std::string* system_template = nullptr;
    switch (strategy) {
        case Strategy::ZeroShot:
            system_template = &zero_shot_;
            break;
        case Strategy::FewShot:
            system_template = &few_shot_;
            values["ex_A_argA"] = bundle->exemplar_a.text_a;
            values["ex_A_argB"] = bundle->exemplar_a.text_b;
            values["ex_B_argA"] = bundle->exemplar_b.text_a;
            values["ex_B_argB"] = bundle->exemplar_b.text_b;
            values["ex_tie_argA"] = bundle->exemplar_tie.text_a;
            values["ex_tie_argB"] = bundle->exemplar_tie.text_b;
            break;
        case Strategy::ChainOfThought:
            system_template = &chain_of_thought_;
            values["dim_criterias"] = criteria_block(dim);
            break;
    }

    RenderedPrompt prompt;
    prompt.system = substitute(*system_template, values);
    prompt.user = substitute(user_, values);
    prompt.prompt_hash = sha256_hex(prompt.system + '\x1f' + prompt.user + '\x1f' +
                                    prompt.allowed_labels[0] + '\x1f' +
                                    prompt.allowed_labels[1] + '\x1f' +
                                    prompt.allowed_labels[2]);
    return prompt;
}

namespace {

struct Candidate {
    std::string pair_id;
    double margin = 0.0;
    const ComparisonPair* pair = nullptr;
};

Exemplar to_exemplar(const Corpus& corpus, const ComparisonPair& pair) {
    const Argument* a = corpus.find_argument(pair.arg_a);
    const Argument* b = corpus.find_argument(pair.arg_b);
    if (a == nullptr || b == nullptr) {
        throw ValidationError("few-shot exemplar selection: pair '" + pair.pair_id +
                              "' references unknown arguments");
    }
    return Exemplar{pair.pair_id, a->text, b->text};
}

}  // namespace

namespace {

FewShotBundle select_from(const std::vector<const ComparisonPair*>& topic_pairs,
                          const Corpus& corpus, const GoldStandard& gold,
                          const std::string& topic_id, Dimension::Kind dim,
                          const std::optional<std::string>& exclude) {
    // best-by-class: A and B want the largest margin, Tie the smallest
    // absolute margin; lexicographic pair_id breaks exact margin ties.
    std::optional<Candidate> best_a, best_b, best_tie;

    auto better_max = [](const Candidate& cand, const std::optional<Candidate>& cur) {
        return !cur || cand.margin > cur->margin ||
               (cand.margin == cur->margin && cand.pair_id < cur->pair_id);
    };
    auto better_min = [](const Candidate& cand, const std::optional<Candidate>& cur) {
        return !cur || cand.margin < cur->margin ||
               (cand.margin == cur->margin && cand.pair_id < cur->pair_id);
    };

    for (const ComparisonPair* pair : topic_pairs) {
        if (exclude && pair->pair_id == *exclude) continue;
        const auto label = gold.pair_label(pair->pair_id, dim);
        if (!label) continue;
        const auto score_a = gold.arg_score(pair->arg_a, dim);
        const auto score_b = gold.arg_score(pair->arg_b, dim);
        if (!score_a || !score_b) continue;
        const double diff = *score_a - *score_b;

        Candidate cand{pair->pair_id, 0.0, pair};
        switch (*label) {
            case Label::A:
                if (diff <= 0.0) break;  // want the score order to back the label
                cand.margin = diff;
                if (better_max(cand, best_a)) best_a = cand;
                break;
            case Label::B:
                if (diff >= 0.0) break;
                cand.margin = -diff;
                if (better_max(cand, best_b)) best_b = cand;
                break;
            case Label::Tie:
                cand.margin = std::abs(diff);
                if (better_min(cand, best_tie)) best_tie = cand;
                break;
        }
    }

    auto require = [&](const std::optional<Candidate>& cand, const char* cls) {
        if (!cand) {
            throw ValidationError(std::string("few-shot exemplar selection: no usable '") +
                                  cls + "' pair in topic '" + topic_id + "' dimension '" +
                                  dimension_name(dim) + "'");
        }
    };
    require(best_a, "A");
    require(best_b, "B");
    require(best_tie, "Tie");

    FewShotBundle bundle;
    bundle.topic_id = topic_id;
    bundle.dimension = dim;
    bundle.exemplar_a = to_exemplar(corpus, *best_a->pair);
    bundle.exemplar_b = to_exemplar(corpus, *best_b->pair);
    bundle.exemplar_tie = to_exemplar(corpus, *best_tie->pair);
    return bundle;
}

}  // namespace

FewShotBundle select_fewshot(const Corpus& corpus, const GoldStandard& gold,
                             const std::string& topic_id, Dimension::Kind dim,
                             const std::optional<std::string>& exclude) {
    std::vector<const ComparisonPair*> topic_pairs;
    for (const auto& pair : corpus.pairs) {
        if (pair.topic_id == topic_id) topic_pairs.push_back(&pair);
    }
    return select_from(topic_pairs, corpus, gold, topic_id, dim, exclude);
}

FewShotSelector::FewShotSelector(const Corpus& corpus, const GoldStandard& gold)
    : corpus_(corpus), gold_(gold) {
    for (const auto& pair : corpus.pairs) {
        pairs_by_topic_[pair.topic_id].push_back(&pair);
    }
}

FewShotBundle FewShotSelector::bundle_for(const std::string& topic_id, Dimension::Kind dim,
                                          const std::optional<std::string>& exclude) {
    auto topic_it = pairs_by_topic_.find(topic_id);
    if (topic_it == pairs_by_topic_.end()) {
        throw ValidationError("few-shot exemplar selection: no pairs in topic '" + topic_id +
                              "'");
    }
    auto base_it = base_.find({topic_id, dim});
    if (base_it == base_.end()) {
        base_it = base_
                      .emplace(std::make_pair(topic_id, dim),
                               select_from(topic_it->second, corpus_, gold_, topic_id, dim,
                                           std::nullopt))
                      .first;
    }
    const FewShotBundle& base = base_it->second;
    if (!exclude || (base.exemplar_a.pair_id != *exclude &&
                     base.exemplar_b.pair_id != *exclude &&
                     base.exemplar_tie.pair_id != *exclude)) {
        return base;
    }
    // The evaluated pair is one of the exemplars; re-select without it.
    return select_from(topic_it->second, corpus_, gold_, topic_id, dim, exclude);
}

}  // namespace argrank::prompts
