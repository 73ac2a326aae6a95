#pragma once

#include <array>
#include <optional>
#include <string>

#include "argrank/core.hpp"

namespace argrank::prompts {

enum class Strategy { ZeroShot, FewShot, ChainOfThought };

const std::string& strategy_name(Strategy strategy);  // "zero" | "few" | "cot"
Strategy parse_strategy(const std::string& name);

struct RenderedPrompt {
    std::string system;
    std::string user;
    std::array<std::string, 3> allowed_labels = {"A", "B", "Tie"};
    // sha256 of system, user and the label set, joined with 0x1F.
    std::string prompt_hash;
};

// One worked example for the few-shot system prompt.
struct Exemplar {
    std::string pair_id;
    std::string text_a;
    std::string text_b;
};

struct FewShotBundle {
    std::string topic_id;
    Dimension::Kind dimension = Dimension::Kind::Logic;
    Exemplar exemplar_a;    // gold label A, largest score margin
    Exemplar exemplar_b;    // gold label B, largest score margin
    Exemplar exemplar_tie;  // gold label Tie, smallest score margin
};

// Prompt templates are external text assets so their bytes can be checked
// against goldens without recompiling. A template directory holds
// zero_shot.txt, few_shot.txt, chain_of_thought.txt and user.txt; one
// trailing newline per file is ignored.
class TemplateSet {
public:
    static TemplateSet load(const std::string& dir);

    // Resolution order: ARGRANK_TEMPLATES env var, then the directory baked
    // in at build time.
    static std::string default_dir();

    // Substitutes {dim_adverb}, {a}, {b}, the {ex_*} exemplar slots and
    // {dim_criterias} (the dimension's criteria as "- question definition"
    // lines). FewShot requires a bundle, the other strategies reject one.
    // Unknown placeholders in a template are an error.
    RenderedPrompt render(Strategy strategy, Dimension::Kind dimension,
                          const std::string& text_a, const std::string& text_b,
                          const std::optional<FewShotBundle>& bundle = std::nullopt) const;

private:
    std::string zero_shot_;
    std::string few_shot_;
    std::string chain_of_thought_;
    std::string user_;
};

// Exemplar selection per the few-shot design: the A exemplar is the gold-A
// pair with the largest score difference in A's favor, the B exemplar is
// symmetric, and the Tie exemplar is the gold-Tie pair with the smallest
// absolute score difference. `exclude` removes the evaluated pair from
// candidacy; equal margins break ties by lexicographic pair_id. Throws
// ValidationError naming the label class when no candidate exists.
FewShotBundle select_fewshot(const Corpus& corpus, const GoldStandard& gold,
                             const std::string& topic_id, Dimension::Kind dimension,
                             const std::optional<std::string>& exclude = std::nullopt);

// Amortized selection over a whole campaign: the per-(topic, dimension)
// bundle is computed once and reused, re-selecting with exclusion only when
// the evaluated pair is itself one of the chosen exemplars. Not thread-safe;
// intended for the single-threaded prompt-preparation phase.
class FewShotSelector {
public:
    FewShotSelector(const Corpus& corpus, const GoldStandard& gold);

    FewShotBundle bundle_for(const std::string& topic_id, Dimension::Kind dimension,
                             const std::optional<std::string>& exclude);

private:
    const Corpus& corpus_;
    const GoldStandard& gold_;
    std::map<std::string, std::vector<const ComparisonPair*>> pairs_by_topic_;
    std::map<std::pair<std::string, Dimension::Kind>, FewShotBundle> base_;
};

}  // namespace argrank::prompts
