#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "argrank/btrank.hpp"
#include "argrank/core.hpp"

namespace argrank::io {

// Canonical on-disk corpus: five CSV files with fixed headers
// (topics.csv, arguments.csv, pairs.csv, gold_labels.csv, gold_scores.csv).
// All files use RFC-4180 quoting and load into a fully validated bundle
// with stable (id-sorted) iteration order.

struct CorpusBundle {
    Corpus corpus;
    GoldStandard gold;
    std::string source_path;
    std::string content_digest;  // sha256 over the five canonical files
};

struct CorpusStats {
    std::size_t n_topics = 0;
    std::size_t n_texts = 0;
    std::size_t n_argumentative = 0;
    std::size_t n_pairs = 0;
    std::size_t n_gold_labels = 0;
    std::size_t n_gold_scores = 0;
};

CorpusStats stats(const CorpusBundle& bundle);

// Throws IoError naming file/line/column on schema violations and
// ValidationError carrying the full issue list when the corpus is
// inconsistent.
CorpusBundle load_canonical(const std::string& dir_path);

void write_canonical(const std::string& dir_path, const Corpus& corpus,
                     const GoldStandard& gold);

// Column mapping from a source corpus export to the canonical schema; the
// shipped default targets the Webis-ArgQuality-20 release and every name
// can be overridden. Dimension tags map source spellings onto
// logic/rhetoric/dialectic.
struct WebisMapping {
    std::string arguments_file = "arguments.csv";
    std::string comparisons_file = "comparisons.csv";
    std::string scores_file = "scores.csv";

    std::string arg_id_col = "argument_id";
    std::string arg_topic_col = "topic";
    std::string arg_text_col = "text";
    std::string arg_argumentative_col = "is_argumentative";  // optional in source

    std::string cmp_pair_id_col = "pair_id";  // optional; synthesized if absent
    std::string cmp_topic_col = "topic";
    std::string cmp_arg_a_col = "argument_a";
    std::string cmp_arg_b_col = "argument_b";
    std::string cmp_dimension_col = "dimension";
    std::string cmp_label_col = "label";

    std::string score_arg_id_col = "argument_id";
    std::string score_dimension_col = "dimension";
    std::string score_value_col = "score";

    std::map<std::string, Dimension::Kind> dimension_aliases = {
        {"logic", Dimension::Kind::Logic},
        {"logical", Dimension::Kind::Logic},
        {"logical quality", Dimension::Kind::Logic},
        {"rhetoric", Dimension::Kind::Rhetoric},
        {"rhetorical", Dimension::Kind::Rhetoric},
        {"rhetorical quality", Dimension::Kind::Rhetoric},
        {"dialectic", Dimension::Kind::Dialectic},
        {"dialectical", Dimension::Kind::Dialectic},
        {"dialectical quality", Dimension::Kind::Dialectic},
    };
    // Label aliases for the source's winner column.
    std::map<std::string, Label> label_aliases = {
        {"a", Label::A}, {"1", Label::A},
        {"b", Label::B}, {"2", Label::B},
        {"tie", Label::Tie}, {"0", Label::Tie},
    };
};

// Loads mapping overrides from a TOML file ([files] / [columns] /
// [dimensions] / [labels] tables); missing keys keep their defaults.
WebisMapping load_mapping(const std::string& path);

// Converts a source export to canonical files under out_dir, then loads
// and returns the bundle. Idempotent: re-importing writes byte-identical
// canonical files.
CorpusBundle import_webis(const std::string& src_dir, const WebisMapping& mapping,
                          const std::string& out_dir);

// ---------------------------------------------------------------------------
// Fitted-score serialization (topic_id,dimension,argument_id,gamma,theta,z)
// ---------------------------------------------------------------------------

void write_fits(const std::string& path, const std::map<bt::TopicDimKey, bt::BTFit>& fits);
std::map<bt::TopicDimKey, bt::BTFit> read_fits(const std::string& path);

// Majority-voted labels (pair_id,dimension,label).
void write_labels(const std::string& path,
                  const std::map<std::pair<std::string, Dimension::Kind>, Label>& labels);
std::map<std::pair<std::string, Dimension::Kind>, Label> read_labels(
    const std::string& path);

}  // namespace argrank::io
