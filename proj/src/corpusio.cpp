#include "argrank/corpusio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "argrank/csv.hpp"
#include "argrank/digest.hpp"
#include "argrank/errors.hpp"
#include "argrank/toml.hpp"

namespace argrank::io {

namespace fs = std::filesystem;

namespace {

const char* kTopicsFile = "topics.csv";
const char* kArgumentsFile = "arguments.csv";
const char* kPairsFile = "pairs.csv";
const char* kGoldLabelsFile = "gold_labels.csv";
const char* kGoldScoresFile = "gold_scores.csv";

std::string cell_error(const std::string& file, std::size_t line, const std::string& col,
                       const std::string& what) {
    return file + ":" + std::to_string(line) + ": column '" + col + "': " + what;
}

double parse_finite_double(const std::string& raw, const std::string& file,
                           std::size_t line, const std::string& col) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(raw, &consumed);
        if (consumed != raw.size() || !std::isfinite(v)) {
            throw std::invalid_argument(raw);
        }
        return v;
    } catch (...) {
        throw IoError(cell_error(file, line, col, "expected finite number, got '" + raw + "'"));
    }
}

bool parse_bool(const std::string& raw, const std::string& file, std::size_t line,
                const std::string& col) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw IoError(cell_error(file, line, col, "expected boolean, got '" + raw + "'"));
}

std::string lower_copy(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

CorpusStats stats(const CorpusBundle& bundle) {
    CorpusStats s;
    s.n_topics = bundle.corpus.topics.size();
    s.n_texts = bundle.corpus.arguments.size();
    s.n_argumentative = static_cast<std::size_t>(
        std::count_if(bundle.corpus.arguments.begin(), bundle.corpus.arguments.end(),
                      [](const Argument& a) { return a.is_argumentative; }));
    s.n_pairs = bundle.corpus.pairs.size();
    s.n_gold_labels = bundle.gold.pair_labels.size();
    s.n_gold_scores = bundle.gold.arg_scores.size();
    return s;
}

CorpusBundle load_canonical(const std::string& dir_path) {
    CorpusBundle bundle;
    bundle.source_path = dir_path;

    const std::string topics_path = dir_path + "/" + kTopicsFile;
    const std::string arguments_path = dir_path + "/" + kArgumentsFile;
    const std::string pairs_path = dir_path + "/" + kPairsFile;
    const std::string gold_labels_path = dir_path + "/" + kGoldLabelsFile;
    const std::string gold_scores_path = dir_path + "/" + kGoldScoresFile;

    {
        const auto table = csv::read_file(topics_path);
        const auto id_col = table.column("topic_id", topics_path);
        const auto title_col = table.column("title", topics_path);
        for (const auto& row : table.rows) {
            bundle.corpus.topics.push_back(Topic{row.fields[id_col], row.fields[title_col]});
        }
    }
    {
        const auto table = csv::read_file(arguments_path);
        const auto id_col = table.column("argument_id", arguments_path);
        const auto topic_col = table.column("topic_id", arguments_path);
        const auto argumentative_col = table.column("is_argumentative", arguments_path);
        const auto text_col = table.column("text", arguments_path);
        for (const auto& row : table.rows) {
            Argument arg;
            arg.id = row.fields[id_col];
            arg.topic_id = row.fields[topic_col];
            arg.is_argumentative =
                parse_bool(row.fields[argumentative_col], arguments_path, row.line,
                           "is_argumentative");
            arg.text = row.fields[text_col];
            bundle.corpus.arguments.push_back(std::move(arg));
        }
    }
    {
        const auto table = csv::read_file(pairs_path);
        const auto id_col = table.column("pair_id", pairs_path);
        const auto topic_col = table.column("topic_id", pairs_path);
        const auto a_col = table.column("arg_a", pairs_path);
        const auto b_col = table.column("arg_b", pairs_path);
        for (const auto& row : table.rows) {
            bundle.corpus.pairs.push_back(ComparisonPair{
                row.fields[id_col], row.fields[topic_col], row.fields[a_col],
                row.fields[b_col]});
        }
    }
    {
        const auto table = csv::read_file(gold_labels_path);
        const auto pair_col = table.column("pair_id", gold_labels_path);
        const auto dim_col = table.column("dimension", gold_labels_path);
        const auto label_col = table.column("label", gold_labels_path);
        for (const auto& row : table.rows) {
            Dimension::Kind dim;
            try {
                dim = parse_dimension(row.fields[dim_col]);
            } catch (const Error& e) {
                throw IoError(cell_error(gold_labels_path, row.line, "dimension", e.what()));
            }
            Label label;
            try {
                label = parse_label(row.fields[label_col]);
            } catch (const Error& e) {
                throw IoError(cell_error(gold_labels_path, row.line, "label", e.what()));
            }
            const auto key = std::make_pair(row.fields[pair_col], dim);
            if (!bundle.gold.pair_labels.emplace(key, label).second) {
                throw IoError(gold_labels_path + ":" + std::to_string(row.line) +
                              ": duplicate gold label for pair '" + key.first +
                              "' dimension '" + dimension_name(dim) + "'");
            }
        }
    }
    {
        const auto table = csv::read_file(gold_scores_path);
        const auto arg_col = table.column("argument_id", gold_scores_path);
        const auto dim_col = table.column("dimension", gold_scores_path);
        const auto score_col = table.column("score", gold_scores_path);
        for (const auto& row : table.rows) {
            Dimension::Kind dim;
            try {
                dim = parse_dimension(row.fields[dim_col]);
            } catch (const Error& e) {
                throw IoError(cell_error(gold_scores_path, row.line, "dimension", e.what()));
            }
            const double score =
                parse_finite_double(row.fields[score_col], gold_scores_path, row.line, "score");
            const auto key = std::make_pair(row.fields[arg_col], dim);
            if (!bundle.gold.arg_scores.emplace(key, score).second) {
                throw IoError(gold_scores_path + ":" + std::to_string(row.line) +
                              ": duplicate gold score for argument '" + key.first + "'");
            }
        }
    }

    // Stable iteration order regardless of input row order.
    std::sort(bundle.corpus.topics.begin(), bundle.corpus.topics.end(),
              [](const Topic& a, const Topic& b) { return a.id < b.id; });
    std::sort(bundle.corpus.arguments.begin(), bundle.corpus.arguments.end(),
              [](const Argument& a, const Argument& b) { return a.id < b.id; });
    std::sort(bundle.corpus.pairs.begin(), bundle.corpus.pairs.end(),
              [](const ComparisonPair& a, const ComparisonPair& b) {
                  return a.pair_id < b.pair_id;
              });
    bundle.corpus.reindex();

    const auto report =
        validate_corpus(bundle.corpus.arguments, bundle.corpus.topics, bundle.corpus.pairs);
    std::vector<std::string> problems;
    for (const auto& issue : report.issues) problems.push_back(issue.message);
    // Gold references must resolve too.
    for (const auto& [key, label] : bundle.gold.pair_labels) {
        (void)label;
        if (bundle.corpus.find_pair(key.first) == nullptr) {
            problems.push_back("gold label references unknown pair '" + key.first + "'");
        }
    }
    for (const auto& [key, score] : bundle.gold.arg_scores) {
        (void)score;
        if (bundle.corpus.find_argument(key.first) == nullptr) {
            problems.push_back("gold score references unknown argument '" + key.first + "'");
        }
    }
    if (!problems.empty()) {
        std::string msg = dir_path + ": corpus validation failed with " +
                          std::to_string(problems.size()) + " issue(s):";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }

    std::string digest_input;
    for (const char* name :
         {kTopicsFile, kArgumentsFile, kPairsFile, kGoldLabelsFile, kGoldScoresFile}) {
        digest_input += name;
        digest_input += ':';
        digest_input += sha256_file(dir_path + "/" + name);
        digest_input += '\n';
    }
    bundle.content_digest = sha256_hex(digest_input);
    return bundle;
}

void write_canonical(const std::string& dir_path, const Corpus& corpus,
                     const GoldStandard& gold) {
    fs::create_directories(dir_path);

    auto sorted_topics = corpus.topics;
    std::sort(sorted_topics.begin(), sorted_topics.end(),
              [](const Topic& a, const Topic& b) { return a.id < b.id; });
    auto sorted_arguments = corpus.arguments;
    std::sort(sorted_arguments.begin(), sorted_arguments.end(),
              [](const Argument& a, const Argument& b) { return a.id < b.id; });
    auto sorted_pairs = corpus.pairs;
    std::sort(sorted_pairs.begin(), sorted_pairs.end(),
              [](const ComparisonPair& a, const ComparisonPair& b) {
                  return a.pair_id < b.pair_id;
              });

    std::vector<std::vector<std::string>> rows;
    for (const auto& t : sorted_topics) rows.push_back({t.id, t.title});
    csv::write_file(dir_path + "/" + kTopicsFile, {"topic_id", "title"}, rows);

    rows.clear();
    for (const auto& a : sorted_arguments) {
        rows.push_back({a.id, a.topic_id, a.is_argumentative ? "true" : "false", a.text});
    }
    csv::write_file(dir_path + "/" + kArgumentsFile,
                    {"argument_id", "topic_id", "is_argumentative", "text"}, rows);

    rows.clear();
    for (const auto& p : sorted_pairs) {
        rows.push_back({p.pair_id, p.topic_id, p.arg_a, p.arg_b});
    }
    csv::write_file(dir_path + "/" + kPairsFile, {"pair_id", "topic_id", "arg_a", "arg_b"},
                    rows);

    rows.clear();
    for (const auto& [key, label] : gold.pair_labels) {
        rows.push_back({key.first, dimension_name(key.second), label_name(label)});
    }
    csv::write_file(dir_path + "/" + kGoldLabelsFile, {"pair_id", "dimension", "label"}, rows);

    rows.clear();
    for (const auto& [key, score] : gold.arg_scores) {
        rows.push_back({key.first, dimension_name(key.second), csv::format_double(score)});
    }
    csv::write_file(dir_path + "/" + kGoldScoresFile, {"argument_id", "dimension", "score"},
                    rows);
}

WebisMapping load_mapping(const std::string& path) {
    const auto doc = toml::Document::parse_file(path);
    WebisMapping m;
    auto set = [&](std::string& field, const std::string& key) {
        if (auto v = doc.get_string(key)) field = *v;
    };
    set(m.arguments_file, "files.arguments");
    set(m.comparisons_file, "files.comparisons");
    set(m.scores_file, "files.scores");
    set(m.arg_id_col, "columns.argument_id");
    set(m.arg_topic_col, "columns.argument_topic");
    set(m.arg_text_col, "columns.argument_text");
    set(m.arg_argumentative_col, "columns.argument_is_argumentative");
    set(m.cmp_pair_id_col, "columns.comparison_pair_id");
    set(m.cmp_topic_col, "columns.comparison_topic");
    set(m.cmp_arg_a_col, "columns.comparison_arg_a");
    set(m.cmp_arg_b_col, "columns.comparison_arg_b");
    set(m.cmp_dimension_col, "columns.comparison_dimension");
    set(m.cmp_label_col, "columns.comparison_label");
    set(m.score_arg_id_col, "columns.score_argument_id");
    set(m.score_dimension_col, "columns.score_dimension");
    set(m.score_value_col, "columns.score_value");

    for (const auto& key : doc.keys_with_prefix("dimensions")) {
        const std::string alias = key.substr(std::string("dimensions.").size());
        m.dimension_aliases[lower_copy(alias)] = parse_dimension(*doc.get_string(key));
    }
    for (const auto& key : doc.keys_with_prefix("labels")) {
        const std::string alias = key.substr(std::string("labels.").size());
        m.label_aliases[lower_copy(alias)] = parse_label(*doc.get_string(key));
    }
    return m;
}

CorpusBundle import_webis(const std::string& src_dir, const WebisMapping& mapping,
                          const std::string& out_dir) {
    Corpus corpus;
    GoldStandard gold;
    std::map<std::string, std::string> topics_seen;  // id -> title

    auto map_dimension = [&](const std::string& raw, const std::string& file,
                             std::size_t line) {
        auto it = mapping.dimension_aliases.find(lower_copy(trim_copy(raw)));
        if (it == mapping.dimension_aliases.end()) {
            throw IoError(cell_error(file, line, "dimension", "unmapped value '" + raw + "'"));
        }
        return it->second;
    };
    auto map_label = [&](const std::string& raw, const std::string& file, std::size_t line) {
        auto it = mapping.label_aliases.find(lower_copy(trim_copy(raw)));
        if (it == mapping.label_aliases.end()) {
            throw IoError(cell_error(file, line, "label", "unmapped value '" + raw + "'"));
        }
        return it->second;
    };

    {
        const std::string path = src_dir + "/" + mapping.arguments_file;
        const auto table = csv::read_file(path);
        const auto id_col = table.column(mapping.arg_id_col, path);
        const auto topic_col = table.column(mapping.arg_topic_col, path);
        const auto text_col = table.column(mapping.arg_text_col, path);
        const auto argumentative_col = table.find_column(mapping.arg_argumentative_col);
        for (const auto& row : table.rows) {
            Argument arg;
            arg.id = row.fields[id_col];
            arg.topic_id = row.fields[topic_col];
            arg.text = row.fields[text_col];
            arg.is_argumentative =
                argumentative_col
                    ? parse_bool(lower_copy(row.fields[*argumentative_col]), path, row.line,
                                 mapping.arg_argumentative_col)
                    : true;
            topics_seen.try_emplace(arg.topic_id, arg.topic_id);
            corpus.arguments.push_back(std::move(arg));
        }
    }
    {
        const std::string path = src_dir + "/" + mapping.comparisons_file;
        const auto table = csv::read_file(path);
        const auto topic_col = table.column(mapping.cmp_topic_col, path);
        const auto a_col = table.column(mapping.cmp_arg_a_col, path);
        const auto b_col = table.column(mapping.cmp_arg_b_col, path);
        const auto dim_col = table.column(mapping.cmp_dimension_col, path);
        const auto label_col = table.column(mapping.cmp_label_col, path);
        const auto pair_col = table.find_column(mapping.cmp_pair_id_col);

        std::map<std::pair<std::string, std::string>, std::string> pair_ids;
        std::size_t synthesized = 0;
        for (const auto& row : table.rows) {
            const std::string& arg_a = row.fields[a_col];
            const std::string& arg_b = row.fields[b_col];
            const auto pair_key = std::make_pair(arg_a, arg_b);

            std::string pair_id;
            if (pair_col) {
                pair_id = row.fields[*pair_col];
            } else {
                auto it = pair_ids.find(pair_key);
                if (it != pair_ids.end()) {
                    pair_id = it->second;
                } else {
                    char buf[16];
                    std::snprintf(buf, sizeof(buf), "wp%06zu", synthesized++);
                    pair_id = buf;
                }
            }
            if (pair_ids.try_emplace(pair_key, pair_id).second) {
                corpus.pairs.push_back(ComparisonPair{pair_id, row.fields[topic_col],
                                                      arg_a, arg_b});
                topics_seen.try_emplace(row.fields[topic_col], row.fields[topic_col]);
            }
            const auto dim = map_dimension(row.fields[dim_col], path, row.line);
            const auto label = map_label(row.fields[label_col], path, row.line);
            const auto key = std::make_pair(pair_id, dim);
            if (!gold.pair_labels.emplace(key, label).second) {
                throw IoError(path + ":" + std::to_string(row.line) +
                              ": duplicate gold label for pair '" + pair_id + "'");
            }
        }
    }
    {
        const std::string path = src_dir + "/" + mapping.scores_file;
        const auto table = csv::read_file(path);
        const auto arg_col = table.column(mapping.score_arg_id_col, path);
        const auto dim_col = table.column(mapping.score_dimension_col, path);
        const auto value_col = table.column(mapping.score_value_col, path);
        for (const auto& row : table.rows) {
            const auto dim = map_dimension(row.fields[dim_col], path, row.line);
            const double score = parse_finite_double(row.fields[value_col], path, row.line,
                                                     mapping.score_value_col);
            const auto key = std::make_pair(row.fields[arg_col], dim);
            if (!gold.arg_scores.emplace(key, score).second) {
                throw IoError(path + ":" + std::to_string(row.line) +
                              ": duplicate gold score for argument '" + key.first + "'");
            }
        }
    }

    for (const auto& [id, title] : topics_seen) corpus.topics.push_back(Topic{id, title});

    write_canonical(out_dir, corpus, gold);
    return load_canonical(out_dir);
}

// ---------------------------------------------------------------------------
// Fit and label serialization
// ---------------------------------------------------------------------------

void write_fits(const std::string& path, const std::map<bt::TopicDimKey, bt::BTFit>& fits) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, fit] : fits) {
        for (std::size_t i = 0; i < fit.item_ids.size(); ++i) {
            rows.push_back({key.topic_id, dimension_name(key.dimension), fit.item_ids[i],
                            csv::format_double(fit.gamma[i]), csv::format_double(fit.theta[i]),
                            csv::format_double(fit.z[i])});
        }
    }
    csv::write_file(path, {"topic_id", "dimension", "argument_id", "gamma", "theta", "z"},
                    rows);
}

std::map<bt::TopicDimKey, bt::BTFit> read_fits(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto topic_col = table.column("topic_id", path);
    const auto dim_col = table.column("dimension", path);
    const auto arg_col = table.column("argument_id", path);
    const auto gamma_col = table.column("gamma", path);
    const auto theta_col = table.column("theta", path);
    const auto z_col = table.column("z", path);

    std::map<bt::TopicDimKey, bt::BTFit> fits;
    for (const auto& row : table.rows) {
        Dimension::Kind dim;
        try {
            dim = parse_dimension(row.fields[dim_col]);
        } catch (const Error& e) {
            throw IoError(cell_error(path, row.line, "dimension", e.what()));
        }
        auto& fit = fits[{row.fields[topic_col], dim}];
        fit.item_ids.push_back(row.fields[arg_col]);
        fit.gamma.push_back(parse_finite_double(row.fields[gamma_col], path, row.line, "gamma"));
        fit.theta.push_back(parse_finite_double(row.fields[theta_col], path, row.line, "theta"));
        fit.z.push_back(parse_finite_double(row.fields[z_col], path, row.line, "z"));
    }
    return fits;
}

void write_labels(const std::string& path,
                  const std::map<std::pair<std::string, Dimension::Kind>, Label>& labels) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, label] : labels) {
        rows.push_back({key.first, dimension_name(key.second), label_name(label)});
    }
    csv::write_file(path, {"pair_id", "dimension", "label"}, rows);
}

std::map<std::pair<std::string, Dimension::Kind>, Label> read_labels(const std::string& path) {
    const auto table = csv::read_file(path);
    const auto pair_col = table.column("pair_id", path);
    const auto dim_col = table.column("dimension", path);
    const auto label_col = table.column("label", path);
    std::map<std::pair<std::string, Dimension::Kind>, Label> labels;
    for (const auto& row : table.rows) {
        Dimension::Kind dim;
        Label label;
        try {
            dim = parse_dimension(row.fields[dim_col]);
            label = parse_label(row.fields[label_col]);
        } catch (const Error& e) {
            throw IoError(path + ":" + std::to_string(row.line) + ": " + e.what());
        }
        if (!labels.emplace(std::make_pair(row.fields[pair_col], dim), label).second) {
            throw IoError(path + ":" + std::to_string(row.line) + ": duplicate label row");
        }
    }
    return labels;
}

}  // namespace argrank::io
