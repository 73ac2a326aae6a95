#include "argrank/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "argrank/csv.hpp"
#include "argrank/errors.hpp"

namespace argrank::report {

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string stat_cell(const metrics::Stat& stat, int decimals = 3) {
    return stat ? fmt(*stat, decimals) : "NA";
}

std::string mean_sd_cell(double mean, double sd, int decimals) {
    return fmt(mean, decimals) + " ± " + fmt(sd, decimals);
}

metrics::Stat parse_stat(const std::string& raw, const std::string& file,
                         std::size_t line) {
    if (raw == "NA") return std::nullopt;
    try {
        return std::stod(raw);
    } catch (...) {
        throw IoError(file + ":" + std::to_string(line) + ": bad number '" + raw + "'");
    }
}

double parse_num(const std::string& raw, const std::string& file, std::size_t line) {
    try {
        return std::stod(raw);
    } catch (...) {
        throw IoError(file + ":" + std::to_string(line) + ": bad number '" + raw + "'");
    }
}

const std::vector<std::string> kMetricHeader = {
    "dimension", "pearson",     "spearman",          "kendall_tau_b", "mae",
    "rmse",      "cohen_kappa", "percent_agreement", "n_pairs",       "n_args"};

std::vector<std::string> metric_row(const std::string& name,
                                    const metrics::DimensionMetrics& dm) {
    auto cell = [](const metrics::Stat& s) {
        return s ? csv::format_double(*s) : std::string("NA");
    };
    return {name,          cell(dm.pearson),     cell(dm.spearman),
            cell(dm.kendall_tau_b), cell(dm.mae), cell(dm.rmse),
            cell(dm.cohen_kappa),   cell(dm.percent_agreement),
            std::to_string(dm.n_pairs), std::to_string(dm.n_args)};
}

}  // namespace

void write_metric_report_csv(const std::string& path, const metrics::MetricReport& report) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [dim, dm] : report.per_dimension) {
        rows.push_back(metric_row(dimension_name(dim), dm));
    }
    rows.push_back(metric_row("mean", report.averaged_mean));
    rows.push_back(metric_row("sd", report.averaged_sd));
    csv::write_file(path, kMetricHeader, rows);
}

metrics::MetricReport read_metric_report_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    metrics::MetricReport report;
    for (const auto& row : table.rows) {
        auto get_stat = [&](const char* name) {
            return parse_stat(row.fields[table.column(name, path)], path, row.line);
        };
        metrics::DimensionMetrics dm;
        dm.pearson = get_stat("pearson");
        dm.spearman = get_stat("spearman");
        dm.kendall_tau_b = get_stat("kendall_tau_b");
        dm.mae = get_stat("mae");
        dm.rmse = get_stat("rmse");
        dm.cohen_kappa = get_stat("cohen_kappa");
        dm.percent_agreement = get_stat("percent_agreement");
        dm.n_pairs = std::stoull(row.fields[table.column("n_pairs", path)]);
        dm.n_args = std::stoull(row.fields[table.column("n_args", path)]);

        const std::string& name = row.fields[table.column("dimension", path)];
        if (name == "mean") {
            report.averaged_mean = dm;
        } else if (name == "sd") {
            report.averaged_sd = dm;
        } else {
            report.per_dimension.emplace(parse_dimension(name), dm);
            report.n_pairs_scored += dm.n_pairs;
            report.n_args_scored += dm.n_args;
        }
    }
    return report;
}

std::string render_metric_report_markdown(const metrics::MetricReport& report) {
    std::string out;
    out += "| Dim | Pearson (r) | Spearman (rho) | Kendall | MAE | RMSE | kappa IAA | % Agreement |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& [dim, dm] : report.per_dimension) {
        out += "| " + dimension_name(dim) + " | " + stat_cell(dm.pearson) + " | " +
               stat_cell(dm.spearman) + " | " + stat_cell(dm.kendall_tau_b) + " | " +
               stat_cell(dm.mae) + " | " + stat_cell(dm.rmse) + " | " +
               stat_cell(dm.cohen_kappa) + " | " + stat_cell(dm.percent_agreement, 2) +
               " |\n";
    }
    const auto& mean = report.averaged_mean;
    const auto& sd = report.averaged_sd;
    auto avg_cell = [&](const metrics::Stat& m, const metrics::Stat& s, int decimals) {
        if (!m) return std::string("NA");
        return mean_sd_cell(*m, s.value_or(0.0), decimals);
    };
    out += "| average | " + avg_cell(mean.pearson, sd.pearson, 3) + " | " +
           avg_cell(mean.spearman, sd.spearman, 3) + " | " +
           avg_cell(mean.kendall_tau_b, sd.kendall_tau_b, 3) + " | " +
           avg_cell(mean.mae, sd.mae, 3) + " | " + avg_cell(mean.rmse, sd.rmse, 3) + " | " +
           avg_cell(mean.cohen_kappa, sd.cohen_kappa, 3) + " | " +
           avg_cell(mean.percent_agreement, sd.percent_agreement, 2) + " |\n";
    return out;
}

namespace {

const std::vector<std::string> kVariabilityHeader = {
    "n_items",        "all_equal",     "two_equal",        "all_unequal",
    "pct_all_equal",  "pct_two_equal", "pct_all_unequal",  "krippendorff_alpha"};

}  // namespace

void write_variability_csv(const std::string& path,
                           const metrics::VariabilityReport& report) {
    std::vector<std::vector<std::string>> rows = {{
        std::to_string(report.n_items),
        std::to_string(report.all_equal),
        std::to_string(report.two_equal),
        std::to_string(report.all_unequal),
        csv::format_double(report.pct_all_equal),
        csv::format_double(report.pct_two_equal),
        csv::format_double(report.pct_all_unequal),
        report.krippendorff_alpha ? csv::format_double(*report.krippendorff_alpha)
                                  : std::string("NA"),
    }};
    csv::write_file(path, kVariabilityHeader, rows);
}

metrics::VariabilityReport read_variability_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    if (table.rows.size() != 1) {
        throw IoError(path + ": expected exactly one variability row");
    }
    const auto& row = table.rows[0];
    auto get = [&](const char* name) {
        return row.fields[table.column(name, path)];
    };
    metrics::VariabilityReport report;
    report.n_items = std::stoull(get("n_items"));
    report.all_equal = std::stoull(get("all_equal"));
    report.two_equal = std::stoull(get("two_equal"));
    report.all_unequal = std::stoull(get("all_unequal"));
    report.pct_all_equal = parse_num(get("pct_all_equal"), path, row.line);
    report.pct_two_equal = parse_num(get("pct_two_equal"), path, row.line);
    report.pct_all_unequal = parse_num(get("pct_all_unequal"), path, row.line);
    report.krippendorff_alpha = parse_stat(get("krippendorff_alpha"), path, row.line);
    return report;
}

std::string render_variability_markdown(const metrics::VariabilityReport& report) {
    std::string out;
    out += "| All equal # | All equal % | 2 equal # | 2 equal % | All unequal # | All unequal % | kripp. alpha |\n";
    out += "|---|---|---|---|---|---|---|\n";
    out += "| " + std::to_string(report.all_equal) + " | " + fmt(report.pct_all_equal, 2) +
           " | " + std::to_string(report.two_equal) + " | " + fmt(report.pct_two_equal, 2) +
           " | " + std::to_string(report.all_unequal) + " | " +
           fmt(report.pct_all_unequal, 2) + " | " + stat_cell(report.krippendorff_alpha, 2) +
           " |\n";
    return out;
}

// ---------------------------------------------------------------------------
// Reference tables
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kReferenceResultsHeader = {
    "model",        "prompt",      "pearson_mean",  "pearson_sd",  "spearman_mean",
    "spearman_sd",  "kendall_mean", "kendall_sd",   "mae_mean",    "mae_sd",
    "rmse_mean",    "rmse_sd",     "kappa_mean",    "kappa_sd",    "percent_mean",
    "percent_sd"};

const std::vector<std::string> kReferenceVariabilityHeader = {
    "model",
    "prompt",
    "all_equal_n_mean",
    "all_equal_n_sd",
    "all_equal_pct_mean",
    "all_equal_pct_sd",
    "two_equal_n_mean",
    "two_equal_n_sd",
    "two_equal_pct_mean",
    "two_equal_pct_sd",
    "all_unequal_n_mean",
    "all_unequal_n_sd",
    "all_unequal_pct_mean",
    "all_unequal_pct_sd",
    "alpha_mean",
    "alpha_sd"};

}  // namespace

std::vector<ReferenceResultRow> read_reference_results(const std::string& path) {
    const auto table = csv::read_file(path);
    std::vector<ReferenceResultRow> rows;
    for (const auto& row : table.rows) {
        auto get = [&](const char* name) {
            return parse_num(row.fields[table.column(name, path)], path, row.line);
        };
        ReferenceResultRow r;
        r.model = row.fields[table.column("model", path)];
        r.prompt = row.fields[table.column("prompt", path)];
        r.pearson_mean = get("pearson_mean");
        r.pearson_sd = get("pearson_sd");
        r.spearman_mean = get("spearman_mean");
        r.spearman_sd = get("spearman_sd");
        r.kendall_mean = get("kendall_mean");
        r.kendall_sd = get("kendall_sd");
        r.mae_mean = get("mae_mean");
        r.mae_sd = get("mae_sd");
        r.rmse_mean = get("rmse_mean");
        r.rmse_sd = get("rmse_sd");
        r.kappa_mean = get("kappa_mean");
        r.kappa_sd = get("kappa_sd");
        r.percent_mean = get("percent_mean");
        r.percent_sd = get("percent_sd");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_reference_results(const std::string& path,
                             const std::vector<ReferenceResultRow>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        out.push_back({r.model, r.prompt, fmt(r.pearson_mean, 3), fmt(r.pearson_sd, 3),
                       fmt(r.spearman_mean, 3), fmt(r.spearman_sd, 3), fmt(r.kendall_mean, 3),
                       fmt(r.kendall_sd, 3), fmt(r.mae_mean, 3), fmt(r.mae_sd, 3),
                       fmt(r.rmse_mean, 3), fmt(r.rmse_sd, 3), fmt(r.kappa_mean, 3),
                       fmt(r.kappa_sd, 3), fmt(r.percent_mean, 2), fmt(r.percent_sd, 2)});
    }
    csv::write_file(path, kReferenceResultsHeader, out);
}

std::string render_reference_results_markdown(const std::vector<ReferenceResultRow>& rows) {
    std::string out;
    out += "| Model | Prompt | Pearson (r) | Spearman (rho) | Kendall | MAE | RMSE | kappa IAA | % Agreement |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        out += "| " + r.model + " | " + r.prompt + " | " +
               mean_sd_cell(r.pearson_mean, r.pearson_sd, 3) + " | " +
               mean_sd_cell(r.spearman_mean, r.spearman_sd, 3) + " | " +
               mean_sd_cell(r.kendall_mean, r.kendall_sd, 3) + " | " +
               mean_sd_cell(r.mae_mean, r.mae_sd, 3) + " | " +
               mean_sd_cell(r.rmse_mean, r.rmse_sd, 3) + " | " +
               mean_sd_cell(r.kappa_mean, r.kappa_sd, 3) + " | " +
               mean_sd_cell(r.percent_mean, r.percent_sd, 2) + " |\n";
    }
    return out;
}

std::vector<ReferenceVariabilityRow> read_reference_variability(const std::string& path) {
    const auto table = csv::read_file(path);
    std::vector<ReferenceVariabilityRow> rows;
    for (const auto& row : table.rows) {
        auto get = [&](const char* name) {
            return parse_num(row.fields[table.column(name, path)], path, row.line);
        };
        ReferenceVariabilityRow r;
        r.model = row.fields[table.column("model", path)];
        r.prompt = row.fields[table.column("prompt", path)];
        r.all_equal_n_mean = get("all_equal_n_mean");
        r.all_equal_n_sd = get("all_equal_n_sd");
        r.all_equal_pct_mean = get("all_equal_pct_mean");
        r.all_equal_pct_sd = get("all_equal_pct_sd");
        r.two_equal_n_mean = get("two_equal_n_mean");
        r.two_equal_n_sd = get("two_equal_n_sd");
        r.two_equal_pct_mean = get("two_equal_pct_mean");
        r.two_equal_pct_sd = get("two_equal_pct_sd");
        r.all_unequal_n_mean = get("all_unequal_n_mean");
        r.all_unequal_n_sd = get("all_unequal_n_sd");
        r.all_unequal_pct_mean = get("all_unequal_pct_mean");
        r.all_unequal_pct_sd = get("all_unequal_pct_sd");
        r.alpha_mean = get("alpha_mean");
        r.alpha_sd = get("alpha_sd");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_reference_variability(const std::string& path,
                                 const std::vector<ReferenceVariabilityRow>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        out.push_back({r.model,
                       r.prompt,
                       fmt(r.all_equal_n_mean, 2),
                       fmt(r.all_equal_n_sd, 2),
                       fmt(r.all_equal_pct_mean, 2),
                       fmt(r.all_equal_pct_sd, 2),
                       fmt(r.two_equal_n_mean, 2),
                       fmt(r.two_equal_n_sd, 2),
                       fmt(r.two_equal_pct_mean, 2),
                       fmt(r.two_equal_pct_sd, 2),
                       fmt(r.all_unequal_n_mean, 2),
                       fmt(r.all_unequal_n_sd, 2),
                       fmt(r.all_unequal_pct_mean, 2),
                       fmt(r.all_unequal_pct_sd, 2),
                       fmt(r.alpha_mean, 2),
                       fmt(r.alpha_sd, 2)});
    }
    csv::write_file(path, kReferenceVariabilityHeader, out);
}

std::string render_reference_variability_markdown(
    const std::vector<ReferenceVariabilityRow>& rows) {
    std::string out;
    out += "| Model | Prompt | All equal # | All equal % | 2 equal # | 2 equal % | All unequal # | All unequal % | kripp. alpha |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        out += "| " + r.model + " | " + r.prompt + " | " +
               mean_sd_cell(r.all_equal_n_mean, r.all_equal_n_sd, 2) + " | " +
               mean_sd_cell(r.all_equal_pct_mean, r.all_equal_pct_sd, 2) + " | " +
               mean_sd_cell(r.two_equal_n_mean, r.two_equal_n_sd, 2) + " | " +
               mean_sd_cell(r.two_equal_pct_mean, r.two_equal_pct_sd, 2) + " | " +
               mean_sd_cell(r.all_unequal_n_mean, r.all_unequal_n_sd, 2) + " | " +
               mean_sd_cell(r.all_unequal_pct_mean, r.all_unequal_pct_sd, 2) + " | " +
               mean_sd_cell(r.alpha_mean, r.alpha_sd, 2) + " |\n";
    }
    return out;
}

void write_score_distribution_csv(const std::string& path,
                                  const std::map<bt::TopicDimKey, bt::BTFit>& fits,
                                  const GoldStandard& gold) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, fit] : fits) {
        for (std::size_t i = 0; i < fit.item_ids.size(); ++i) {
            rows.push_back({"llm", dimension_name(key.dimension), key.topic_id,
                            fit.item_ids[i], csv::format_double(fit.z[i])});
        }
    }
    for (const auto& [key, score] : gold.arg_scores) {
        rows.push_back({"expert", dimension_name(key.second), "", key.first,
                        csv::format_double(score)});
    }
    csv::write_file(path, {"source", "dimension", "topic_id", "argument_id", "score"}, rows);
}

}  // namespace argrank::report
