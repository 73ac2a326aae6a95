#pragma once

#include <map>
#include <string>
#include <vector>

#include "argrank/btrank.hpp"
#include "argrank/core.hpp"
#include "argrank/metrics.hpp"

namespace argrank::report {

// ---------------------------------------------------------------------------
// Own-run reports (evaluate / stability outputs)
// ---------------------------------------------------------------------------

// Per-dimension rows plus mean/sd rows; flagged nulls serialize as "NA".
void write_metric_report_csv(const std::string& path, const metrics::MetricReport& report);
metrics::MetricReport read_metric_report_csv(const std::string& path);
std::string render_metric_report_markdown(const metrics::MetricReport& report);

void write_variability_csv(const std::string& path,
                           const metrics::VariabilityReport& report);
metrics::VariabilityReport read_variability_csv(const std::string& path);
std::string render_variability_markdown(const metrics::VariabilityReport& report);

// ---------------------------------------------------------------------------
// Reference results shipped with the repository
// ---------------------------------------------------------------------------

// One model+prompt configuration with mean and sd per metric, averaged
// across the three quality dimensions.
struct ReferenceResultRow {
    std::string model;
    std::string prompt;  // zero | few | cot
    double pearson_mean = 0, pearson_sd = 0;
    double spearman_mean = 0, spearman_sd = 0;
    double kendall_mean = 0, kendall_sd = 0;
    double mae_mean = 0, mae_sd = 0;
    double rmse_mean = 0, rmse_sd = 0;
    double kappa_mean = 0, kappa_sd = 0;
    double percent_mean = 0, percent_sd = 0;
};

std::vector<ReferenceResultRow> read_reference_results(const std::string& path);
void write_reference_results(const std::string& path,
                             const std::vector<ReferenceResultRow>& rows);
std::string render_reference_results_markdown(const std::vector<ReferenceResultRow>& rows);

// Run-variability reference (counts and percentages of all-equal /
// 2-equal / all-unequal plus Krippendorff's alpha).
struct ReferenceVariabilityRow {
    std::string model;
    std::string prompt;
    double all_equal_n_mean = 0, all_equal_n_sd = 0;
    double all_equal_pct_mean = 0, all_equal_pct_sd = 0;
    double two_equal_n_mean = 0, two_equal_n_sd = 0;
    double two_equal_pct_mean = 0, two_equal_pct_sd = 0;
    double all_unequal_n_mean = 0, all_unequal_n_sd = 0;
    double all_unequal_pct_mean = 0, all_unequal_pct_sd = 0;
    double alpha_mean = 0, alpha_sd = 0;
};

std::vector<ReferenceVariabilityRow> read_reference_variability(const std::string& path);
void write_reference_variability(const std::string& path,
                                 const std::vector<ReferenceVariabilityRow>& rows);
std::string render_reference_variability_markdown(
    const std::vector<ReferenceVariabilityRow>& rows);

// ---------------------------------------------------------------------------
// Score-distribution export (plot-ready CSV, no rendering here)
// ---------------------------------------------------------------------------

// Long-format rows: source,dimension,topic_id,argument_id,score with one
// "llm" row per fitted argument and one "expert" row per gold score.
void write_score_distribution_csv(const std::string& path,
                                  const std::map<bt::TopicDimKey, bt::BTFit>& fits,
                                  const GoldStandard& gold);

}  // namespace argrank::report
