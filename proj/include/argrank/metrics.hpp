#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "argrank/btrank.hpp"
#include "argrank/core.hpp"

namespace argrank::metrics {

// Degenerate statistics (zero variance, chance agreement 1) come back as
// an empty optional, never as NaN.
using Stat = std::optional<double>;

double pearson_or_throw(const std::vector<double>& x, const std::vector<double>& y);

Stat pearson(const std::vector<double>& x, const std::vector<double>& y);
Stat spearman(const std::vector<double>& x, const std::vector<double>& y);
Stat kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

// Average ranks with mid-ranks for ties (1-based).
std::vector<double> average_ranks(const std::vector<double>& values);

// (MAE, RMSE); inputs must be aligned and equally sized.
std::pair<double, double> mae_rmse(const std::vector<double>& z_pred,
                                   const std::vector<double>& z_gold);

// Unweighted 3-category kappa with marginal-product chance agreement.
Stat cohen_kappa(const std::vector<Label>& labels_1, const std::vector<Label>& labels_2);

double percent_agreement(const std::vector<Label>& labels_1,
                         const std::vector<Label>& labels_2);

// Nominal-level alpha over an items x raters matrix; std::nullopt entries
// are missing ratings. Units with < 2 ratings are excluded; if none remain
// the result is a flagged null.
Stat krippendorff_alpha_nominal(
    const std::vector<std::vector<std::optional<Label>>>& runs_matrix);

// ---------------------------------------------------------------------------
// Run-variability classification
// ---------------------------------------------------------------------------

struct VariabilityReport {
    std::size_t n_items = 0;
    std::size_t all_equal = 0;
    std::size_t two_equal = 0;
    std::size_t all_unequal = 0;
    double pct_all_equal = 0.0;
    double pct_two_equal = 0.0;
    double pct_all_unequal = 0.0;
    Stat krippendorff_alpha;
};

// Classifies each item's run labels as all-equal / two-equal / all-unequal
// and attaches alpha over the run matrix. Items must all carry `runs`
// labels.
VariabilityReport variability_classify(const std::vector<std::vector<Label>>& item_runs,
                                       int runs = 3);

// ---------------------------------------------------------------------------
// LLM-vs-gold evaluation
// ---------------------------------------------------------------------------

struct DimensionMetrics {
    Stat pearson;
    Stat spearman;
    Stat kendall_tau_b;
    Stat mae;
    Stat rmse;
    Stat cohen_kappa;
    Stat percent_agreement;
    std::size_t n_pairs = 0;  // (pair, dimension) labels compared
    std::size_t n_args = 0;   // pooled standardized score points
};

struct MetricReport {
    std::map<Dimension::Kind, DimensionMetrics> per_dimension;
    DimensionMetrics averaged_mean;  // mean across dimensions with data
    DimensionMetrics averaged_sd;    // population sd across those dimensions
    std::size_t n_pairs_scored = 0;
    std::size_t n_args_scored = 0;
};

// Correlations and MAE/RMSE are computed on per-(topic, dimension)
// standardized scores pooled across topics within each dimension; both the
// fitted thetas and the gold scores are standardized over their common
// argument set. Kappa and percent agreement compare the majority-voted
// labels against gold pair labels directly.
// Throws ValidationError when fits/labels and gold share no data at all.
MetricReport evaluate(
    const std::map<bt::TopicDimKey, bt::BTFit>& llm_fits,
    const std::map<std::pair<std::string, Dimension::Kind>, Label>& llm_pair_labels,
    const GoldStandard& gold, const Corpus& corpus);

}  // namespace argrank::metrics
