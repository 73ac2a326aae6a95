#include "argrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "argrank/errors.hpp"

namespace argrank::metrics {

namespace {

void check_lengths(const std::vector<double>& x, const std::vector<double>& y,
                   const char* what) {
    if (x.size() != y.size()) {
        throw ValidationError(std::string(what) + ": length mismatch (" +
                              std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    }
}

double clamp_correlation(double v) { return std::clamp(v, -1.0, 1.0); }

constexpr std::size_t kNumLabels = 3;

std::size_t label_index(Label label) { return static_cast<std::size_t>(label); }

}  // namespace

double pearson_or_throw(const std::vector<double>& x, const std::vector<double>& y) {
    auto r = pearson(x, y);
    if (!r) throw ValidationError("pearson: undefined on constant input");
    return *r;
}

Stat pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, "pearson");
    if (x.size() < 2) throw ValidationError("pearson: need at least 2 points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return clamp_correlation(sxy / std::sqrt(sxx * syy));
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Mid-rank for the tied block [i, j], 1-based.
        const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

Stat spearman(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, "spearman");
    if (x.size() < 2) throw ValidationError("spearman: need at least 2 points");
    return pearson(average_ranks(x), average_ranks(y));
}

Stat kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, "kendall_tau_b");
    const std::size_t n = x.size();
    if (n < 2) throw ValidationError("kendall_tau_b: need at least 2 points");
    double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) {
                // Joint ties count in both tie corrections.
                ties_x += 1.0;
                ties_y += 1.0;
            } else if (dx == 0.0) {
                ties_x += 1.0;
            } else if (dy == 0.0) {
                ties_y += 1.0;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                concordant += 1.0;
            } else {
                discordant += 1.0;
            }
        }
    }
    const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double denom = std::sqrt((n0 - ties_x) * (n0 - ties_y));
    if (denom <= 0.0) return std::nullopt;
    return clamp_correlation((concordant - discordant) / denom);
}

std::pair<double, double> mae_rmse(const std::vector<double>& z_pred,
                                   const std::vector<double>& z_gold) {
    check_lengths(z_pred, z_gold, "mae_rmse");
    if (z_pred.empty()) throw ValidationError("mae_rmse: empty input");
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < z_pred.size(); ++i) {
        const double d = z_pred[i] - z_gold[i];
        abs_sum += std::fabs(d);
        sq_sum += d * d;
    }
    const double n = static_cast<double>(z_pred.size());
    return {abs_sum / n, std::sqrt(sq_sum / n)};
}

Stat cohen_kappa(const std::vector<Label>& labels_1, const std::vector<Label>& labels_2) {
    if (labels_1.size() != labels_2.size()) {
        throw ValidationError("cohen_kappa: length mismatch");
    }
    if (labels_1.empty()) throw ValidationError("cohen_kappa: empty input");
    const double n = static_cast<double>(labels_1.size());
    double agree = 0.0;
    double marg_1[kNumLabels] = {0, 0, 0};
    double marg_2[kNumLabels] = {0, 0, 0};
    for (std::size_t i = 0; i < labels_1.size(); ++i) {
        if (labels_1[i] == labels_2[i]) agree += 1.0;
        marg_1[label_index(labels_1[i])] += 1.0;
        marg_2[label_index(labels_2[i])] += 1.0;
    }
    const double p_o = agree / n;
    double p_e = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) p_e += (marg_1[c] / n) * (marg_2[c] / n);
    if (p_e >= 1.0) return std::nullopt;
    return std::clamp((p_o - p_e) / (1.0 - p_e), -1.0, 1.0);
}

double percent_agreement(const std::vector<Label>& labels_1,
                         const std::vector<Label>& labels_2) {
    if (labels_1.size() != labels_2.size()) {
        throw ValidationError("percent_agreement: length mismatch");
    }
    if (labels_1.empty()) throw ValidationError("percent_agreement: empty input");
    double agree = 0.0;
    for (std::size_t i = 0; i < labels_1.size(); ++i) {
        if (labels_1[i] == labels_2[i]) agree += 1.0;
    }
    return 100.0 * agree / static_cast<double>(labels_1.size());
}

Stat krippendorff_alpha_nominal(
    const std::vector<std::vector<std::optional<Label>>>& runs_matrix) {
    // Coincidence matrix: each unit with m >= 2 ratings contributes every
    // ordered pair of its ratings with weight 1/(m - 1).
    double coincidence[kNumLabels][kNumLabels] = {};
    bool any_unit = false;
    for (const auto& unit : runs_matrix) {
        std::vector<Label> present;
        for (const auto& rating : unit) {
            if (rating) present.push_back(*rating);
        }
        const std::size_t m = present.size();
        if (m < 2) continue;
        any_unit = true;
        const double w = 1.0 / static_cast<double>(m - 1);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                coincidence[label_index(present[i])][label_index(present[j])] += w;
            }
        }
    }
    if (!any_unit) return std::nullopt;

    double totals[kNumLabels] = {0, 0, 0};
    double grand_total = 0.0;
    double observed_disagreement = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        for (std::size_t k = 0; k < kNumLabels; ++k) {
            totals[c] += coincidence[c][k];
            if (c != k) observed_disagreement += coincidence[c][k];
        }
        grand_total += totals[c];
    }
    if (observed_disagreement == 0.0) return 1.0;

    double expected_disagreement = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        for (std::size_t k = 0; k < kNumLabels; ++k) {
            if (c != k) expected_disagreement += totals[c] * totals[k];
        }
    }
    expected_disagreement /= (grand_total - 1.0);
    if (expected_disagreement <= 0.0) return std::nullopt;
    return 1.0 - observed_disagreement / expected_disagreement;
}

VariabilityReport variability_classify(const std::vector<std::vector<Label>>& item_runs,
                                       int runs) {
    if (runs < 2) throw ConfigError("variability_classify: runs must be >= 2");
    VariabilityReport report;
    report.n_items = item_runs.size();

    std::vector<std::vector<std::optional<Label>>> matrix;
    matrix.reserve(item_runs.size());
    for (const auto& labels : item_runs) {
        if (labels.size() != static_cast<std::size_t>(runs)) {
            throw ValidationError("variability_classify: item has " +
                                  std::to_string(labels.size()) + " labels, expected " +
                                  std::to_string(runs));
        }
        std::size_t counts[kNumLabels] = {0, 0, 0};
        for (const Label label : labels) counts[label_index(label)] += 1;
        const std::size_t max_count = *std::max_element(counts, counts + kNumLabels);
        if (max_count == labels.size()) {
            report.all_equal += 1;
        } else if (max_count == 1) {
            report.all_unequal += 1;
        } else {
            report.two_equal += 1;
        }
        std::vector<std::optional<Label>> row(labels.begin(), labels.end());
        matrix.push_back(std::move(row));
    }

    if (report.n_items > 0) {
        const double n = static_cast<double>(report.n_items);
        report.pct_all_equal = 100.0 * static_cast<double>(report.all_equal) / n;
        report.pct_two_equal = 100.0 * static_cast<double>(report.two_equal) / n;
        report.pct_all_unequal = 100.0 * static_cast<double>(report.all_unequal) / n;
        report.krippendorff_alpha = krippendorff_alpha_nominal(matrix);
    }
    return report;
}

namespace {

// Pools per-(topic, dimension) standardized scores across topics for one
// dimension. Both sides are standardized over their common argument set so
// the differences stay scale-free.
struct PooledScores {
    std::vector<double> pred;
    std::vector<double> gold;
};

PooledScores pool_dimension_scores(const std::map<bt::TopicDimKey, bt::BTFit>& fits,
                                   const GoldStandard& gold, Dimension::Kind dim) {
    PooledScores pooled;
    for (const auto& [key, fit] : fits) {
        if (key.dimension != dim) continue;
        std::vector<double> theta;
        std::vector<double> gold_scores;
        for (std::size_t i = 0; i < fit.item_ids.size(); ++i) {
            const auto score = gold.arg_score(fit.item_ids[i], dim);
            if (!score) continue;
            theta.push_back(fit.theta[i]);
            gold_scores.push_back(*score);
        }
        if (theta.size() < 2) continue;
        const auto z_pred = bt::standardize(theta);
        const auto z_gold = bt::standardize(gold_scores);
        pooled.pred.insert(pooled.pred.end(), z_pred.begin(), z_pred.end());
        pooled.gold.insert(pooled.gold.end(), z_gold.begin(), z_gold.end());
    }
    return pooled;
}

// Mean and population sd of the defined entries, per metric field.
void fill_averages(MetricReport& report) {
    const auto fields = {
        &DimensionMetrics::pearson,        &DimensionMetrics::spearman,
        &DimensionMetrics::kendall_tau_b,  &DimensionMetrics::mae,
        &DimensionMetrics::rmse,           &DimensionMetrics::cohen_kappa,
        &DimensionMetrics::percent_agreement,
    };
    for (const auto field : fields) {
        std::vector<double> values;
        for (const auto& [kind, dm] : report.per_dimension) {
            if (dm.*field) values.push_back(*(dm.*field));
        }
        if (values.empty()) continue;
        const double n = static_cast<double>(values.size());
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        double var = 0.0;
        for (const double v : values) var += (v - mean) * (v - mean);
        report.averaged_mean.*field = mean;
        report.averaged_sd.*field = std::sqrt(var / n);
    }
}

}  // namespace

MetricReport evaluate(
    const std::map<bt::TopicDimKey, bt::BTFit>& llm_fits,
    const std::map<std::pair<std::string, Dimension::Kind>, Label>& llm_pair_labels,
    const GoldStandard& gold, const Corpus& corpus) {
    (void)corpus;
    MetricReport report;
    bool any_overlap = false;

    for (const Dimension::Kind dim : all_dimensions()) {
        DimensionMetrics dm;

        const PooledScores pooled = pool_dimension_scores(llm_fits, gold, dim);
        if (pooled.pred.size() >= 2) {
            dm.pearson = pearson(pooled.pred, pooled.gold);
            dm.spearman = spearman(pooled.pred, pooled.gold);
            dm.kendall_tau_b = kendall_tau_b(pooled.pred, pooled.gold);
            const auto [mae, rmse] = mae_rmse(pooled.pred, pooled.gold);
            dm.mae = mae;
            dm.rmse = rmse;
            dm.n_args = pooled.pred.size();
            any_overlap = true;
        }

        std::vector<Label> llm_labels;
        std::vector<Label> gold_labels;
        for (const auto& [key, label] : llm_pair_labels) {
            if (key.second != dim) continue;
            const auto gold_label = gold.pair_label(key.first, dim);
            if (!gold_label) continue;
            llm_labels.push_back(label);
            gold_labels.push_back(*gold_label);
        }
        if (!llm_labels.empty()) {
            dm.cohen_kappa = cohen_kappa(llm_labels, gold_labels);
            dm.percent_agreement = percent_agreement(llm_labels, gold_labels);
            dm.n_pairs = llm_labels.size();
            any_overlap = true;
        }

        if (dm.n_args > 0 || dm.n_pairs > 0) {
            report.per_dimension.emplace(dim, dm);
            report.n_pairs_scored += dm.n_pairs;
            report.n_args_scored += dm.n_args;
        }
    }

    if (!any_overlap) {
        throw ValidationError("evaluate: no overlap between LLM outputs and gold standard");
    }
    fill_averages(report);
    return report;
}

}  // namespace argrank::metrics
