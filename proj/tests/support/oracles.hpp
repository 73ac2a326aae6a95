#pragma once

// Test-only reference implementations, deliberately independent of the
// library's computation paths: the BT oracle maximizes the likelihood by
// grid seeding + coordinate search instead of MM, and the metric oracles
// use different formulas than src/metrics.cpp.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "argrank/btrank.hpp"
#include "argrank/core.hpp"

namespace argrank::test_oracles {

// Maximizes the same epsilon-smoothed, half-tie BT log-likelihood as
// fit_bt, via a coarse grid over theta followed by cyclic coordinate
// golden-section refinement. Returns strengths normalized to geometric
// mean 1, keyed by item id.
std::map<std::string, double> brute_force_bt(const std::vector<bt::Outcome>& outcomes,
                                             double epsilon);

double ref_pearson(const std::vector<double>& x, const std::vector<double>& y);
double ref_spearman(const std::vector<double>& x, const std::vector<double>& y);
double ref_kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);
double ref_cohen_kappa(const std::vector<Label>& a, const std::vector<Label>& b);
double ref_percent_agreement(const std::vector<Label>& a, const std::vector<Label>& b);
std::pair<double, double> ref_mae_rmse(const std::vector<double>& a,
                                       const std::vector<double>& b);

// Coincidence-matrix alpha built from per-unit label counts rather than
// pair enumeration.
std::optional<double> ref_krippendorff_alpha(
    const std::vector<std::vector<std::optional<Label>>>& units);

}  // namespace argrank::test_oracles
