#include "argrank/sampler.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "argrank/errors.hpp"
#include "argrank/rng.hpp"

namespace argrank::sampling {

std::vector<ComparisonPair> circulant_pairs(const std::vector<Argument>& items,
                                            const SamplingPlan& plan) {
    const std::size_t n = items.size();
    if (n < 2) throw ConfigError("circulant_pairs: need at least 2 items");
    if (plan.offsets.empty()) throw ConfigError("circulant_pairs: offsets must be non-empty");
    std::set<int> offsets;
    for (const int d : plan.offsets) {
        if (d < 1 || static_cast<std::size_t>(d) >= n) {
            throw ConfigError("circulant_pairs: offset " + std::to_string(d) +
                              " out of range for " + std::to_string(n) + " items");
        }
        if (!offsets.insert(d).second) {
            throw ConfigError("circulant_pairs: duplicate offset " + std::to_string(d));
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (plan.shuffle) {
        deterministic_shuffle(order, plan.seed, "circulant_pairs");
    }

    const std::string& topic_id = items.front().topic_id;
    for (const auto& item : items) {
        if (item.topic_id != topic_id) {
            throw ConfigError("circulant_pairs: items span topics '" + topic_id +
                              "' and '" + item.topic_id + "'");
        }
    }
    std::vector<ComparisonPair> pairs;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t seq = 0;
    for (const int d : offsets) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + static_cast<std::size_t>(d)) % n;
            const auto key = std::minmax(order[i], order[j]);
            if (!seen.insert(key).second) continue;
            char seq_buf[16];
            std::snprintf(seq_buf, sizeof(seq_buf), "%05zu", seq++);
            pairs.push_back(ComparisonPair{
                topic_id + "-p" + seq_buf,
                topic_id,
                items[order[i]].id,
                items[order[j]].id,
            });
        }
    }
    return pairs;
}

SamplingPlan plan_for_budget(int n_items, int budget) {
    if (n_items < 2) throw ConfigError("plan_for_budget: need at least 2 items");
    if (budget < n_items) {
        throw ConfigError("plan_for_budget: budget below one cycle (" +
                          std::to_string(budget) + " < " + std::to_string(n_items) + ")");
    }
    int depth = std::max(1, budget / n_items);
    // Offsets beyond n/2 repeat earlier pairs; stopping there caps the plan
    // at the complete graph.
    depth = std::min(depth, n_items / 2);
    depth = std::max(depth, 1);
    SamplingPlan plan;
    plan.offsets.clear();
    for (int d = 1; d <= depth; ++d) plan.offsets.push_back(d);
    return plan;
}

}  // namespace argrank::sampling
