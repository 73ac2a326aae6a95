#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "argrank/core.hpp"

namespace argrank::sampling {

// Circulant comparison design: pair every item with the items at fixed
// ring offsets. Any plan containing offset 1 yields a connected graph.
struct SamplingPlan {
    std::uint64_t seed = 0;
    std::vector<int> offsets = {1};  // distinct, each >= 1 and < item count
    bool shuffle = true;
};

// Emits (i, (i+d) mod n) for every item i and offset d over the
// (optionally seed-shuffled) item order; duplicate unordered pairs are
// dropped. pair_id is "<topic_id>-p<seq>" with a zero-padded sequence so
// lexicographic order equals emission order. Deterministic given
// (items, plan). Throws ConfigError for offsets outside [1, n).
std::vector<ComparisonPair> circulant_pairs(const std::vector<Argument>& items,
                                            const SamplingPlan& plan);

// Offsets {1..D} with D = max(1, budget / n_items), capped at n_items / 2
// so no offset duplicates another's pairs. Throws ConfigError when the
// budget cannot cover one full cycle.
SamplingPlan plan_for_budget(int n_items, int budget);

}  // namespace argrank::sampling
