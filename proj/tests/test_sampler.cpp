#include <doctest.h>

#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "argrank/errors.hpp"
#include "argrank/rng.hpp"
#include "argrank/sampler.hpp"

using namespace argrank;
using sampling::SamplingPlan;

namespace {

std::vector<Argument> make_items(int n, const std::string& topic = "t1") {
    std::vector<Argument> items;
    for (int i = 0; i < n; ++i) {
        const std::string id = "a" + std::to_string(i);
        items.push_back({id, topic, "Argument " + id, true});
    }
    return items;
}

// Union-find connectivity over the emitted pairs.
bool connected(const std::vector<ComparisonPair>& pairs, const std::vector<Argument>& items) {
    std::map<std::string, std::string> parent;
    for (const auto& item : items) parent[item.id] = item.id;
    std::function<std::string(std::string)> find = [&](std::string x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& pair : pairs) parent[find(pair.arg_a)] = find(pair.arg_b);
    std::set<std::string> roots;
    for (const auto& item : items) roots.insert(find(item.id));
    return roots.size() == 1;
}

}  // namespace

TEST_CASE("ring of five") {
    SamplingPlan plan;
    plan.shuffle = false;
    const auto pairs = sampling::circulant_pairs(make_items(5), plan);
    REQUIRE(pairs.size() == 5);
    CHECK(pairs[0].arg_a == "a0");
    CHECK(pairs[0].arg_b == "a1");
    CHECK(pairs[4].arg_a == "a4");
    CHECK(pairs[4].arg_b == "a0");
}

TEST_CASE("offsets {1,2} on four items saturate K4") {
    SamplingPlan plan;
    plan.offsets = {1, 2};
    plan.shuffle = false;
    const auto pairs = sampling::circulant_pairs(make_items(4), plan);
    CHECK(pairs.size() == 6);
    std::set<std::pair<std::string, std::string>> unordered;
    for (const auto& pair : pairs) {
        unordered.insert(std::minmax(pair.arg_a, pair.arg_b));
    }
    CHECK(unordered.size() == 6);
}

TEST_CASE("two items yield exactly one pair") {
    SamplingPlan plan;
    const auto pairs = sampling::circulant_pairs(make_items(2), plan);
    CHECK(pairs.size() == 1);
}

TEST_CASE("deterministic byte-for-byte given the same plan") {
    SamplingPlan plan;
    plan.seed = 99;
    plan.offsets = {1, 3};
    const auto items = make_items(11);
    const auto first = sampling::circulant_pairs(items, plan);
    const auto second = sampling::circulant_pairs(items, plan);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].pair_id == second[i].pair_id);
        CHECK(first[i].arg_a == second[i].arg_a);
        CHECK(first[i].arg_b == second[i].arg_b);
    }
    SamplingPlan other = plan;
    other.seed = 100;
    const auto different = sampling::circulant_pairs(items, other);
    bool any_differs = false;
    for (std::size_t i = 0; i < first.size(); ++i) {
        any_differs |= first[i].arg_a != different[i].arg_a ||
                       first[i].arg_b != different[i].arg_b;
    }
    CHECK(any_differs);
}

TEST_CASE("plans containing offset 1 stay connected, with no self or duplicate pairs") {
    KeyedRng rng(3, "sampler-prop");
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(30));
        SamplingPlan plan;
        plan.seed = rng.next_u64();
        plan.offsets = {1};
        for (int d = 2; d < n; ++d) {
            if (rng.next_unit() < 0.3) plan.offsets.push_back(d);
        }
        const auto items = make_items(n);
        const auto pairs = sampling::circulant_pairs(items, plan);

        CHECK(connected(pairs, items));
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& pair : pairs) {
            CHECK(pair.arg_a != pair.arg_b);
            CHECK(seen.insert(std::minmax(pair.arg_a, pair.arg_b)).second);
        }
    }
}

TEST_CASE("offset out of range is a configuration error") {
    SamplingPlan plan;
    plan.offsets = {5};
    CHECK_THROWS_AS(sampling::circulant_pairs(make_items(5), plan), ConfigError);
    plan.offsets = {0};
    CHECK_THROWS_AS(sampling::circulant_pairs(make_items(5), plan), ConfigError);
}

TEST_CASE("plan_for_budget") {
    CHECK(sampling::plan_for_budget(10, 30).offsets == std::vector<int>{1, 2, 3});
    CHECK(sampling::plan_for_budget(10, 10).offsets == std::vector<int>{1});
    CHECK(sampling::plan_for_budget(4, 100).offsets == std::vector<int>{1, 2});
    CHECK_THROWS_WITH_AS(sampling::plan_for_budget(10, 9),
                         doctest::Contains("budget below one cycle"), ConfigError);
}
