#include "argrank/btrank.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "argrank/errors.hpp"

namespace argrank::bt {

double bt_probability(double gamma_i, double gamma_j) {
    if (!std::isfinite(gamma_i) || !std::isfinite(gamma_j) || gamma_i <= 0.0 ||
        gamma_j <= 0.0) {
        throw ConfigError("bt_probability: strengths must be finite and > 0");
    }
    return gamma_i / (gamma_i + gamma_j);
}

std::vector<double> standardize(const std::vector<double>& values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    var /= n;
    const double sd = std::sqrt(var);
    std::vector<double> out(values.size(), 0.0);
    if (sd <= 0.0) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
    return out;
}

namespace {

struct PairCounts {
    std::size_t a = 0;  // a < b by item index
    std::size_t b = 0;
    double wins_ab = 0.0;  // includes half-ties and epsilon smoothing
    double wins_ba = 0.0;
};

// Union-find over the comparison graph, for the identifiability check.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// Kosaraju strong-connectivity test on the positive-weight win digraph.
// The unsmoothed MLE exists iff this graph is strongly connected.
bool strongly_connected(std::size_t n, const std::vector<PairCounts>& pairs) {
    std::vector<std::vector<std::size_t>> fwd(n), rev(n);
    for (const auto& pc : pairs) {
        if (pc.wins_ab > 0.0) {
            fwd[pc.a].push_back(pc.b);
            rev[pc.b].push_back(pc.a);
        }
        if (pc.wins_ba > 0.0) {
            fwd[pc.b].push_back(pc.a);
            rev[pc.a].push_back(pc.b);
        }
    }
    auto reaches_all = [n](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack = {0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (const std::size_t w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n;
    };
    return reaches_all(fwd) && reaches_all(rev);
}

double log_likelihood(const std::vector<PairCounts>& pairs,
                      const std::vector<double>& gamma) {
    double ll = 0.0;
    for (const auto& pc : pairs) {
        const double denom = std::log(gamma[pc.a] + gamma[pc.b]);
        if (pc.wins_ab > 0.0) ll += pc.wins_ab * (std::log(gamma[pc.a]) - denom);
        if (pc.wins_ba > 0.0) ll += pc.wins_ba * (std::log(gamma[pc.b]) - denom);
    }
    return ll;
}

// Geometric mean of gamma fixed to 1 (mean theta = 0).
void normalize(std::vector<double>& gamma) {
    double log_sum = 0.0;
    for (const double g : gamma) log_sum += std::log(g);
    const double scale = std::exp(-log_sum / static_cast<double>(gamma.size()));
    for (double& g : gamma) g *= scale;
}

}  // namespace

BTFit fit_bt(const std::vector<Outcome>& outcomes, const BTConfig& config) {
    if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon)) {
        throw ConfigError("fit_bt: epsilon must be finite and >= 0");
    }
    if (config.max_iter < 1) throw ConfigError("fit_bt: max_iter must be >= 1");
    if (!(config.tol > 0.0)) throw ConfigError("fit_bt: tol must be > 0");

    // Item order: first appearance in the outcome list.
    std::vector<std::string> item_ids;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](const std::string& id) {
        auto [it, inserted] = index.emplace(id, item_ids.size());
        if (inserted) item_ids.push_back(id);
        return it->second;
    };

    std::map<std::pair<std::size_t, std::size_t>, PairCounts> by_pair;
    double total_comparisons = 0.0;
    for (const auto& o : outcomes) {
        if (o.wins_ij < 0.0 || o.wins_ji < 0.0 || o.ties < 0.0) {
            throw ValidationError("fit_bt: negative count for pair (" + o.item_i +
                                  ", " + o.item_j + ")");
        }
        if (o.item_i == o.item_j) {
            throw ValidationError("fit_bt: self comparison for item '" + o.item_i + "'");
        }
        // A zero-count row observes nothing; it neither smooths nor connects.
        if (o.wins_ij + o.wins_ji + o.ties == 0.0) continue;
        const std::size_t i = intern(o.item_i);
        const std::size_t j = intern(o.item_j);
        const auto key = std::minmax(i, j);
        auto& pc = by_pair[key];
        pc.a = key.first;
        pc.b = key.second;
        const double half_tie = 0.5 * o.ties;
        if (i == key.first) {
            pc.wins_ab += o.wins_ij + half_tie;
            pc.wins_ba += o.wins_ji + half_tie;
        } else {
            pc.wins_ab += o.wins_ji + half_tie;
            pc.wins_ba += o.wins_ij + half_tie;
        }
        total_comparisons += o.wins_ij + o.wins_ji + o.ties;
    }

    const std::size_t n = item_ids.size();
    if (n < 2) throw ValidationError("fit_bt: need at least 2 distinct items");
    if (total_comparisons <= 0.0) {
        throw ValidationError("fit_bt: need at least one comparison");
    }

    // Epsilon smoothing: pseudo-wins in both directions per observed pair.
    std::vector<PairCounts> pairs;
    pairs.reserve(by_pair.size());
    for (auto& [key, pc] : by_pair) {
        pc.wins_ab += config.epsilon;
        pc.wins_ba += config.epsilon;
        pairs.push_back(pc);
    }

    // Identifiability: a disconnected graph with no smoothing cannot pin
    // relative strengths across components.
    DisjointSet dsu(n);
    for (const auto& pc : pairs) dsu.unite(pc.a, pc.b);
    std::map<std::size_t, std::vector<std::string>> components;
    for (std::size_t i = 0; i < n; ++i) components[dsu.find(i)].push_back(item_ids[i]);
    if (components.size() > 1 && config.epsilon == 0.0) {
        std::string msg = "fit_bt: unidentifiable fit, comparison graph has " +
                          std::to_string(components.size()) + " components:";
        for (const auto& [root, members] : components) {
            msg += " {";
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (i) msg += ", ";
                msg += members[i];
            }
            msg += "}";
        }
        throw ValidationError(msg);
    }
    // Without smoothing the MLE exists iff the win digraph is strongly
    // connected (every group of items loses at least once to the rest).
    if (config.epsilon == 0.0 && !strongly_connected(n, pairs)) {
        throw ValidationError(
            "fit_bt: divergent maximum likelihood with epsilon = 0 (win graph "
            "is not strongly connected); use epsilon > 0");
    }

    // Per-item totals for the MM numerator.
    std::vector<double> win_total(n, 0.0);
    for (const auto& pc : pairs) {
        win_total[pc.a] += pc.wins_ab;
        win_total[pc.b] += pc.wins_ba;
    }

    std::vector<double> gamma(n, 1.0);
    std::vector<double> denom(n, 0.0);

    BTFit fit;
    fit.item_ids = item_ids;

    double prev_ll = log_likelihood(pairs, gamma);
    if (config.record_trace) fit.ll_trace.push_back(prev_ll);

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        std::fill(denom.begin(), denom.end(), 0.0);
        for (const auto& pc : pairs) {
            const double inv = (pc.wins_ab + pc.wins_ba) / (gamma[pc.a] + gamma[pc.b]);
            denom[pc.a] += inv;
            denom[pc.b] += inv;
        }
        // Existence checks above guarantee win_total > 0 and denom > 0.
        for (std::size_t i = 0; i < n; ++i) gamma[i] = win_total[i] / denom[i];
        normalize(gamma);

        const double ll = log_likelihood(pairs, gamma);
        assert(ll >= prev_ll - 1e-9 * (1.0 + std::fabs(prev_ll)));
        if (config.record_trace) fit.ll_trace.push_back(ll);
        fit.iterations = iter;

        const double rel_change = std::fabs(ll - prev_ll) / (std::fabs(prev_ll) + 1e-300);
        prev_ll = ll;
        if (rel_change < config.tol) {
            fit.converged = true;
            break;
        }
    }

    fit.gamma = gamma;
    fit.log_likelihood = prev_ll;
    fit.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.theta[i] = std::log(gamma[i]);
    fit.z = standardize(fit.theta);
    return fit;
}

FitAllResult fit_all(
    const std::map<std::pair<std::string, Dimension::Kind>, Label>& labels,
    const Corpus& corpus, const BTConfig& config) {
    // Group outcomes per (topic, dimension), items sorted by argument id for
    // stable downstream serialization.
    std::map<TopicDimKey, std::map<std::pair<std::string, std::string>, Outcome>>
        grouped;
    for (const auto& [key, label] : labels) {
        const auto& [pair_id, dim] = key;
        const ComparisonPair* pair = corpus.find_pair(pair_id);
        if (pair == nullptr) {
            throw ValidationError("fit_all: label references unknown pair '" + pair_id +
                                  "'");
        }
        auto ordered = std::minmax(pair->arg_a, pair->arg_b);
        auto& outcome = grouped[{pair->topic_id, dim}][ordered];
        outcome.item_i = ordered.first;
        outcome.item_j = ordered.second;
        const bool a_is_first = pair->arg_a == ordered.first;
        switch (label) {
            case Label::A:
                (a_is_first ? outcome.wins_ij : outcome.wins_ji) += 1.0;
                break;
            case Label::B:
                (a_is_first ? outcome.wins_ji : outcome.wins_ij) += 1.0;
                break;
            case Label::Tie:
                outcome.ties += 1.0;
                break;
        }
    }

    FitAllResult result;
    for (const auto& [key, outcome_map] : grouped) {
        std::vector<Outcome> outcomes;
        outcomes.reserve(outcome_map.size());
        for (const auto& [ids, outcome] : outcome_map) outcomes.push_back(outcome);

        std::size_t distinct = 0;
        {
            std::unordered_set<std::string> items;
            for (const auto& o : outcomes) {
                items.insert(o.item_i);
                items.insert(o.item_j);
            }
            distinct = items.size();
        }
        if (distinct < 2) {
            result.warnings.push_back("topic '" + key.topic_id + "' dimension '" +
                                      dimension_name(key.dimension) +
                                      "': fewer than 2 compared arguments, skipped");
            continue;
        }
        try {
            result.fits.emplace(key, fit_bt(outcomes, config));
        } catch (const Error& e) {
            throw ValidationError("fit_all: topic '" + key.topic_id + "' dimension '" +
                                  dimension_name(key.dimension) + "': " + e.what());
        }
    }
    return result;
}

}  // namespace argrank::bt
