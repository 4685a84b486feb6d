#include "seal/pools.hpp"

#include <algorithm>
#include <set>

#include "seal/error.hpp"

namespace seal {

namespace {
bool is_sorted_unique(const std::vector<int>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

std::vector<int> set_union_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
}  // namespace

void PoolState::check_invariants() const {
    if (!is_sorted_unique(labeled) || !is_sorted_unique(unlabeled) ||
        !is_sorted_unique(p_labeled) || !is_sorted_unique(p_unlabeled))
        throw Error("pools: id vectors must be sorted and unique");

    std::vector<int> inter;
    std::set_intersection(labeled.begin(), labeled.end(), unlabeled.begin(), unlabeled.end(),
                          std::back_inserter(inter));
    if (!inter.empty()) throw Error("pools: labeled and unlabeled overlap");

    if (!std::includes(p_labeled.begin(), p_labeled.end(), labeled.begin(), labeled.end()))
        throw Error("pools: labeled not a subset of p_labeled");

    inter.clear();
    std::set_intersection(p_labeled.begin(), p_labeled.end(), p_unlabeled.begin(),
                          p_unlabeled.end(), std::back_inserter(inter));
    if (!inter.empty()) throw Error("pools: p_labeled and p_unlabeled overlap");

    if (set_union_sorted(p_labeled, p_unlabeled) != set_union_sorted(labeled, unlabeled))
        throw Error("pools: p_labeled + p_unlabeled must cover labeled + unlabeled exactly");

    std::set<int> queried;
    for (const auto& rec : query_log)
        if (!queried.insert(rec.node).second)
            throw Error("pools: node " + std::to_string(rec.node) + " queried twice");
}

void PoolState::apply_query(int iteration, int node, double score) {
    const auto it = std::lower_bound(unlabeled.begin(), unlabeled.end(), node);
    if (it == unlabeled.end() || *it != node)
        throw Error("pools: queried node " + std::to_string(node) + " not in unlabeled pool");
    const auto pit = std::lower_bound(p_unlabeled.begin(), p_unlabeled.end(), node);
    if (pit == p_unlabeled.end() || *pit != node)
        throw Error("pools: queried node " + std::to_string(node) + " not in p_unlabeled pool");
    unlabeled.erase(it);
    labeled.insert(std::lower_bound(labeled.begin(), labeled.end(), node), node);
    // Keep the pseudo pools partitioned: the node is labeled now.
    p_unlabeled.erase(pit);
    p_labeled.insert(std::lower_bound(p_labeled.begin(), p_labeled.end(), node), node);
    query_log.push_back({iteration, node, score, static_cast<int>(labeled.size())});
    check_invariants();
}

PoolState make_initial_pools(const GraphBundle& bundle, const SplitSpec& splits) {
    std::vector<int> excluded = set_union_sorted(splits.test_ids, splits.val_ids);
    PoolState pools;
    pools.labeled = splits.init_labeled_ids;
    for (int i = 0; i < bundle.num_nodes; ++i) {
        if (std::binary_search(excluded.begin(), excluded.end(), i)) continue;
        if (std::binary_search(pools.labeled.begin(), pools.labeled.end(), i)) continue;
        pools.unlabeled.push_back(i);
    }
    // Before the first tuning pass the pseudo pools coincide with the
    // originals.
    pools.p_labeled = pools.labeled;
    pools.p_unlabeled = pools.unlabeled;
    pools.check_invariants();
    return pools;
}

std::vector<int> confident_nodes(const DenseMatrix& probs, std::span<const int> unlabeled,
                                 double delta) {
    std::vector<int> out;
    for (int node : unlabeled) {
        const double* row = probs.row(node);
        double mx = 0.0;
        for (int k = 0; k < probs.cols; ++k) mx = std::max(mx, row[k]);
        if (mx > delta) out.push_back(node);
    }
    return out;
}

void tune_pools(const DenseMatrix& probs, PoolState& pools, double delta) {
    if (delta <= 0.0 || delta > 1.0) throw Error("tune_pools: delta must be in (0, 1]");
    const std::vector<int> promoted = confident_nodes(probs, pools.unlabeled, delta);
    pools.p_labeled = set_union_sorted(pools.labeled, promoted);
    pools.p_unlabeled.clear();
    std::set_difference(pools.unlabeled.begin(), pools.unlabeled.end(), promoted.begin(),
                        promoted.end(), std::back_inserter(pools.p_unlabeled));
    pools.check_invariants();
}

}  // namespace seal
