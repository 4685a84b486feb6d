#pragma once

#include <span>
#include <vector>

#include "seal/graph.hpp"
#include "seal/matrix.hpp"

namespace seal {

struct QueryRecord {
    int iteration = 0;
    int node = -1;
    double score = 0.0;
    int labeled_after = 0;
};

/// The four node sets of the selection loop plus the query log. All id
/// vectors are kept sorted ascending. labeled/unlabeled partition the
/// non-test, non-validation nodes; p_labeled/p_unlabeled re-partition the
/// same universe after pool tuning.
struct PoolState {
    std::vector<int> labeled;
    std::vector<int> unlabeled;
    std::vector<int> p_labeled;
    std::vector<int> p_unlabeled;
    std::vector<QueryRecord> query_log;

    /// Throws seal::Error if the set algebra is broken.
    void check_invariants() const;

    /// Move a queried node from unlabeled to labeled and log it.
    void apply_query(int iteration, int node, double score);
};

PoolState make_initial_pools(const GraphBundle& bundle, const SplitSpec& splits);

/// Nodes of `unlabeled` whose max class probability strictly exceeds delta,
/// sorted ascending. Pure function of (probs, unlabeled, delta).
std::vector<int> confident_nodes(const DenseMatrix& probs, std::span<const int> unlabeled,
                                 double delta);

/// Recomputes p_labeled / p_unlabeled from the current prediction
/// probabilities: p_labeled = labeled plus the confident unlabeled nodes,
/// p_unlabeled = the rest of unlabeled. Requires 0 < delta <= 1.
void tune_pools(const DenseMatrix& probs, PoolState& pools, double delta);

}  // namespace seal
