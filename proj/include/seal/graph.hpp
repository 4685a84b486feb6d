#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "seal/matrix.hpp"

namespace seal {

/// Immutable attributed graph: undirected edges, sparse non-negative node
/// features, one class label per node.
struct GraphBundle {
    int num_nodes = 0;
    int num_features = 0;
    int num_classes = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, unique, no self-loops
    CsrMatrix features;                      // num_nodes x num_features
    std::vector<int> labels;                 // size num_nodes, values in [0, num_classes)
    std::string name;
};

/// Symmetrically normalized adjacency with self-connections, in CSR layout.
/// Entry (i,j) = 1/sqrt((d_i+1)(d_j+1)) on every edge and diagonal position.
struct NormalizedAdjacency {
    CsrMatrix matrix;
};

struct SplitSpec {
    std::vector<int> test_ids;          // sorted
    std::vector<int> val_ids;           // sorted
    std::vector<int> init_labeled_ids;  // sorted, per_class_init per class
    int64_t seed_val = 0;
    int64_t seed_init = 0;
};

/// Throws seal::Error if any bundle invariant is violated. Appends
/// non-fatal findings (all-zero feature rows) to warnings when given.
void validate_bundle(const GraphBundle& bundle, std::vector<std::string>* warnings = nullptr);

/// Reads meta.json, edges.tsv, features.srm, labels.tsv from dir.
/// Errors carry file name and line number. Directed edge lines (u > v) are
/// symmetrized with a warning; duplicates after symmetrization are an error.
GraphBundle load_bundle(const std::filesystem::path& dir,
                        std::vector<std::string>* warnings = nullptr);

void save_bundle(const GraphBundle& bundle, const std::filesystem::path& dir);

NormalizedAdjacency normalize_adjacency(const GraphBundle& bundle);

/// Stochastic block model with class-correlated sparse features. Classes are
/// balanced within one node; each class owns a disjoint block of feature
/// columns activated with probability feature_signal; every node is
/// guaranteed at least one nonzero feature. Deterministic per seed.
GraphBundle generate_synthetic(int num_nodes, int num_classes, int num_features,
                               double edge_prob_in, double edge_prob_out, double feature_signal,
                               uint64_t seed);

/// Test ids drawn from test_seed (held fixed across validation draws), val
/// ids from the non-test pool using seed_val, initial labels per class from
/// the remainder using seed_init.
SplitSpec make_splits(const GraphBundle& bundle, uint64_t test_seed, int64_t seed_val,
                      int64_t seed_init, int test_size, int val_size, int per_class_init);

}  // namespace seal
