#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "seal/error.hpp"
#include "seal/gcn.hpp"
#include "seal/gradcheck.hpp"
#include "seal/graph.hpp"
#include "seal/pools.hpp"

using namespace seal;

namespace {

struct SmallInstance {
    GraphBundle bundle;
    NormalizedAdjacency adj;
    PoolState pools;
    GcnParams params;

    SmallInstance()
        : bundle(generate_synthetic(12, 3, 5, 0.6, 0.2, 0.7, 42)),
          adj(normalize_adjacency(bundle)),
          pools(make_initial_pools(bundle, make_splits(bundle, 7, 8, 9, 0, 0, 2))),
          params(GcnParams::init(5, 16, 3, 0.005, 5e-4, 0.5, RngStream(271828).substream("g"))) {
        // Keep ReLU pre-activations away from the finite-difference step.
        scale_inplace(params.w0, 20.0);
    }
};

}  // namespace

TEST_CASE("zero first-layer weights give zero hidden and uniform predictions") {
    SmallInstance inst;
    scale_inplace(inst.params.w0, 0.0);
    const GcnActivations acts = gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    for (double h : acts.hidden.values) CHECK(h == 0.0);
    for (double p : acts.probs.values) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("evaluation forward is pure and its probability rows sum to one") {
    SmallInstance inst;
    const GcnActivations a = gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    const GcnActivations b = gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    CHECK(a.probs.values == b.probs.values);
    CHECK(a.hidden.values == b.hidden.values);
    for (int i = 0; i < a.probs.rows; ++i) {
        double sum = 0.0;
        for (int j = 0; j < a.probs.cols; ++j) {
            sum += a.probs.at(i, j);
            CHECK(a.hidden.at(i, j >= a.hidden.cols ? 0 : j) >= 0.0);
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("supervised loss: uniform probabilities cost |L| ln K, hand case matches") {
    SmallInstance inst;
    scale_inplace(inst.params.w0, 0.0);  // uniform predictions
    const GcnActivations acts = gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    const double loss = gcn_supervised_loss(acts, inst.pools.labeled, inst.bundle.labels);
    CHECK(loss == doctest::Approx(static_cast<double>(inst.pools.labeled.size()) * std::log(3.0)));

    // Hand-built activations with true-class probabilities 0.5, 0.25, 0.8.
    GcnActivations hand;
    hand.logits = DenseMatrix(3, 2);
    auto set_row = [&](int i, double p_true, int true_class) {
        hand.logits.at(i, true_class) = std::log(p_true);
        hand.logits.at(i, 1 - true_class) = std::log(1.0 - p_true);
    };
    set_row(0, 0.5, 0);
    set_row(1, 0.25, 1);
    set_row(2, 0.8, 0);
    const std::vector<int> ids = {0, 1, 2};
    const std::vector<int> labels = {0, 1, 0};
    CHECK(gcn_supervised_loss(hand, ids, labels) ==
          doctest::Approx(-(std::log(0.5) + std::log(0.25) + std::log(0.8))));

    CHECK_THROWS_AS(gcn_supervised_loss(acts, {}, inst.bundle.labels), Error);
}

TEST_CASE("generator_loss is the plain sum of its terms") {
    CHECK(generator_loss(0.0, 2.3) == 2.3);   // identical pool means
    CHECK(generator_loss(0.7, 2.3) == doctest::Approx(3.0));
    CHECK(generator_loss(0.0, 0.0) == 0.0);
}

TEST_CASE("backward matches finite differences with and without the L2 term") {
    SmallInstance inst;
    // J_GCN + L2 on W0 (the training-step objective without the adversarial term).
    const auto loss = [&] {
        const GcnActivations acts =
            gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
        return gcn_supervised_loss(acts, inst.pools.labeled, inst.bundle.labels) +
               inst.params.l2_lambda * frobenius_sq(inst.params.w0);
    };
    const GcnActivations acts =
        gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    const GcnGrads grads =
        gcn_backward(inst.adj, acts, inst.pools.labeled, inst.bundle.labels, nullptr, inst.params, true);
    DenseMatrix* params[] = {&inst.params.w0, &inst.params.w1};
    const DenseMatrix* analytic[] = {&grads.w0, &grads.w1};
    CHECK(finite_difference_check(loss, params, analytic) < 1e-4);
}

TEST_CASE("with matching labels and no upstream gradient only the L2 term remains") {
    SmallInstance inst;
    GcnActivations acts = gcn_forward(inst.adj, inst.bundle.features, inst.params, false, nullptr);
    // Empty labeled set: the supervised contribution vanishes.
    const GcnGrads grads = gcn_backward(inst.adj, acts, {}, inst.bundle.labels, nullptr, inst.params, true);
    for (size_t i = 0; i < grads.w0.values.size(); ++i)
        CHECK(grads.w0.values[i] ==
              doctest::Approx(2.0 * inst.params.l2_lambda * inst.params.w0.values[i]));
    for (double g : grads.w1.values) CHECK(g == 0.0);
}

TEST_CASE("permuting node ids permutes activations identically") {
    const GraphBundle b = generate_synthetic(10, 2, 6, 0.5, 0.1, 0.6, 13);
    const NormalizedAdjacency adj = normalize_adjacency(b);
    const GcnParams params = GcnParams::init(6, 8, 2, 0.01, 0.0, 0.5, RngStream(55));

    // Reverse permutation.
    std::vector<int> perm(10);
    for (int i = 0; i < 10; ++i) perm[i] = 9 - i;

    GraphBundle pb = b;
    for (auto& [u, v] : pb.edges) {
        u = perm[u];
        v = perm[v];
        if (u > v) std::swap(u, v);
    }
    std::sort(pb.edges.begin(), pb.edges.end());
    std::vector<std::tuple<int, int, double>> feats;
    for (int i = 0; i < 10; ++i)
        for (int p = b.features.row_ptr[i]; p < b.features.row_ptr[i + 1]; ++p)
            feats.emplace_back(perm[i], b.features.col_idx[p], b.features.vals[p]);
    pb.features = CsrMatrix::from_triplets(10, 6, std::move(feats));
    for (int i = 0; i < 10; ++i) pb.labels[perm[i]] = b.labels[i];
    const NormalizedAdjacency padj = normalize_adjacency(pb);

    const GcnActivations orig = gcn_forward(adj, b.features, params, false, nullptr);
    const GcnActivations permuted = gcn_forward(padj, pb.features, params, false, nullptr);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(permuted.probs.at(perm[i], j) == doctest::Approx(orig.probs.at(i, j)).epsilon(1e-12));
}

TEST_CASE("train_g_epoch is deterministic and zero learning rate freezes parameters") {
    SmallInstance inst;
    std::vector<int> pool_nodes(12);
    std::iota(pool_nodes.begin(), pool_nodes.end(), 0);

    auto run = [&](double lr) {
        GcnParams params = GcnParams::init(5, 16, 3, lr, 5e-4, 0.5, RngStream(271828).substream("g"));
        RngStream dropout = RngStream(1).substream("dropout-G");
        for (int i = 0; i < 4; ++i)
            train_g_epoch(inst.adj, inst.bundle.features, inst.pools.labeled, inst.bundle.labels,
                          pool_nodes, {}, {}, params, nullptr, AdvMode::none, dropout);
        return params;
    };
    const GcnParams a = run(0.01);
    const GcnParams b = run(0.01);
    CHECK(a.w0.values == b.w0.values);
    CHECK(a.w1.values == b.w1.values);

    const GcnParams frozen = run(0.0);
    const GcnParams reference =
        GcnParams::init(5, 16, 3, 0.0, 5e-4, 0.5, RngStream(271828).substream("g"));
    CHECK(frozen.w0.values == reference.w0.values);
    CHECK(frozen.w1.values == reference.w1.values);
}

TEST_CASE("supervised pre-training reduces the embedding loss on the block-model bundle") {
    const GraphBundle b = fixtures::bundle400();
    const NormalizedAdjacency adj = normalize_adjacency(b);
    const SplitSpec splits = fixtures::splits400(b);
    const PoolState pools = make_initial_pools(b, splits);

    GcnParams params = GcnParams::init(b.num_features, 16, b.num_classes, 0.005, 5e-4, 0.5,
                                       RngStream(2024).substream("init-g"));
    RngStream dropout = RngStream(2024).substream("dropout-G");
    std::vector<int> pool_nodes;
    std::merge(pools.labeled.begin(), pools.labeled.end(), pools.unlabeled.begin(),
               pools.unlabeled.end(), std::back_inserter(pool_nodes));

    const GcnActivations initial = gcn_forward(adj, b.features, params, false, nullptr);
    const double loss_before = gcn_supervised_loss(initial, pools.labeled, b.labels);
    double loss_after = loss_before;
    for (int epoch = 0; epoch < 300; ++epoch) {
        const GTrainResult r = train_g_epoch(adj, b.features, pools.labeled, b.labels, pool_nodes,
                                             {}, {}, params, nullptr, AdvMode::none, dropout);
        loss_after = r.j_gcn;
    }
    const GcnActivations final_acts = gcn_forward(adj, b.features, params, false, nullptr);
    CHECK(gcn_supervised_loss(final_acts, pools.labeled, b.labels) < loss_before);
    CHECK(loss_after < loss_before);
}
