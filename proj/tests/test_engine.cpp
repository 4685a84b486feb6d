#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "seal/engine.hpp"
#include "seal/error.hpp"

using namespace seal;

namespace {

struct SmallRun {
    GraphBundle bundle = generate_synthetic(120, 3, 18, 0.25, 0.02, 0.4, 31);
    NormalizedAdjacency adj = normalize_adjacency(bundle);
    SplitSpec splits = make_splits(bundle, 3, 4, 5, 30, 20, 3);  // 9 initial labels
};

}  // namespace

TEST_CASE("div_score is one minus the labeled probability") {
    CHECK(div_score(0.75) == doctest::Approx(0.25));
    CHECK(div_score(1.0 - 1e-12) == doctest::Approx(0.0));
    CHECK(div_score(0.5) == doctest::Approx(0.5));
}

TEST_CASE("select_node takes the argmax with ties broken toward the smallest id") {
    const std::vector<int> ids = {2, 5, 9};
    const std::vector<double> scores = {0.9, 0.1, 0.4};
    CHECK(select_node(ids, scores) == 2);

    const std::vector<int> tie_ids = {1, 4};
    const std::vector<double> tie_scores = {0.7, 0.7};
    CHECK(select_node(tie_ids, tie_scores) == 1);

    const std::vector<int> single = {8};
    const std::vector<double> one = {0.3};
    CHECK(select_node(single, one) == 8);

    CHECK_THROWS_AS(select_node({}, {}), PoolExhaustedError);

    // Rescaling all scores by a positive constant never changes the selection.
    std::vector<double> scaled = scores;
    for (double& s : scaled) s *= 13.7;
    CHECK(select_node(ids, scaled) == select_node(ids, scores));
}

TEST_CASE("apply_ablation resolves the config-level ablations") {
    TrainingConfig c;
    c.strategy = Strategy::seal_sal;
    CHECK(apply_ablation(c).alpha == 0.0);
    c.strategy = Strategy::seal_pt;
    CHECK(apply_ablation(c).delta == 1.0);
    c.strategy = Strategy::seal;
    CHECK(apply_ablation(c).alpha == c.alpha);

    CHECK(parse_strategy("seal-fm") == Strategy::seal_fm);
    CHECK_THROWS_AS(parse_strategy("banana"), Error);
}

TEST_CASE("zero budget issues no queries") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 0;
    const RunOutput out = run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(9));
    CHECK(out.log.records.empty());
    CHECK(out.pools.labeled == r.splits.init_labeled_ids);
    CHECK(out.log.snapshots.size() == 1);
}

TEST_CASE("the loop issues exactly the budget and never touches test or validation nodes") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 12;
    const RunOutput out = run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(10));
    CHECK(out.log.records.size() == 12);
    CHECK(out.pools.labeled.size() == r.splits.init_labeled_ids.size() + 12);
    std::vector<int> queried;
    for (const auto& rec : out.log.records) {
        queried.push_back(rec.node);
        CHECK(!std::binary_search(r.splits.test_ids.begin(), r.splits.test_ids.end(), rec.node));
        CHECK(!std::binary_search(r.splits.val_ids.begin(), r.splits.val_ids.end(), rec.node));
    }
    std::sort(queried.begin(), queried.end());
    CHECK(std::adjacent_find(queried.begin(), queried.end()) == queried.end());  // unique
    // Labeled set grew by exactly the queried nodes.
    for (int q : queried)
        CHECK(std::binary_search(out.pools.labeled.begin(), out.pools.labeled.end(), q));
}

TEST_CASE("identical seeds reproduce the query log byte for byte") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 8;
    const RunOutput a = run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(77));
    const RunOutput b = run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(77));
    REQUIRE(a.log.records.size() == b.log.records.size());
    for (size_t i = 0; i < a.log.records.size(); ++i) {
        CHECK(a.log.records[i].node == b.log.records[i].node);
        CHECK(a.log.records[i].score == b.log.records[i].score);
        CHECK(a.log.records[i].iteration == b.log.records[i].iteration);
    }
    CHECK(a.micro_f1 == b.micro_f1);
    CHECK(a.macro_f1 == b.macro_f1);
    CHECK(a.gcn.w0.values == b.gcn.w0.values);
}

TEST_CASE("baseline strategies run the same skeleton with their own scoring") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config(Strategy::random_pick);
    c.budget = 6;
    const RunOutput rnd = run_baseline(r.bundle, r.adj, r.splits, c, -1, RngStream(5));
    CHECK(rnd.log.records.size() == 6);
    const RunOutput rnd2 = run_baseline(r.bundle, r.adj, r.splits, c, -1, RngStream(5));
    for (size_t i = 0; i < 6; ++i) CHECK(rnd.log.records[i].node == rnd2.log.records[i].node);

    c.strategy = Strategy::entropy;
    const RunOutput ent = run_baseline(r.bundle, r.adj, r.splits, c, -1, RngStream(5));
    CHECK(ent.log.records.size() == 6);
    for (const auto& rec : ent.log.records) {
        CHECK(rec.score >= 0.0);
        CHECK(rec.score <= std::log(3.0) + 1e-12);  // entropy of K=3 is at most ln K
    }

    c.strategy = Strategy::seal;
    CHECK_THROWS_AS(run_baseline(r.bundle, r.adj, r.splits, c, -1, RngStream(5)), Error);
}

TEST_CASE("entropy scoring prefers uniform-prediction nodes") {
    // Entropy of a uniform row is ln K (the maximum); of a one-hot row, 0.
    DenseMatrix probs(2, 3);
    probs.at(0, 0) = 1.0 / 3.0;
    probs.at(0, 1) = 1.0 / 3.0;
    probs.at(0, 2) = 1.0 / 3.0;
    probs.at(1, 0) = 1.0;
    double h_uniform = 0.0, h_onehot = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (probs.at(0, j) > 0) h_uniform -= probs.at(0, j) * std::log(probs.at(0, j));
        if (probs.at(1, j) > 0) h_onehot -= probs.at(1, j) * std::log(probs.at(1, j));
    }
    CHECK(h_uniform == doctest::Approx(std::log(3.0)));
    CHECK(h_onehot == 0.0);
}

TEST_CASE("seal-ad leaves the embedder trajectory untouched by the discriminator") {
    SmallRun r;
    TrainingConfig with_d = fixtures::quick_config(Strategy::seal_ad);
    with_d.budget = 0;
    TrainingConfig without_d = fixtures::quick_config(Strategy::random_pick);
    without_d.budget = 0;
    const RunOutput a = run_active_loop(r.bundle, r.adj, r.splits, with_d, -1, RngStream(66));
    const RunOutput b = run_active_loop(r.bundle, r.adj, r.splits, without_d, -1, RngStream(66));
    CHECK(a.gcn.w0.values == b.gcn.w0.values);
    CHECK(a.gcn.w1.values == b.gcn.w1.values);
}

TEST_CASE("a vanishing pool-tuning threshold aborts with the dedicated condition") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 5;
    c.delta = 1e-9;  // everything is promoted, p-unlabeled empties
    CHECK_THROWS_AS(run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(1)),
                    PoolExhaustedError);
}

TEST_CASE("budget larger than the unlabeled pool is rejected up front") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 10000;
    CHECK_THROWS_WITH_AS(run_active_loop(r.bundle, r.adj, r.splits, c, -1, RngStream(1)),
                         doctest::Contains("exceeds"), Error);
}

TEST_CASE("curve snapshots: interval of the budget gives start and end, interval 1 gives B+1") {
    SmallRun r;
    TrainingConfig c = fixtures::quick_config();
    c.budget = 4;
    const RunOutput two = run_active_loop(r.bundle, r.adj, r.splits, c, 4, RngStream(2));
    CHECK(two.log.snapshots.size() == 2);
    CHECK(two.log.snapshots.front().num_labels == 9);
    CHECK(two.log.snapshots.back().num_labels == 13);

    const RunOutput all = run_active_loop(r.bundle, r.adj, r.splits, c, 1, RngStream(2));
    CHECK(all.log.snapshots.size() == 5);
    for (size_t i = 0; i < all.log.snapshots.size(); ++i)
        CHECK(all.log.snapshots[i].num_labels == 9 + static_cast<int>(i));
}

TEST_CASE("final_train_eval reaches ceiling accuracy with every pool node labeled") {
    const GraphBundle b = fixtures::bundle400();
    const NormalizedAdjacency adj = normalize_adjacency(b);
    const SplitSpec splits = fixtures::splits400(b);
    std::vector<int> all_pool;
    std::vector<int> held;
    std::merge(splits.test_ids.begin(), splits.test_ids.end(), splits.val_ids.begin(),
               splits.val_ids.end(), std::back_inserter(held));
    for (int i = 0; i < b.num_nodes; ++i)
        if (!std::binary_search(held.begin(), held.end(), i)) all_pool.push_back(i);

    TrainingConfig c;
    const EvalResult ev = final_train_eval(adj, b, splits, all_pool, c, RngStream(123));
    CHECK(ev.micro_f1 > 0.9);
    CHECK(ev.macro_f1 > 0.9);
    CHECK(ev.micro_f1 <= 1.0);
}

TEST_CASE("a GCN trained on a fifth of the block-model labels classifies it well") {
    const GraphBundle b = fixtures::bundle400();
    const NormalizedAdjacency adj = normalize_adjacency(b);
    const SplitSpec splits = fixtures::splits400(b);
    // 80 labeled nodes = 20% of the graph.
    std::vector<int> labeled;
    std::vector<int> excluded;
    std::merge(splits.test_ids.begin(), splits.test_ids.end(), splits.val_ids.begin(),
               splits.val_ids.end(), std::back_inserter(excluded));
    for (int i = 0; i < b.num_nodes && labeled.size() < 80; ++i)
        if (!std::binary_search(excluded.begin(), excluded.end(), i)) labeled.push_back(i);

    TrainingConfig c;
    const EvalResult ev = final_train_eval(adj, b, splits, labeled, c, RngStream(7));
    CHECK(ev.micro_f1 > 0.9);
}
