#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "seal/gcn.hpp"
#include "seal/graph.hpp"
#include "seal/pools.hpp"
#include "seal/rng.hpp"

namespace seal {

enum class Strategy { seal, seal_ad, seal_fm, seal_sal, seal_pt, random_pick, entropy };

Strategy parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);

/// Every hyperparameter of the selection loop and the final prediction phase.
struct TrainingConfig {
    double delta = 0.6;
    double alpha = 0.6;
    int pretrain_epochs = 300;  // n_p
    int n_g = 5;
    int n_d = 5;
    int budget = -1;  // -1: 20 * K - |initial labeled|
    double lr_select = 0.005;
    double lr_predict = 0.01;
    double lr_disc = 0.01;
    int hidden_width = 16;
    int disc_hidden1 = 128;
    int disc_hidden2 = 128;
    double dropout = 0.5;
    double l2_lambda = 5e-4;
    double leaky_slope = 0.2;
    int final_train_epochs = 200;
    int patience = 20;
    Strategy strategy = Strategy::seal;

    void validate() const;
};

/// Resolve an ablation id into its config form: seal-sal sets alpha to 0,
/// seal-pt sets delta to 1. The strategy id is kept for loop dispatch
/// (seal-ad cuts the discriminator gradient; seal-fm swaps the generator's
/// adversarial term).
TrainingConfig apply_ablation(TrainingConfig config);

/// Informativeness of an unlabeled node: 1 - D(x).
double div_score(double labeled_prob);

/// Argmax with ties broken toward the smallest node id. candidates must be
/// sorted ascending and nonempty.
int select_node(std::span<const int> candidates, std::span<const double> scores);

struct SnapshotRow {
    int num_labels = 0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

struct QueryLog {
    std::vector<QueryRecord> records;
    std::vector<SnapshotRow> snapshots;
};

struct EvalResult {
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

struct RunOutput {
    PoolState pools;
    QueryLog log;
    GcnParams gcn;  // selection-phase parameters
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

/// Retrain a fresh GCN on the given labeled set with the prediction-phase
/// learning rate, early-stopping on validation cross-entropy, and evaluate
/// on the test nodes. Runs to the epoch cap when the validation set is empty.
EvalResult final_train_eval(const NormalizedAdjacency& adj, const GraphBundle& bundle,
                            const SplitSpec& splits, std::span<const int> labeled_ids,
                            const TrainingConfig& config, RngStream rng);

/// The full selection loop: alternating G/D training, pool tuning, active
/// scoring and querying against the simulated oracle, then the final
/// retrain-and-evaluate stage. curve_interval of -1 means snapshots only at
/// the start and end of the query phase.
RunOutput run_active_loop(const GraphBundle& bundle, const NormalizedAdjacency& adj,
                          const SplitSpec& splits, const TrainingConfig& config,
                          int curve_interval, RngStream rng);

/// Same loop skeleton restricted to the two non-adversarial strategies.
RunOutput run_baseline(const GraphBundle& bundle, const NormalizedAdjacency& adj,
                       const SplitSpec& splits, const TrainingConfig& config, int curve_interval,
                       RngStream rng);

}  // namespace seal
