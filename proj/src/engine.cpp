#include "seal/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seal/discriminator.hpp"
#include "seal/error.hpp"
#include "seal/metrics.hpp"

namespace seal {

Strategy parse_strategy(std::string_view name) {
    if (name == "seal") return Strategy::seal;
    if (name == "seal-ad") return Strategy::seal_ad;
    if (name == "seal-fm") return Strategy::seal_fm;
    if (name == "seal-sal") return Strategy::seal_sal;
    if (name == "seal-pt") return Strategy::seal_pt;
    if (name == "random") return Strategy::random_pick;
    if (name == "entropy") return Strategy::entropy;
    throw Error("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::seal: return "seal";
        case Strategy::seal_ad: return "seal-ad";
        case Strategy::seal_fm: return "seal-fm";
        case Strategy::seal_sal: return "seal-sal";
        case Strategy::seal_pt: return "seal-pt";
        case Strategy::random_pick: return "random";
        case Strategy::entropy: return "entropy";
    }
    throw Error("unknown strategy id");
}

void TrainingConfig::validate() const {
    if (!(delta > 0.0 && delta <= 1.0)) throw Error("config: delta must be in (0, 1]");
    if (alpha < 0.0) throw Error("config: alpha must be >= 0");
    if (pretrain_epochs < 0 || n_g < 0 || n_d < 0 || final_train_epochs < 0 || patience < 0)
        throw Error("config: counts must be >= 0");
    if (lr_select <= 0.0 || lr_predict <= 0.0 || lr_disc <= 0.0)
        throw Error("config: learning rates must be > 0");
    if (hidden_width <= 0 || disc_hidden1 <= 0 || disc_hidden2 <= 0)
        throw Error("config: layer widths must be > 0");
    if (dropout < 0.0 || dropout >= 1.0) throw Error("config: dropout must be in [0, 1)");
    if (l2_lambda < 0.0) throw Error("config: l2_lambda must be >= 0");
}

TrainingConfig apply_ablation(TrainingConfig config) {
    switch (config.strategy) {
        case Strategy::seal_sal:
            config.alpha = 0.0;
            break;
        case Strategy::seal_pt:
            config.delta = 1.0;
            break;
        default:
            break;
    }
    return config;
}

double div_score(double labeled_prob) { return 1.0 - labeled_prob; }

int select_node(std::span<const int> candidates, std::span<const double> scores) {
    if (candidates.empty()) throw PoolExhaustedError("select_node: no candidates");
    if (candidates.size() != scores.size()) throw Error("select_node: candidates/scores mismatch");
    size_t best = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw Error("select_node: non-finite score");
        if (scores[i] > scores[best]) best = i;
    }
    return candidates[best];
}

namespace {

AdvMode adv_mode_for(Strategy s) {
    switch (s) {
        case Strategy::seal:
        case Strategy::seal_sal:
        case Strategy::seal_pt:
            return AdvMode::feature_matching;
        case Strategy::seal_fm:
            return AdvMode::log_likelihood;
        case Strategy::seal_ad:
        case Strategy::random_pick:
        case Strategy::entropy:
            return AdvMode::none;
    }
    throw Error("unknown strategy id");
}

bool uses_discriminator(Strategy s) {
    return s != Strategy::random_pick && s != Strategy::entropy;
}

/// Indices into pool_nodes of the given sorted node ids.
std::vector<int> rows_of(std::span<const int> pool_nodes, std::span<const int> ids) {
    std::vector<int> rows;
    rows.reserve(ids.size());
    size_t p = 0;
    for (int id : ids) {
        while (p < pool_nodes.size() && pool_nodes[p] < id) ++p;
        if (p == pool_nodes.size() || pool_nodes[p] != id)
            throw Error("internal: node not in pool row set");
        rows.push_back(static_cast<int>(p));
    }
    return rows;
}

int argmax_row(const double* row, int n) {
    int best = 0;
    for (int k = 1; k < n; ++k)
        if (row[k] > row[best]) best = k;
    return best;
}

double mean_cross_entropy(const DenseMatrix& logits, std::span<const int> ids,
                          std::span<const int> labels) {
    const std::vector<double> lse = logsumexp_rows(logits);
    double loss = 0.0;
    for (int node : ids)
        loss += lse[static_cast<size_t>(node)] - logits.at(node, labels[static_cast<size_t>(node)]);
    return loss / static_cast<double>(ids.size());
}

}  // namespace

EvalResult final_train_eval(const NormalizedAdjacency& adj, const GraphBundle& bundle,
                            const SplitSpec& splits, std::span<const int> labeled_ids,
                            const TrainingConfig& config, RngStream rng) {
    if (labeled_ids.empty()) throw Error("final_train_eval: empty labeled set");
    GcnParams params =
        GcnParams::init(bundle.num_features, config.hidden_width, bundle.num_classes,
                        config.lr_predict, config.l2_lambda, config.dropout, rng.substream("init"));
    RngStream dropout_rng = rng.substream("dropout");

    DenseMatrix best_w0 = params.w0;
    DenseMatrix best_w1 = params.w1;
    double best_val = std::numeric_limits<double>::infinity();
    int wait = 0;

    for (int epoch = 0; epoch < config.final_train_epochs; ++epoch) {
        const GcnActivations acts = gcn_forward(adj, bundle.features, params, true, &dropout_rng);
        const GcnGrads grads =
            gcn_backward(adj, acts, labeled_ids, bundle.labels, nullptr, params, true);
        DenseMatrix* ps[] = {&params.w0, &params.w1};
        const DenseMatrix* gs[] = {&grads.w0, &grads.w1};
        adam_step(ps, gs, params.adam);

        if (!splits.val_ids.empty()) {
            const GcnActivations eval_acts = gcn_forward(adj, bundle.features, params, false, nullptr);
            const double val_loss = mean_cross_entropy(eval_acts.logits, splits.val_ids, bundle.labels);
            if (val_loss < best_val) {
                best_val = val_loss;
                best_w0 = params.w0;
                best_w1 = params.w1;
                wait = 0;
            } else if (++wait >= config.patience) {
                break;
            }
        }
    }
    if (!splits.val_ids.empty()) {
        params.w0 = std::move(best_w0);
        params.w1 = std::move(best_w1);
    }

    const GcnActivations acts = gcn_forward(adj, bundle.features, params, false, nullptr);
    ConfusionTable table(bundle.num_classes);
    for (int node : splits.test_ids)
        table.add(bundle.labels[static_cast<size_t>(node)],
                  argmax_row(acts.probs.row(node), acts.probs.cols));
    return {micro_f1(table), macro_f1(table)};
}

RunOutput run_active_loop(const GraphBundle& bundle, const NormalizedAdjacency& adj,
                          const SplitSpec& splits, const TrainingConfig& config_in,
                          int curve_interval, RngStream rng) {
    const TrainingConfig config = apply_ablation(config_in);
    config.validate();

    PoolState pools = make_initial_pools(bundle, splits);
    const std::vector<int> labeled_init = pools.labeled;

    const int budget = config.budget >= 0
                           ? config.budget
                           : 20 * bundle.num_classes - static_cast<int>(labeled_init.size());
    if (budget < 0) throw Error("run: negative labeling budget");
    if (budget > static_cast<int>(pools.unlabeled.size()))
        throw Error("run: budget " + std::to_string(budget) + " exceeds unlabeled pool size " +
                    std::to_string(pools.unlabeled.size()));

    // The node rows handed to the discriminator stay fixed for the whole run.
    std::vector<int> pool_nodes;
    pool_nodes.reserve(pools.labeled.size() + pools.unlabeled.size());
    std::merge(pools.labeled.begin(), pools.labeled.end(), pools.unlabeled.begin(),
               pools.unlabeled.end(), std::back_inserter(pool_nodes));

    std::vector<bool> held_out(static_cast<size_t>(bundle.num_nodes), false);
    for (int id : splits.test_ids) held_out[static_cast<size_t>(id)] = true;
    for (int id : splits.val_ids) held_out[static_cast<size_t>(id)] = true;

    const Strategy strategy = config.strategy;
    const bool with_disc = uses_discriminator(strategy);
    const AdvMode adv_mode = adv_mode_for(strategy);

    GcnParams g_params =
        GcnParams::init(bundle.num_features, config.hidden_width, bundle.num_classes,
                        config.lr_select, config.l2_lambda, config.dropout, rng.substream("init-g"));
    DiscParams d_params;
    if (with_disc)
        d_params = DiscParams::init(config.hidden_width, config.disc_hidden1, config.disc_hidden2,
                                    bundle.num_classes, config.lr_disc, config.dropout,
                                    config.leaky_slope, rng.substream("init-d"));

    RngStream g_dropout = rng.substream("dropout-G");
    RngStream d_dropout = rng.substream("dropout-D");
    RngStream query_rng = rng.substream("random-query");

    int interval = curve_interval > 0 ? curve_interval : std::max(budget, 1);

    RunOutput out;
    out.log.snapshots.clear();
    auto capture_snapshot = [&](int queries_done) {
        const EvalResult ev = final_train_eval(adj, bundle, splits, pools.labeled, config,
                                               rng.substream("curve", static_cast<uint64_t>(queries_done)));
        out.log.snapshots.push_back(
            {static_cast<int>(pools.labeled.size()), ev.micro_f1, ev.macro_f1});
    };

    const int total_iterations = config.pretrain_epochs + budget + config.patience;
    int queries_done = 0;

    for (int t = 1; t <= total_iterations; ++t) {
        const bool adv_active = adv_mode != AdvMode::none && t > config.pretrain_epochs;

        // G epochs use the pools tuned in the previous iteration.
        std::vector<int> lp_rows, um_rows;
        if (with_disc) {
            lp_rows = rows_of(pool_nodes, pools.p_labeled);
            um_rows = rows_of(pool_nodes, pools.p_unlabeled);
        }
        GTrainResult g_result;
        for (int i = 0; i < config.n_g; ++i)
            g_result = train_g_epoch(adj, bundle.features, pools.labeled, bundle.labels, pool_nodes,
                                     lp_rows, um_rows, g_params, with_disc ? &d_params : nullptr,
                                     adv_active ? adv_mode : AdvMode::none, g_dropout);
        const GcnActivations& acts = g_result.post_acts;

        if (with_disc) {
            tune_pools(acts.probs, pools, config.delta);
            if (pools.p_unlabeled.empty())
                throw PoolExhaustedError(
                    "run: p-unlabeled pool emptied at iteration " + std::to_string(t) +
                    " (delta=" + std::to_string(config.delta) + ", queries issued " +
                    std::to_string(queries_done) + "/" + std::to_string(budget) + ")");

            const DenseMatrix reps = select_rows(acts.hidden, pool_nodes);
            const std::vector<int> l_rows = rows_of(pool_nodes, labeled_init);
            std::vector<int> l_labels(l_rows.size());
            for (size_t i = 0; i < labeled_init.size(); ++i)
                l_labels[i] = bundle.labels[static_cast<size_t>(labeled_init[i])];
            lp_rows = rows_of(pool_nodes, pools.p_labeled);
            um_rows = rows_of(pool_nodes, pools.p_unlabeled);
            for (int i = 0; i < config.n_d; ++i)
                train_d_epoch(reps, l_rows, l_labels, lp_rows, um_rows, config.alpha, d_params,
                              d_dropout);
        }

        if (t > config.pretrain_epochs && queries_done < budget) {
            if (queries_done % interval == 0) capture_snapshot(queries_done);

            const std::vector<int>& candidates = pools.p_unlabeled;
            if (candidates.empty())
                throw PoolExhaustedError("run: no selection candidates with budget remaining");

            int chosen;
            double chosen_score;
            if (strategy == Strategy::random_pick) {
                chosen = candidates[query_rng.uniform_index(candidates.size())];
                chosen_score = 0.0;
            } else {
                std::vector<double> scores(candidates.size());
                if (with_disc) {
                    // Fresh no-dropout pass of both networks at selection time.
                    const DenseMatrix cand_reps = select_rows(acts.hidden, candidates);
                    const DiscActivations d_acts = disc_forward(cand_reps, d_params, false, nullptr);
                    for (size_t i = 0; i < candidates.size(); ++i)
                        scores[i] = div_score(d_acts.labeled_prob[i]);
                } else {  // entropy
                    for (size_t i = 0; i < candidates.size(); ++i) {
                        const double* z = acts.probs.row(candidates[i]);
                        double h = 0.0;
                        for (int k = 0; k < acts.probs.cols; ++k)
                            if (z[k] > 0.0) h -= z[k] * std::log(z[k]);
                        scores[i] = h;
                    }
                }
                chosen = select_node(candidates, scores);
                chosen_score = scores[static_cast<size_t>(
                    std::lower_bound(candidates.begin(), candidates.end(), chosen) -
                    candidates.begin())];
            }

            if (held_out[static_cast<size_t>(chosen)])
                throw Error("run: selected a test/validation node " + std::to_string(chosen));
            pools.apply_query(t, chosen, chosen_score);
            ++queries_done;
        }
    }

    if (queries_done != budget)
        throw Error("run: issued " + std::to_string(queries_done) + " queries, budget " +
                    std::to_string(budget));
    if (static_cast<int>(pools.labeled.size()) !=
        static_cast<int>(labeled_init.size()) + budget)
        throw Error("run: labeled set size does not equal initial size plus budget");

    const EvalResult final_eval =
        final_train_eval(adj, bundle, splits, pools.labeled, config, rng.substream("final"));
    out.log.snapshots.push_back(
        {static_cast<int>(pools.labeled.size()), final_eval.micro_f1, final_eval.macro_f1});
    out.micro_f1 = final_eval.micro_f1;
    out.macro_f1 = final_eval.macro_f1;
    out.log.records = pools.query_log;
    out.gcn = std::move(g_params);
    out.pools = std::move(pools);
    return out;
}

RunOutput run_baseline(const GraphBundle& bundle, const NormalizedAdjacency& adj,
                       const SplitSpec& splits, const TrainingConfig& config, int curve_interval,
                       RngStream rng) {
    if (config.strategy != Strategy::random_pick && config.strategy != Strategy::entropy)
        throw Error("run_baseline: strategy must be random or entropy");
    return run_active_loop(bundle, adj, splits, config, curve_interval, rng);
}

}  // namespace seal
