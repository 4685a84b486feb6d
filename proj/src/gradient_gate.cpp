#include "seal/gradient_gate.hpp"

#include <chrono>

#include "seal/discriminator.hpp"
#include "seal/gcn.hpp"
#include "seal/gradcheck.hpp"
#include "seal/graph.hpp"
#include "seal/pools.hpp"

namespace seal {

GradientGateReport run_gradient_gate() {
    const auto t0 = std::chrono::steady_clock::now();
    GradientGateReport report;

    const GraphBundle bundle = generate_synthetic(12, 3, 5, 0.6, 0.2, 0.7, 42);
    const NormalizedAdjacency adj = normalize_adjacency(bundle);
    const SplitSpec splits = make_splits(bundle, 7, 8, 9, 0, 0, 2);
    const PoolState pools = make_initial_pools(bundle, splits);

    const RngStream root(271828);
    GcnParams gcn = GcnParams::init(bundle.num_features, 16, bundle.num_classes, 0.005, 5e-4, 0.5,
                                    root.substream("g"));
    DiscParams disc = DiscParams::init(16, 128, 128, bundle.num_classes, 0.01, 0.5, 0.2,
                                       root.substream("d"));
    // Central differences assume local smoothness. Scale the weights and
    // shift the hidden biases so every ReLU / leaky-ReLU pre-activation sits
    // well clear of its kink relative to the 1e-3 step.
    scale_inplace(gcn.w0, 20.0);
    scale_inplace(disc.wb, 0.3);
    for (double& v : disc.ba.values) v += 3.0;
    for (double& v : disc.bb.values) v += 5.0;

    // All nodes are pool nodes here (no test/val split on the check instance).
    std::vector<int> pool_nodes = pools.labeled;
    pool_nodes.insert(pool_nodes.end(), pools.unlabeled.begin(), pools.unlabeled.end());
    std::sort(pool_nodes.begin(), pool_nodes.end());
    std::vector<int> lp_rows, um_rows, l_rows, l_labels;
    for (size_t i = 0; i < pool_nodes.size(); ++i) {
        const int node = pool_nodes[i];
        if (std::binary_search(pools.labeled.begin(), pools.labeled.end(), node)) {
            lp_rows.push_back(static_cast<int>(i));
            l_rows.push_back(static_cast<int>(i));
            l_labels.push_back(bundle.labels[static_cast<size_t>(node)]);
        } else {
            um_rows.push_back(static_cast<int>(i));
        }
    }

    auto scatter_upstream = [&](const DenseMatrix& rep_grad, int rows, int cols) {
        DenseMatrix up(rows, cols);
        for (size_t i = 0; i < pool_nodes.size(); ++i)
            std::copy(rep_grad.row(static_cast<int>(i)), rep_grad.row(static_cast<int>(i)) + cols,
                      up.row(pool_nodes[i]));
        return up;
    };

    {  // J_GCN: cross-entropy over labeled nodes, gradients w.r.t. W0/W1.
        const auto loss = [&] {
            const GcnActivations acts = gcn_forward(adj, bundle.features, gcn, false, nullptr);
            return gcn_supervised_loss(acts, pools.labeled, bundle.labels);
        };
        const GcnActivations acts = gcn_forward(adj, bundle.features, gcn, false, nullptr);
        const GcnGrads grads =
            gcn_backward(adj, acts, pools.labeled, bundle.labels, nullptr, gcn, false);
        DenseMatrix* params[] = {&gcn.w0, &gcn.w1};
        const DenseMatrix* analytic[] = {&grads.w0, &grads.w1};
        report.entries.push_back({"J_GCN", finite_difference_check(loss, params, analytic)});
    }
    {  // Full generator loss: feature matching plus J_GCN, discriminator frozen.
        const auto loss = [&] {
            const GcnActivations acts = gcn_forward(adj, bundle.features, gcn, false, nullptr);
            const DenseMatrix reps = select_rows(acts.hidden, pool_nodes);
            const auto fm = feature_matching_term(reps, disc, lp_rows, um_rows);
            return generator_loss(fm.term, gcn_supervised_loss(acts, pools.labeled, bundle.labels));
        };
        const GcnActivations acts = gcn_forward(adj, bundle.features, gcn, false, nullptr);
        const DenseMatrix reps = select_rows(acts.hidden, pool_nodes);
        const auto fm = feature_matching_term(reps, disc, lp_rows, um_rows);
        const DenseMatrix upstream = scatter_upstream(fm.rep_grad, acts.hidden.rows, acts.hidden.cols);
        const GcnGrads grads =
            gcn_backward(adj, acts, pools.labeled, bundle.labels, &upstream, gcn, false);
        DenseMatrix* params[] = {&gcn.w0, &gcn.w1};
        const DenseMatrix* analytic[] = {&grads.w0, &grads.w1};
        report.entries.push_back({"J_G", finite_difference_check(loss, params, analytic)});
    }

    const GcnActivations g_acts = gcn_forward(adj, bundle.features, gcn, false, nullptr);
    const DenseMatrix reps = select_rows(g_acts.hidden, pool_nodes);
    DenseMatrix* d_params[] = {&disc.wa, &disc.ba, &disc.wb, &disc.bb, &disc.wc, &disc.bc};

    auto disc_entry = [&](const char* name, double sup_weight, double unsup_weight,
                          auto&& loss_value) {
        const auto loss = [&] {
            const DiscActivations acts = disc_forward(reps, disc, false, nullptr);
            return loss_value(acts);
        };
        const DiscActivations acts = disc_forward(reps, disc, false, nullptr);
        const DenseMatrix dlogits =
            disc_loss_dlogits(acts, l_rows, l_labels, lp_rows, um_rows, sup_weight, unsup_weight);
        const DiscGrads grads = disc_backward(reps, acts, dlogits, disc);
        const DenseMatrix* analytic[] = {&grads.wa, &grads.ba, &grads.wb,
                                         &grads.bb, &grads.wc, &grads.bc};
        report.entries.push_back({name, finite_difference_check(loss, d_params, analytic)});
    };
    disc_entry("J_sup", 1.0, 0.0,
               [&](const DiscActivations& a) { return disc_sup_loss(a, l_rows, l_labels); });
    disc_entry("J_unsup", 0.0, 1.0,
               [&](const DiscActivations& a) { return disc_unsup_loss(a, lp_rows, um_rows); });
    const double alpha = 0.6;
    disc_entry("J_D", alpha, 1.0, [&](const DiscActivations& a) {
        return disc_total_loss(disc_sup_loss(a, l_rows, l_labels),
                               disc_unsup_loss(a, lp_rows, um_rows), alpha);
    });

    {  // Feature-matching gradient w.r.t. the input representations.
        DenseMatrix reps_var = reps;
        const auto loss = [&] {
            return feature_matching_term(reps_var, disc, lp_rows, um_rows).term;
        };
        const auto fm = feature_matching_term(reps_var, disc, lp_rows, um_rows);
        DenseMatrix* params[] = {&reps_var};
        const DenseMatrix* analytic[] = {&fm.rep_grad};
        report.entries.push_back(
            {"feature_matching_rep_grad", finite_difference_check(loss, params, analytic)});
    }

    report.pass = true;
    for (const auto& e : report.entries)
        if (!(e.max_rel_error < report.threshold)) report.pass = false;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace seal
