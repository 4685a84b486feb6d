#include "seal/gcn.hpp"

#include <cmath>

#include "seal/error.hpp"

namespace seal {

namespace {

DenseMatrix glorot(int rows, int cols, RngStream rng) {
    DenseMatrix w(rows, cols);
    const double bound = std::sqrt(6.0 / (rows + cols));
    for (double& v : w.values) v = rng.uniform(-bound, bound);
    return w;
}

}  // namespace

GcnParams GcnParams::init(int num_features, int hidden, int num_classes, double learning_rate,
                          double l2_lambda, double dropout_rate, RngStream rng) {
    GcnParams p;
    p.w0 = glorot(num_features, hidden, rng.substream("init-w0"));
    p.w1 = glorot(hidden, num_classes, rng.substream("init-w1"));
    p.l2_lambda = l2_lambda;
    p.dropout_rate = dropout_rate;
    const DenseMatrix* params[] = {&p.w0, &p.w1};
    p.adam = AdamState::zeros_like(params, learning_rate);
    return p;
}

GcnActivations gcn_forward(const NormalizedAdjacency& adj, const CsrMatrix& features,
                           const GcnParams& params, bool training, RngStream* rng) {
    if (features.cols != params.w0.rows)
        throw Error("gcn_forward: feature width " + std::to_string(features.cols) +
                    " != W0 rows " + std::to_string(params.w0.rows));
    if (training && rng == nullptr) throw Error("gcn_forward: training requires an rng");

    GcnActivations acts;
    acts.training = training;

    if (training) {
        auto dropped = dropout_sparse(features, params.dropout_rate, *rng, true);
        acts.input_dropped = std::move(dropped.value);
    } else {
        acts.input_dropped = features;
    }

    acts.hidden = relu(spmm(adj.matrix, spmm(acts.input_dropped, params.w0)));

    if (training) {
        auto dropped = dropout(acts.hidden, params.dropout_rate, *rng, true);
        acts.hidden_dropped = std::move(dropped.value);
        acts.hidden_drop_mask = std::move(dropped.mask);
    } else {
        acts.hidden_dropped = acts.hidden;
    }

    acts.logits = spmm(adj.matrix, matmul(acts.hidden_dropped, params.w1));
    acts.probs = softmax_rows(acts.logits);
    return acts;
}

double gcn_supervised_loss(const GcnActivations& acts, std::span<const int> labeled_ids,
                           std::span<const int> labels) {
    if (labeled_ids.empty()) throw Error("gcn_supervised_loss: empty labeled set");
    const std::vector<double> lse = logsumexp_rows(acts.logits);
    double loss = 0.0;
    for (int node : labeled_ids)
        loss += lse[static_cast<size_t>(node)] -
                acts.logits.at(node, labels[static_cast<size_t>(node)]);
    return loss;
}

double generator_loss(double adv_term, double sup_term) { return adv_term + sup_term; }

GcnGrads gcn_backward(const NormalizedAdjacency& adj, const GcnActivations& acts,
                      std::span<const int> labeled_ids, std::span<const int> labels,
                      const DenseMatrix* upstream_hidden_grad, const GcnParams& params,
                      bool include_l2) {
    GcnGrads grads;

    // Softmax + cross-entropy: (Z - Y) on labeled rows, zero elsewhere.
    DenseMatrix dlogits(acts.probs.rows, acts.probs.cols);
    for (int node : labeled_ids) {
        const double* p = acts.probs.row(node);
        double* d = dlogits.row(node);
        for (int k = 0; k < dlogits.cols; ++k) d[k] = p[k];
        d[labels[static_cast<size_t>(node)]] -= 1.0;
    }

    // adj is symmetric, so the transpose in the chain rule is free.
    const DenseMatrix back2 = spmm(adj.matrix, dlogits);
    grads.w1 = matmul_at_b(acts.hidden_dropped, back2);

    DenseMatrix dhidden = matmul_a_bt(back2, params.w1);
    if (acts.training) hadamard_inplace(dhidden, acts.hidden_drop_mask);
    if (upstream_hidden_grad != nullptr) {
        if (!upstream_hidden_grad->same_shape(dhidden))
            throw Error("gcn_backward: upstream hidden gradient shape mismatch");
        add_inplace(dhidden, *upstream_hidden_grad);
    }
    hadamard_inplace(dhidden, relu_mask(acts.hidden));

    const DenseMatrix back1 = spmm(adj.matrix, dhidden);
    grads.w0 = spmm_at_b(acts.input_dropped, back1);

    if (include_l2 && params.l2_lambda != 0.0) axpy_inplace(grads.w0, 2.0 * params.l2_lambda, params.w0);
    return grads;
}

GTrainResult train_g_epoch(const NormalizedAdjacency& adj, const CsrMatrix& features,
                           std::span<const int> labeled_ids, std::span<const int> labels,
                           std::span<const int> pool_nodes, std::span<const int> p_labeled_rows,
                           std::span<const int> p_unlabeled_rows, GcnParams& params,
                           const DiscParams* frozen_disc, AdvMode mode, RngStream& dropout_rng) {
    GTrainResult result;

    const GcnActivations train_acts = gcn_forward(adj, features, params, true, &dropout_rng);
    result.j_gcn = gcn_supervised_loss(train_acts, labeled_ids, labels);
    GcnGrads grads = gcn_backward(adj, train_acts, labeled_ids, labels, nullptr, params, true);

    if (mode != AdvMode::none) {
        if (frozen_disc == nullptr) throw Error("train_g_epoch: adversarial mode needs a discriminator");
        // The representation handed to the discriminator comes from a clean
        // forward pass; its gradient flows back through that same clean graph.
        const GcnActivations clean_acts = gcn_forward(adj, features, params, false, nullptr);
        const DenseMatrix reps = select_rows(clean_acts.hidden, pool_nodes);

        ReprGradResult adv;
        if (mode == AdvMode::feature_matching)
            adv = feature_matching_term(reps, *frozen_disc, p_labeled_rows, p_unlabeled_rows);
        else {
            std::vector<int> all_rows(pool_nodes.size());
            for (size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = static_cast<int>(i);
            adv = log_likelihood_term(reps, *frozen_disc, all_rows);
        }
        result.adv_term = adv.term;

        DenseMatrix upstream(clean_acts.hidden.rows, clean_acts.hidden.cols);
        for (size_t i = 0; i < pool_nodes.size(); ++i) {
            const double* src = adv.rep_grad.row(static_cast<int>(i));
            double* dst = upstream.row(pool_nodes[i]);
            for (int j = 0; j < upstream.cols; ++j) dst[j] = src[j];
        }
        const GcnGrads adv_grads =
            gcn_backward(adj, clean_acts, {}, labels, &upstream, params, false);
        add_inplace(grads.w0, adv_grads.w0);
        add_inplace(grads.w1, adv_grads.w1);
    }

    DenseMatrix* ps[] = {&params.w0, &params.w1};
    const DenseMatrix* gs[] = {&grads.w0, &grads.w1};
    adam_step(ps, gs, params.adam);

    result.post_acts = gcn_forward(adj, features, params, false, nullptr);
    return result;
}

}  // namespace seal
