#pragma once

#include <span>

#include "seal/adam.hpp"
#include "seal/discriminator.hpp"
#include "seal/graph.hpp"
#include "seal/matrix.hpp"
#include "seal/ops.hpp"
#include "seal/rng.hpp"

namespace seal {

/// Two-layer GCN weights. L2 regularization applies to the first layer only.
struct GcnParams {
    DenseMatrix w0;  // num_features x hidden
    DenseMatrix w1;  // hidden x num_classes
    AdamState adam;
    double l2_lambda = 5e-4;
    double dropout_rate = 0.5;

    int hidden_width() const { return w0.cols; }

    static GcnParams init(int num_features, int hidden, int num_classes, double learning_rate,
                          double l2_lambda, double dropout_rate, RngStream rng);
};

struct GcnActivations {
    CsrMatrix input_dropped;       // features after input dropout (== features when not training)
    DenseMatrix hidden;            // post-ReLU, the representation handed downstream
    DenseMatrix hidden_dropped;
    DenseMatrix hidden_drop_mask;  // empty when not training
    DenseMatrix logits;            // num_nodes x K
    DenseMatrix probs;             // row-stochastic
    bool training = false;
};

/// hidden = ReLU(A * dropout(X) * W0); probs = softmax(A * dropout(hidden) * W1).
/// Dropout is active only when training; rng may be null otherwise.
GcnActivations gcn_forward(const NormalizedAdjacency& adj, const CsrMatrix& features,
                           const GcnParams& params, bool training, RngStream* rng);

/// Cross-entropy summed over the labeled nodes (labels indexed by node id).
/// The L2 term is added by the training step, not here.
double gcn_supervised_loss(const GcnActivations& acts, std::span<const int> labeled_ids,
                           std::span<const int> labels);

/// Generator objective: adversarial term plus the supervised GCN loss.
double generator_loss(double adv_term, double sup_term);

struct GcnGrads {
    DenseMatrix w0, w1;
};

/// Exact gradients of the supervised loss (plus optional L2 on W0) with an
/// optional upstream gradient injected at the post-ReLU hidden layer.
/// labeled_ids may be empty when only the upstream path is wanted.
GcnGrads gcn_backward(const NormalizedAdjacency& adj, const GcnActivations& acts,
                      std::span<const int> labeled_ids, std::span<const int> labels,
                      const DenseMatrix* upstream_hidden_grad, const GcnParams& params,
                      bool include_l2 = true);

/// How the discriminator feeds back into the generator loss.
enum class AdvMode { none, feature_matching, log_likelihood };

struct GTrainResult {
    double j_gcn = 0.0;
    double adv_term = 0.0;
    GcnActivations post_acts;  // fresh no-dropout activations after the update
};

/// One training epoch of the embedder: dropout forward for the supervised
/// path, a clean forward for the adversarial term (discriminator frozen),
/// one Adam step. pool_nodes lists the node ids handed to the discriminator;
/// p_labeled_rows / p_unlabeled_rows index into that list.
GTrainResult train_g_epoch(const NormalizedAdjacency& adj, const CsrMatrix& features,
                           std::span<const int> labeled_ids, std::span<const int> labels,
                           std::span<const int> pool_nodes, std::span<const int> p_labeled_rows,
                           std::span<const int> p_unlabeled_rows, GcnParams& params,
                           const DiscParams* frozen_disc, AdvMode mode, RngStream& dropout_rng);

}  // namespace seal
