#pragma once

#include <span>
#include <vector>

#include "seal/adam.hpp"
#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

/// Three fully connected layers over node representations. The output layer
/// has K logits; the implicit (K+1)-th "unlabeled" logit is fixed to zero,
/// so the probability of a node being labeled is sigmoid(logsumexp(logits)).
struct DiscParams {
    DenseMatrix wa, ba;  // d_in x h1, 1 x h1
    DenseMatrix wb, bb;  // h1 x h2, 1 x h2
    DenseMatrix wc, bc;  // h2 x K, 1 x K
    AdamState adam;
    double dropout_rate = 0.5;
    double leaky_slope = 0.2;

    int input_dim() const { return wa.rows; }
    int num_classes() const { return wc.cols; }

    static DiscParams init(int d_in, int h1, int h2, int num_classes, double learning_rate,
                           double dropout_rate, double leaky_slope, RngStream rng);
};

struct DiscActivations {
    DenseMatrix hidden1;          // post leaky-ReLU
    DenseMatrix hidden1_dropped;
    DenseMatrix drop_mask1;
    DenseMatrix hidden2;          // post leaky-ReLU; the feature-matching tap
    DenseMatrix hidden2_dropped;
    DenseMatrix drop_mask2;
    DenseMatrix logits;           // n x K
    std::vector<double> row_logsumexp;  // logsumexp of each logits row
    std::vector<double> labeled_prob;   // sigmoid(row_logsumexp), strictly in (0,1)
    bool training = false;
};

/// Rows of reps are node representations. Dropout is applied after each
/// hidden activation when training; rng may be null when training is false.
DiscActivations disc_forward(const DenseMatrix& reps, const DiscParams& params, bool training,
                             RngStream* rng);

/// Mean over the given rows of -log softmax(logits)[label]: the K-class
/// supervised loss after the zero-logit recast.
double disc_sup_loss(const DiscActivations& acts, std::span<const int> rows,
                     std::span<const int> row_labels);

/// -( mean over p-labeled rows of log D(x) + mean over p-unlabeled rows of
/// log(1 - D(x)) ), evaluated in log-sum-exp form.
double disc_unsup_loss(const DiscActivations& acts, std::span<const int> p_labeled_rows,
                       std::span<const int> p_unlabeled_rows);

double disc_total_loss(double sup, double unsup, double alpha);

struct ReprGradResult {
    double term = 0.0;
    DenseMatrix rep_grad;  // same shape as the reps that produced it
};

/// Squared distance between the pool means of the second hidden layer,
/// with its gradient w.r.t. the input representations (discriminator frozen,
/// dropout disabled).
ReprGradResult feature_matching_term(const DenseMatrix& reps, const DiscParams& params,
                                     std::span<const int> p_labeled_rows,
                                     std::span<const int> p_unlabeled_rows);

/// -mean over rows of log D(x), with its gradient w.r.t. the input
/// representations (frozen discriminator, no dropout).
ReprGradResult log_likelihood_term(const DenseMatrix& reps, const DiscParams& params,
                                   std::span<const int> rows);

struct DiscGrads {
    DenseMatrix wa, ba, wb, bb, wc, bc;
};

/// Chain an upstream logits gradient back to all parameters, honoring the
/// dropout masks recorded in acts.
DiscGrads disc_backward(const DenseMatrix& reps, const DiscActivations& acts,
                        const DenseMatrix& dlogits, const DiscParams& params);

/// d(sup_weight * J_sup + unsup_weight * J_unsup) / d(logits). Pool rows may
/// be empty only when the corresponding weight is zero.
DenseMatrix disc_loss_dlogits(const DiscActivations& acts, std::span<const int> labeled_rows,
                              std::span<const int> labeled_row_labels,
                              std::span<const int> p_labeled_rows,
                              std::span<const int> p_unlabeled_rows, double sup_weight,
                              double unsup_weight);

struct DTrainResult {
    double j_sup = 0.0;
    double j_unsup = 0.0;
    double j_d = 0.0;
};

/// One epoch: forward over all pool rows with dropout, hand-derived backward
/// of J_D = alpha * J_sup + J_unsup, one Adam step.
DTrainResult train_d_epoch(const DenseMatrix& reps, std::span<const int> labeled_rows,
                           std::span<const int> labeled_row_labels,
                           std::span<const int> p_labeled_rows,
                           std::span<const int> p_unlabeled_rows, double alpha, DiscParams& params,
                           RngStream& dropout_rng);

}  // namespace seal
