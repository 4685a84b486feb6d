#include "seal/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seal/error.hpp"
#include "seal/ops.hpp"

namespace seal {

namespace {

DenseMatrix glorot(int rows, int cols, RngStream rng) {
    DenseMatrix w(rows, cols);
    const double bound = std::sqrt(6.0 / (rows + cols));
    for (double& v : w.values) v = rng.uniform(-bound, bound);
    return w;
}

}  // namespace

DiscParams DiscParams::init(int d_in, int h1, int h2, int num_classes, double learning_rate,
                            double dropout_rate, double leaky_slope, RngStream rng) {
    DiscParams p;
    p.wa = glorot(d_in, h1, rng.substream("init-wa"));
    p.ba = DenseMatrix(1, h1);
    p.wb = glorot(h1, h2, rng.substream("init-wb"));
    p.bb = DenseMatrix(1, h2);
    p.wc = glorot(h2, num_classes, rng.substream("init-wc"));
    p.bc = DenseMatrix(1, num_classes);
    p.dropout_rate = dropout_rate;
    p.leaky_slope = leaky_slope;
    const DenseMatrix* params[] = {&p.wa, &p.ba, &p.wb, &p.bb, &p.wc, &p.bc};
    p.adam = AdamState::zeros_like(params, learning_rate);
    return p;
}

DiscActivations disc_forward(const DenseMatrix& reps, const DiscParams& params, bool training,
                             RngStream* rng) {
    if (reps.cols != params.input_dim())
        throw Error("disc_forward: representation width " + std::to_string(reps.cols) +
                    " != discriminator input dim " + std::to_string(params.input_dim()));
    if (training && rng == nullptr) throw Error("disc_forward: training requires an rng");

    DiscActivations acts;
    acts.training = training;

    DenseMatrix pre1 = matmul(reps, params.wa);
    add_row_vector_inplace(pre1, params.ba);
    acts.hidden1 = leaky_relu(pre1, params.leaky_slope);
    auto drop1 = training ? dropout(acts.hidden1, params.dropout_rate, *rng, true)
                          : DropoutResult{acts.hidden1, DenseMatrix()};
    acts.hidden1_dropped = std::move(drop1.value);
    acts.drop_mask1 = std::move(drop1.mask);

    DenseMatrix pre2 = matmul(acts.hidden1_dropped, params.wb);
    add_row_vector_inplace(pre2, params.bb);
    acts.hidden2 = leaky_relu(pre2, params.leaky_slope);
    auto drop2 = training ? dropout(acts.hidden2, params.dropout_rate, *rng, true)
                          : DropoutResult{acts.hidden2, DenseMatrix()};
    acts.hidden2_dropped = std::move(drop2.value);
    acts.drop_mask2 = std::move(drop2.mask);

    acts.logits = matmul(acts.hidden2_dropped, params.wc);
    add_row_vector_inplace(acts.logits, params.bc);

    acts.row_logsumexp = logsumexp_rows(acts.logits);
    acts.labeled_prob.resize(acts.row_logsumexp.size());
    // Losses are computed from row_logsumexp in softplus form; the stored
    // probability is clamped to the representable open interval (0, 1).
    const double hi = std::nextafter(1.0, 0.0);
    const double lo = std::numeric_limits<double>::min();
    for (size_t i = 0; i < acts.row_logsumexp.size(); ++i)
        acts.labeled_prob[i] = std::clamp(sigmoid(acts.row_logsumexp[i]), lo, hi);
    return acts;
}

double disc_sup_loss(const DiscActivations& acts, std::span<const int> rows,
                     std::span<const int> row_labels) {
    if (rows.empty()) throw Error("disc_sup_loss: empty labeled set");
    if (rows.size() != row_labels.size()) throw Error("disc_sup_loss: rows/labels size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const int r = rows[i];
        sum += acts.row_logsumexp[static_cast<size_t>(r)] - acts.logits.at(r, row_labels[i]);
    }
    return sum / static_cast<double>(rows.size());
}

double disc_unsup_loss(const DiscActivations& acts, std::span<const int> p_labeled_rows,
                       std::span<const int> p_unlabeled_rows) {
    if (p_labeled_rows.empty() || p_unlabeled_rows.empty())
        throw PoolExhaustedError("disc_unsup_loss: empty pool");
    double lp = 0.0;
    for (int r : p_labeled_rows) lp += softplus(-acts.row_logsumexp[static_cast<size_t>(r)]);
    double um = 0.0;
    for (int r : p_unlabeled_rows) um += softplus(acts.row_logsumexp[static_cast<size_t>(r)]);
    return lp / static_cast<double>(p_labeled_rows.size()) +
           um / static_cast<double>(p_unlabeled_rows.size());
}

double disc_total_loss(double sup, double unsup, double alpha) {
    if (alpha < 0.0) throw Error("disc_total_loss: alpha must be >= 0");
    return alpha * sup + unsup;
}

namespace {

/// Backward through the two hidden layers with dropout disabled,
/// parameters frozen: given d(loss)/d(hidden2 post-activation), produce
/// d(loss)/d(reps).
DenseMatrix chain_dh2_to_reps(const DiscActivations& acts, const DiscParams& params,
                              DenseMatrix dh2) {
    hadamard_inplace(dh2, leaky_relu_mask(acts.hidden2, params.leaky_slope));
    DenseMatrix dh1 = matmul_a_bt(dh2, params.wb);
    hadamard_inplace(dh1, leaky_relu_mask(acts.hidden1, params.leaky_slope));
    return matmul_a_bt(dh1, params.wa);
}

}  // namespace

ReprGradResult feature_matching_term(const DenseMatrix& reps, const DiscParams& params,
                                     std::span<const int> p_labeled_rows,
                                     std::span<const int> p_unlabeled_rows) {
    if (p_labeled_rows.empty() || p_unlabeled_rows.empty())
        throw PoolExhaustedError("feature_matching_term: empty pool");
    const DiscActivations acts = disc_forward(reps, params, false, nullptr);
    const int width = acts.hidden2.cols;

    std::vector<double> mean_diff(static_cast<size_t>(width), 0.0);
    for (int r : p_labeled_rows) {
        const double* row = acts.hidden2.row(r);
        for (int j = 0; j < width; ++j) mean_diff[static_cast<size_t>(j)] += row[j];
    }
    for (double& v : mean_diff) v /= static_cast<double>(p_labeled_rows.size());
    std::vector<double> um_mean(static_cast<size_t>(width), 0.0);
    for (int r : p_unlabeled_rows) {
        const double* row = acts.hidden2.row(r);
        for (int j = 0; j < width; ++j) um_mean[static_cast<size_t>(j)] += row[j];
    }
    for (int j = 0; j < width; ++j)
        mean_diff[static_cast<size_t>(j)] -= um_mean[static_cast<size_t>(j)] /
                                             static_cast<double>(p_unlabeled_rows.size());

    ReprGradResult out;
    for (double v : mean_diff) out.term += v * v;

    DenseMatrix dh2(reps.rows, width);
    const double lp_coeff = 2.0 / static_cast<double>(p_labeled_rows.size());
    for (int r : p_labeled_rows) {
        double* row = dh2.row(r);
        for (int j = 0; j < width; ++j) row[j] += lp_coeff * mean_diff[static_cast<size_t>(j)];
    }
    const double um_coeff = -2.0 / static_cast<double>(p_unlabeled_rows.size());
    for (int r : p_unlabeled_rows) {
        double* row = dh2.row(r);
        for (int j = 0; j < width; ++j) row[j] += um_coeff * mean_diff[static_cast<size_t>(j)];
    }
    out.rep_grad = chain_dh2_to_reps(acts, params, std::move(dh2));
    return out;
}

ReprGradResult log_likelihood_term(const DenseMatrix& reps, const DiscParams& params,
                                   std::span<const int> rows) {
    if (rows.empty()) throw Error("log_likelihood_term: empty row set");
    const DiscActivations acts = disc_forward(reps, params, false, nullptr);
    const DenseMatrix probs = softmax_rows(acts.logits);
    const double inv_n = 1.0 / static_cast<double>(rows.size());

    ReprGradResult out;
    DenseMatrix dlogits(reps.rows, acts.logits.cols);
    for (int r : rows) {
        out.term += softplus(-acts.row_logsumexp[static_cast<size_t>(r)]);
        const double coeff = -inv_n * (1.0 - acts.labeled_prob[static_cast<size_t>(r)]);
        const double* p = probs.row(r);
        double* d = dlogits.row(r);
        for (int k = 0; k < dlogits.cols; ++k) d[k] = coeff * p[k];
    }
    out.term *= inv_n;

    DenseMatrix dh2 = matmul_a_bt(dlogits, params.wc);
    out.rep_grad = chain_dh2_to_reps(acts, params, std::move(dh2));
    return out;
}

DiscGrads disc_backward(const DenseMatrix& reps, const DiscActivations& acts,
                        const DenseMatrix& dlogits, const DiscParams& params) {
    if (!dlogits.same_shape(acts.logits)) throw Error("disc_backward: dlogits shape mismatch");

    DiscGrads g;
    g.wc = matmul_at_b(acts.hidden2_dropped, dlogits);
    g.bc = column_sums(dlogits);

    DenseMatrix dh2 = matmul_a_bt(dlogits, params.wc);
    if (acts.training) hadamard_inplace(dh2, acts.drop_mask2);
    hadamard_inplace(dh2, leaky_relu_mask(acts.hidden2, params.leaky_slope));
    g.wb = matmul_at_b(acts.hidden1_dropped, dh2);
    g.bb = column_sums(dh2);

    DenseMatrix dh1 = matmul_a_bt(dh2, params.wb);
    if (acts.training) hadamard_inplace(dh1, acts.drop_mask1);
    hadamard_inplace(dh1, leaky_relu_mask(acts.hidden1, params.leaky_slope));
    g.wa = matmul_at_b(reps, dh1);
    g.ba = column_sums(dh1);
    return g;
}

DenseMatrix disc_loss_dlogits(const DiscActivations& acts, std::span<const int> labeled_rows,
                              std::span<const int> labeled_row_labels,
                              std::span<const int> p_labeled_rows,
                              std::span<const int> p_unlabeled_rows, double sup_weight,
                              double unsup_weight) {
    const DenseMatrix probs = softmax_rows(acts.logits);
    DenseMatrix dlogits(acts.logits.rows, acts.logits.cols);

    if (sup_weight != 0.0) {
        if (labeled_rows.empty()) throw Error("disc_loss_dlogits: empty labeled set");
        const double sup_coeff = sup_weight / static_cast<double>(labeled_rows.size());
        for (size_t i = 0; i < labeled_rows.size(); ++i) {
            const int r = labeled_rows[i];
            const double* p = probs.row(r);
            double* d = dlogits.row(r);
            for (int k = 0; k < dlogits.cols; ++k) d[k] += sup_coeff * p[k];
            d[labeled_row_labels[i]] -= sup_coeff;
        }
    }
    if (unsup_weight != 0.0) {
        if (p_labeled_rows.empty() || p_unlabeled_rows.empty())
            throw PoolExhaustedError("disc_loss_dlogits: empty pool");
        const double lp_coeff = unsup_weight / static_cast<double>(p_labeled_rows.size());
        for (int r : p_labeled_rows) {
            const double coeff = -lp_coeff * (1.0 - acts.labeled_prob[static_cast<size_t>(r)]);
            const double* p = probs.row(r);
            double* d = dlogits.row(r);
            for (int k = 0; k < dlogits.cols; ++k) d[k] += coeff * p[k];
        }
        const double um_coeff = unsup_weight / static_cast<double>(p_unlabeled_rows.size());
        for (int r : p_unlabeled_rows) {
            const double coeff = um_coeff * acts.labeled_prob[static_cast<size_t>(r)];
            const double* p = probs.row(r);
            double* d = dlogits.row(r);
            for (int k = 0; k < dlogits.cols; ++k) d[k] += coeff * p[k];
        }
    }
    return dlogits;
}

DTrainResult train_d_epoch(const DenseMatrix& reps, std::span<const int> labeled_rows,
                           std::span<const int> labeled_row_labels,
                           std::span<const int> p_labeled_rows,
                           std::span<const int> p_unlabeled_rows, double alpha, DiscParams& params,
                           RngStream& dropout_rng) {
    DiscActivations acts = disc_forward(reps, params, true, &dropout_rng);

    DTrainResult result;
    result.j_sup = disc_sup_loss(acts, labeled_rows, labeled_row_labels);
    result.j_unsup = disc_unsup_loss(acts, p_labeled_rows, p_unlabeled_rows);
    result.j_d = disc_total_loss(result.j_sup, result.j_unsup, alpha);

    const DenseMatrix dlogits = disc_loss_dlogits(acts, labeled_rows, labeled_row_labels,
                                                  p_labeled_rows, p_unlabeled_rows, alpha, 1.0);
    const DiscGrads g = disc_backward(reps, acts, dlogits, params);
    DenseMatrix* ps[] = {&params.wa, &params.ba, &params.wb, &params.bb, &params.wc, &params.bc};
    const DenseMatrix* gs[] = {&g.wa, &g.ba, &g.wb, &g.bb, &g.wc, &g.bc};
    adam_step(ps, gs, params.adam);
    return result;
}

}  // namespace seal
