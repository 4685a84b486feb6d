#include "seal/ops.hpp"

#include <algorithm>
#include <cmath>

#include "seal/error.hpp"

namespace seal {

DenseMatrix relu(const DenseMatrix& x) {
    DenseMatrix y = x;
    for (double& v : y.values) v = std::max(v, 0.0);
    return y;
}

DenseMatrix relu_mask(const DenseMatrix& post) {
    DenseMatrix m(post.rows, post.cols);
    for (size_t i = 0; i < post.values.size(); ++i) m.values[i] = post.values[i] > 0.0 ? 1.0 : 0.0;
    return m;
}

DenseMatrix leaky_relu(const DenseMatrix& x, double slope) {
    DenseMatrix y = x;
    for (double& v : y.values) v = v > 0.0 ? v : slope * v;
    return y;
}

DenseMatrix leaky_relu_mask(const DenseMatrix& post, double slope) {
    DenseMatrix m(post.rows, post.cols);
    for (size_t i = 0; i < post.values.size(); ++i)
        m.values[i] = post.values[i] > 0.0 ? 1.0 : slope;
    return m;
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
    DenseMatrix p(logits.rows, logits.cols);
    for (int i = 0; i < logits.rows; ++i) {
        const double* in = logits.row(i);
        double* out = p.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < logits.cols; ++j) mx = std::max(mx, in[j]);
        double sum = 0.0;
        for (int j = 0; j < logits.cols; ++j) {
            out[j] = std::exp(in[j] - mx);
            sum += out[j];
        }
        for (int j = 0; j < logits.cols; ++j) out[j] /= sum;
    }
    check_finite(p, "softmax_rows");
    return p;
}

std::vector<double> logsumexp_rows(const DenseMatrix& logits) {
    std::vector<double> out(static_cast<size_t>(logits.rows));
    for (int i = 0; i < logits.rows; ++i) {
        const double* in = logits.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < logits.cols; ++j) mx = std::max(mx, in[j]);
        double sum = 0.0;
        for (int j = 0; j < logits.cols; ++j) sum += std::exp(in[j] - mx);
        out[static_cast<size_t>(i)] = mx + std::log(sum);
    }
    return out;
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

DropoutResult dropout(const DenseMatrix& x, double rate, RngStream& rng, bool enabled) {
    if (rate < 0.0 || rate >= 1.0) throw Error("dropout: rate must be in [0, 1)");
    DropoutResult r;
    r.mask = DenseMatrix(x.rows, x.cols);
    if (!enabled || rate == 0.0) {
        r.value = x;
        std::fill(r.mask.values.begin(), r.mask.values.end(), 1.0);
        return r;
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    r.value = DenseMatrix(x.rows, x.cols);
    for (size_t i = 0; i < x.values.size(); ++i) {
        const double m = rng.uniform() < rate ? 0.0 : keep_scale;
        r.mask.values[i] = m;
        r.value.values[i] = m * x.values[i];
    }
    return r;
}

SparseDropoutResult dropout_sparse(const CsrMatrix& x, double rate, RngStream& rng, bool enabled) {
    if (rate < 0.0 || rate >= 1.0) throw Error("dropout_sparse: rate must be in [0, 1)");
    SparseDropoutResult r;
    r.value = x;
    r.mask.assign(x.nnz(), 1.0);
    if (!enabled || rate == 0.0) return r;
    const double keep_scale = 1.0 / (1.0 - rate);
    for (size_t i = 0; i < x.nnz(); ++i) {
        const double m = rng.uniform() < rate ? 0.0 : keep_scale;
        r.mask[i] = m;
        r.value.vals[i] = m * x.vals[i];
    }
    return r;
}

}  // namespace seal
