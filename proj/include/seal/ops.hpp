#pragma once

#include <vector>

#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

DenseMatrix relu(const DenseMatrix& x);
/// Derivative factors: 1 where x > 0, else 0 (subgradient at 0 is 0).
DenseMatrix relu_mask(const DenseMatrix& post_activation);

DenseMatrix leaky_relu(const DenseMatrix& x, double slope = 0.2);
/// Derivative factors: 1 where x > 0, else slope (subgradient at 0 is slope).
DenseMatrix leaky_relu_mask(const DenseMatrix& post_activation, double slope = 0.2);

/// Row-wise softmax with per-row max subtraction.
DenseMatrix softmax_rows(const DenseMatrix& logits);
/// Per-row log(sum(exp(row))), computed with max subtraction.
std::vector<double> logsumexp_rows(const DenseMatrix& logits);

/// log(1 + e^x) without overflow.
double softplus(double x);
/// 1 / (1 + e^{-x}) without overflow.
double sigmoid(double x);

struct DropoutResult {
    DenseMatrix value;
    DenseMatrix mask;  // entries are 0 or 1/(1-rate); all ones when disabled
};
/// Inverted dropout: survivors scaled by 1/(1-rate) so inference needs no
/// rescaling. Identity (all-ones mask) when disabled.
DropoutResult dropout(const DenseMatrix& x, double rate, RngStream& rng, bool enabled);

struct SparseDropoutResult {
    CsrMatrix value;
    std::vector<double> mask;  // per stored entry
};
SparseDropoutResult dropout_sparse(const CsrMatrix& x, double rate, RngStream& rng, bool enabled);

}  // namespace seal
