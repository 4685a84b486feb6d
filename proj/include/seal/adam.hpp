#pragma once

#include <span>
#include <vector>

#include "seal/matrix.hpp"

namespace seal {

/// Per-parameter Adam moments plus the shared step counter and constants.
struct AdamState {
    std::vector<DenseMatrix> first_moment;
    std::vector<DenseMatrix> second_moment;
    int64_t step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double learning_rate = 0.01;

    static AdamState zeros_like(std::span<const DenseMatrix* const> params, double learning_rate);
};

/// One Adam update with bias correction, applied in place to every parameter.
void adam_step(std::span<DenseMatrix* const> params, std::span<const DenseMatrix* const> grads,
               AdamState& state);

}  // namespace seal
