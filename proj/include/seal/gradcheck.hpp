#pragma once

#include <functional>
#include <span>

#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

/// Central-difference gradient check. Perturbs sampled coordinates of each
/// parameter in place, evaluates loss_fn twice, and compares against the
/// analytic gradient. Returns the max over sampled coordinates of
/// |fd - analytic| / max(1e-8, |fd| + |analytic|).
///
/// loss_fn must be deterministic (run with dropout disabled) and must read
/// the current contents of params on every call.
double finite_difference_check(const std::function<double()>& loss_fn,
                               std::span<DenseMatrix* const> params,
                               std::span<const DenseMatrix* const> analytic_grads,
                               double step = 1e-3, int max_coords_per_param = 200,
                               RngStream rng = RngStream(12345));

}  // namespace seal
