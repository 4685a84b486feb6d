#include "seal/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seal/error.hpp"

namespace seal {

double finite_difference_check(const std::function<double()>& loss_fn,
                               std::span<DenseMatrix* const> params,
                               std::span<const DenseMatrix* const> analytic_grads,
                               double step, int max_coords_per_param, RngStream rng) {
    if (params.size() != analytic_grads.size())
        throw Error("finite_difference_check: params/grads count mismatch");
    double max_rel = 0.0;
    for (size_t k = 0; k < params.size(); ++k) {
        DenseMatrix& p = *params[k];
        const DenseMatrix& g = *analytic_grads[k];
        if (!p.same_shape(g)) throw Error("finite_difference_check: shape mismatch");
        const size_t n = p.values.size();
        std::vector<size_t> coords(n);
        std::iota(coords.begin(), coords.end(), 0);
        if (static_cast<int>(n) > max_coords_per_param) {
            // Deterministic subsample without replacement.
            for (size_t i = 0; i < static_cast<size_t>(max_coords_per_param); ++i) {
                const size_t j = i + rng.uniform_index(n - i);
                std::swap(coords[i], coords[j]);
            }
            coords.resize(static_cast<size_t>(max_coords_per_param));
        }
        for (size_t c : coords) {
            const double saved = p.values[c];
            p.values[c] = saved + step;
            const double up = loss_fn();
            p.values[c] = saved - step;
            const double down = loss_fn();
            p.values[c] = saved;
            const double fd = (up - down) / (2.0 * step);
            const double an = g.values[c];
            const double rel = std::abs(fd - an) / std::max(1e-8, std::abs(fd) + std::abs(an));
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace seal
