#include "seal/adam.hpp"

#include <cmath>

#include "seal/error.hpp"

namespace seal {

AdamState AdamState::zeros_like(std::span<const DenseMatrix* const> params, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.first_moment.reserve(params.size());
    s.second_moment.reserve(params.size());
    for (const DenseMatrix* p : params) {
        s.first_moment.emplace_back(p->rows, p->cols);
        s.second_moment.emplace_back(p->rows, p->cols);
    }
    return s;
}

void adam_step(std::span<DenseMatrix* const> params, std::span<const DenseMatrix* const> grads,
               AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size())
        throw Error("adam_step: parameter/gradient/state count mismatch");
    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bias1 = 1.0 - std::pow(state.beta1, t);
    const double bias2 = 1.0 - std::pow(state.beta2, t);
    for (size_t k = 0; k < params.size(); ++k) {
        DenseMatrix& p = *params[k];
        const DenseMatrix& g = *grads[k];
        DenseMatrix& m = state.first_moment[k];
        DenseMatrix& v = state.second_moment[k];
        if (!p.same_shape(g) || !p.same_shape(m))
            throw Error("adam_step: shape mismatch at parameter " + std::to_string(k));
        for (size_t i = 0; i < p.values.size(); ++i) {
            m.values[i] = state.beta1 * m.values[i] + (1.0 - state.beta1) * g.values[i];
            v.values[i] = state.beta2 * v.values[i] + (1.0 - state.beta2) * g.values[i] * g.values[i];
            const double m_hat = m.values[i] / bias1;
            const double v_hat = v.values[i] / bias2;
            p.values[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
        check_finite(p, "adam_step");
    }
}

}  // namespace seal
