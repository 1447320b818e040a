#include "svlm/optim.hpp"

#include <algorithm>
#include <cmath>

#include "svlm/errors.hpp"

namespace svlm {

void adam_update(Matrix& param, const Matrix& grad, AdamSlot& slot, const AdamParams& hp,
                 double lr, std::size_t step) {
    if (!param.same_shape(grad) || !param.same_shape(slot.m))
        throw DimensionError("adam_update: shape mismatch");
    const double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(step));
    for (std::size_t k = 0; k < param.size(); ++k) {
        const double g = grad.data()[k];
        double& m = slot.m.data()[k];
        double& v = slot.v.data()[k];
        m = hp.beta1 * m + (1.0 - hp.beta1) * g;
        v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        param.data()[k] -= lr * m_hat / (std::sqrt(v_hat) + hp.eps);
    }
}

void sgd_update(Matrix& param, const Matrix& grad, double lr) {
    if (!param.same_shape(grad)) throw DimensionError("sgd_update: shape mismatch");
    for (std::size_t k = 0; k < param.size(); ++k) param.data()[k] -= lr * grad.data()[k];
}

double warmup_lr(double base_lr, std::size_t step, std::size_t total_steps, double warmup_fraction) {
    if (total_steps == 0 || warmup_fraction <= 0.0) return base_lr;
    const auto warm = static_cast<std::size_t>(
        std::ceil(warmup_fraction * static_cast<double>(total_steps)));
    if (warm == 0 || step >= warm) return base_lr;
    return base_lr * static_cast<double>(step) / static_cast<double>(warm);
}

} // namespace svlm
