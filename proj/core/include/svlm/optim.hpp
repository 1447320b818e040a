#pragma once

#include <cstddef>

#include "svlm/matrix.hpp"

namespace svlm {

// First/second moment estimates for one parameter matrix.
struct AdamSlot {
    Matrix m;
    Matrix v;

    explicit AdamSlot(std::size_t rows = 0, std::size_t cols = 0) : m(rows, cols), v(rows, cols) {}
};

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One bias-corrected Adam update; step is the 1-based update count.
void adam_update(Matrix& param, const Matrix& grad, AdamSlot& slot, const AdamParams& hp,
                 double lr, std::size_t step);

void sgd_update(Matrix& param, const Matrix& grad, double lr);

// Linear ramp over the first ceil(warmup_fraction * total_steps) steps, then
// the base rate. total_steps == 0 disables warmup.
double warmup_lr(double base_lr, std::size_t step, std::size_t total_steps, double warmup_fraction);

} // namespace svlm
