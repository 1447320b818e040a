#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svlm {

struct LossBreakdown {
    double task = 0.0;
    double distill = 0.0;
    double total = 0.0;
    double lambda = 0.0;
};

struct LossWithGrad {
    double loss = 0.0;
    std::vector<double> dlogits;
};

// Cross-entropy of softmax(logits) against the label; dlogits = softmax - onehot.
LossWithGrad task_loss(std::span<const double> student_logits, std::size_t label);

// KL(softmax(student) || softmax(teacher)), student distribution first.
// The teacher is a constant; the gradient is with respect to student logits:
//   dlogits[k] = p[k] * (ln(p[k]/q[k]) - kl)
LossWithGrad distill_loss(std::span<const double> student_logits,
                          std::span<const double> teacher_logits);

// lambda * task + (1 - lambda) * distill; lambda must lie in [0, 1].
double combine(double task, double distill, double lambda);

LossBreakdown make_breakdown(double task, double distill, double lambda);

} // namespace svlm
