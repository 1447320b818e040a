#include "svlm/objectives.hpp"

#include <cmath>
#include <string>

#include "svlm/errors.hpp"
#include "svlm/math.hpp"

namespace svlm {

LossWithGrad task_loss(std::span<const double> student_logits, std::size_t label) {
    if (label >= student_logits.size())
        throw InputError("task_loss: label " + std::to_string(label) + " out of range");
    const double lse = log_sum_exp(student_logits);
    LossWithGrad out;
    out.loss = lse - student_logits[label];
    out.dlogits = softmax_row(student_logits);
    out.dlogits[label] -= 1.0;
    return out;
}

LossWithGrad distill_loss(std::span<const double> student_logits,
                          std::span<const double> teacher_logits) {
    if (student_logits.size() != teacher_logits.size())
        throw InputError("distill_loss: logit length mismatch");
    const std::vector<double> p = softmax_row(student_logits);
    const std::vector<double> q = softmax_row(teacher_logits);
    LossWithGrad out;
    out.loss = kl_divergence(p, q);
    out.dlogits.resize(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        out.dlogits[k] = p[k] == 0.0 ? 0.0 : p[k] * (std::log(p[k] / q[k]) - out.loss);
    return out;
}

double combine(double task, double distill, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InputError("combine: lambda must lie in [0, 1]");
    return lambda * task + (1.0 - lambda) * distill;
}

LossBreakdown make_breakdown(double task, double distill, double lambda) {
    return {task, distill, combine(task, distill, lambda), lambda};
}

} // namespace svlm
