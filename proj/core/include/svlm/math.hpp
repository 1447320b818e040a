#pragma once

#include <span>
#include <vector>

namespace svlm {

// Max-subtracted softmax; entries sum to 1 within 1e-12 for finite input.
std::vector<double> softmax_row(std::span<const double> v);

// log(sum(exp(v))) with max subtraction.
double log_sum_exp(std::span<const double> v);

// Sum of p[i] * ln(p[i]/q[i]) with the 0*ln(0/q) = 0 convention.
// Inputs must be same-length simplex vectors (sums within 1e-9 of 1);
// q[i] == 0 where p[i] > 0 is a domain error. Rounding for near-identical
// inputs is clamped so the result is never negative.
double kl_divergence(std::span<const double> p, std::span<const double> q);

} // namespace svlm
