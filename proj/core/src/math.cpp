#include "svlm/math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svlm/errors.hpp"

namespace svlm {

std::vector<double> softmax_row(std::span<const double> v) {
    if (v.empty()) throw DomainError("softmax_row: empty input");
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError("softmax_row: non-finite input");
    const double m = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) throw DomainError("log_sum_exp: empty input");
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - m);
    return m + std::log(sum);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DimensionError("kl_divergence: length mismatch");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) throw DomainError("kl_divergence: negative entry");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
        throw DomainError("kl_divergence: inputs must sum to 1 within 1e-9");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0)
            throw DomainError("kl_divergence: q is zero where p is positive (index " +
                              std::to_string(i) + ")");
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl < 0.0 ? 0.0 : kl;
}

} // namespace svlm
