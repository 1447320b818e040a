#include "svlm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace svlm {

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

namespace {

VerifyCheck check_finite(const ToyVlm& model) {
    for (const PrunableLayer& layer : model.layers()) {
        for (std::size_t k = 0; k < layer.w0.size(); ++k)
            if (!std::isfinite(layer.w0.data()[k]))
                return {"finite", false, layer.name + " weight flat index " + std::to_string(k)};
        for (std::size_t k = 0; k < layer.bias.size(); ++k)
            if (!std::isfinite(layer.bias[k]))
                return {"finite", false, layer.name + " bias index " + std::to_string(k)};
        if (layer.adapter) {
            for (double v : layer.adapter->b_mat.data())
                if (!std::isfinite(v)) return {"finite", false, layer.name + " adapter B"};
            for (double v : layer.adapter->a_mat.data())
                if (!std::isfinite(v)) return {"finite", false, layer.name + " adapter A"};
        }
    }
    return {"finite", true, ""};
}

VerifyCheck check_mask_shape(const ToyVlm& model) {
    for (const PrunableLayer& layer : model.layers()) {
        if (layer.mask.rows() != layer.w0.rows() || layer.mask.cols() != layer.w0.cols())
            return {"mask_shape", false, layer.name};
        if (layer.adapter && (layer.adapter->b_mat.rows() != layer.w0.rows() ||
                              layer.adapter->a_mat.cols() != layer.w0.cols()))
            return {"mask_shape", false, layer.name + " adapter shape"};
    }
    return {"mask_shape", true, ""};
}

VerifyCheck check_mask_nullity(const ToyVlm& model) {
    for (const PrunableLayer& layer : model.layers()) {
        for (std::size_t i = 0; i < layer.w0.rows(); ++i)
            for (std::size_t j = 0; j < layer.w0.cols(); ++j)
                if (!layer.mask.get(i, j) && layer.w0(i, j) != 0.0)
                    return {"mask_nullity", false,
                            layer.name + "[" + std::to_string(i) + "," + std::to_string(j) + "]"};
    }
    return {"mask_nullity", true, ""};
}

VerifyCheck check_nm_blocks(const ToyVlm& model, std::uint32_t n, std::uint32_t m) {
    for (const PrunableLayer& layer : model.layers()) {
        if (!layer.prunable()) continue;
        if (m == 0 || layer.mask.cols() % m != 0)
            return {"nm_blocks", false, layer.name + ": block size does not divide input dim"};
        for (std::size_t i = 0; i < layer.mask.rows(); ++i) {
            for (std::size_t j0 = 0; j0 < layer.mask.cols(); j0 += m) {
                std::size_t kept = 0;
                for (std::size_t j = j0; j < j0 + m; ++j) kept += layer.mask.get(i, j) ? 1 : 0;
                if (kept != m - n)
                    return {"nm_blocks", false,
                            layer.name + " row " + std::to_string(i) + " block " +
                                std::to_string(j0 / m)};
            }
        }
    }
    return {"nm_blocks", true, ""};
}

} // namespace

VerifyReport verify_checkpoint(const LoadedCheckpoint& ckpt) {
    VerifyReport report;
    report.checks.push_back(check_finite(ckpt.model));
    report.checks.push_back(check_mask_shape(ckpt.model));
    if (ckpt.meta.stage == CheckpointStage::Merged)
        report.checks.push_back(check_mask_nullity(ckpt.model));
    if (ckpt.meta.sparsity.pattern == SparsityProvenance::Pattern::NofM)
        report.checks.push_back(check_nm_blocks(ckpt.model, ckpt.meta.sparsity.n,
                                                ckpt.meta.sparsity.m));
    return report;
}

} // namespace svlm
