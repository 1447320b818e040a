#include "svlm/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "svlm/errors.hpp"
#include "svlm/objectives.hpp"

namespace svlm {

const char* to_string(ScoringMetric m) {
    switch (m) {
        case ScoringMetric::Magnitude: return "magnitude";
        case ScoringMetric::GradientTimesWeight: return "gradient";
        case ScoringMetric::Wanda: return "wanda";
    }
    return "?";
}

ScoringMetric metric_from_string(const std::string& s) {
    if (s == "magnitude") return ScoringMetric::Magnitude;
    if (s == "gradient") return ScoringMetric::GradientTimesWeight;
    if (s == "wanda") return ScoringMetric::Wanda;
    throw InputError("unknown scoring metric: " + s);
}

const char* to_string(ComparisonGroup g) {
    switch (g) {
        case ComparisonGroup::PerLayer: return "per_layer";
        case ComparisonGroup::PerOutputRow: return "per_row";
        case ComparisonGroup::Global: return "global";
    }
    return "?";
}

ComparisonGroup group_from_string(const std::string& s) {
    if (s == "per_layer") return ComparisonGroup::PerLayer;
    if (s == "per_row") return ComparisonGroup::PerOutputRow;
    if (s == "global") return ComparisonGroup::Global;
    throw InputError("unknown comparison group: " + s);
}

ComparisonGroup default_group(ScoringMetric m) {
    return m == ScoringMetric::Wanda ? ComparisonGroup::PerOutputRow : ComparisonGroup::PerLayer;
}

SparsitySpec SparsitySpec::unstructured(double ratio, ComparisonGroup group) {
    SparsitySpec spec;
    spec.pattern = Pattern::Unstructured;
    spec.ratio = ratio;
    spec.group = group;
    spec.validate();
    return spec;
}

SparsitySpec SparsitySpec::n_of_m(std::size_t n, std::size_t m) {
    SparsitySpec spec;
    spec.pattern = Pattern::NofM;
    spec.n = n;
    spec.m = m;
    spec.validate();
    return spec;
}

void SparsitySpec::validate() const {
    if (pattern == Pattern::Unstructured) {
        if (!(ratio >= 0.0 && ratio <= 1.0))
            throw InputError("SparsitySpec: unstructured ratio must lie in [0, 1]");
    } else {
        if (m == 0 || n >= m) throw InputError("SparsitySpec: NofM requires 0 <= n < m");
    }
}

double SparsitySpec::nominal_sparsity() const {
    return pattern == Pattern::Unstructured
               ? ratio
               : static_cast<double>(n) / static_cast<double>(m);
}

namespace {

Matrix magnitude_scores(const Matrix& w0) {
    Matrix s = w0;
    for (double& v : s.data()) v = std::abs(v);
    return s;
}

// Indices of the layers a tape records, keyed by name, in forward order.
std::map<std::string, std::size_t> layer_tape_index(const ToyVlm& model) {
    std::map<std::string, std::size_t> idx;
    const auto& layers = model.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) idx[layers[i].name] = i;
    return idx;
}

ScoreMap wanda_scores(const ToyVlm& model, const SampleSet& calib) {
    const auto tape_index = layer_tape_index(model);
    // Sum of squared input features per layer, accumulated in sample order.
    std::map<std::string, std::vector<double>> sumsq;
    for (const std::string& name : model.prunable_layer_names())
        sumsq[name].assign(model.layer(name).w0.cols(), 0.0);

    for (const Sample& s : calib) {
        ForwardResult fr = forward(model, s.vision_in, s.text_in, WeightMode::DenseTeacher);
        for (auto& [name, acc] : sumsq) {
            const std::vector<double>& x = fr.tape.inputs[tape_index.at(name)];
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x[j] * x[j];
        }
    }

    ScoreMap scores;
    for (const std::string& name : model.prunable_layer_names()) {
        const Matrix& w0 = model.layer(name).w0;
        Matrix s(w0.rows(), w0.cols());
        const std::vector<double>& acc = sumsq.at(name);
        for (std::size_t i = 0; i < w0.rows(); ++i)
            for (std::size_t j = 0; j < w0.cols(); ++j)
                s(i, j) = std::abs(w0(i, j)) * std::sqrt(acc[j]);
        scores.emplace(name, std::move(s));
    }
    return scores;
}

ScoreMap gradient_scores(const ToyVlm& model, const SampleSet& calib) {
    std::map<std::string, Matrix> grad_sum;
    for (const std::string& name : model.prunable_layer_names()) {
        const Matrix& w0 = model.layer(name).w0;
        grad_sum.emplace(name, Matrix(w0.rows(), w0.cols()));
    }

    for (const Sample& s : calib) {
        ForwardResult fr = forward(model, s.vision_in, s.text_in, WeightMode::DenseTeacher);
        LossWithGrad task = task_loss(fr.logits, s.label);
        GradientSet grads = backward(model, fr.tape, task.dlogits);
        for (auto& [name, acc] : grad_sum) {
            const Matrix& dw = grads.at(name).dw;
            for (std::size_t k = 0; k < acc.size(); ++k) acc.data()[k] += dw.data()[k];
        }
    }

    const double inv_count = 1.0 / static_cast<double>(calib.size());
    ScoreMap scores;
    for (auto& [name, acc] : grad_sum) {
        const Matrix& w0 = model.layer(name).w0;
        Matrix s(w0.rows(), w0.cols());
        for (std::size_t k = 0; k < s.size(); ++k)
            s.data()[k] = std::abs(w0.data()[k] * (acc.data()[k] * inv_count));
        scores.emplace(name, std::move(s));
    }
    return scores;
}

} // namespace

ScoreMap score(const ToyVlm& model, ScoringMetric metric, const SampleSet& calib) {
    if (metric != ScoringMetric::Magnitude && calib.empty())
        throw InputError(std::string("score: metric '") + to_string(metric) +
                         "' requires a nonempty calibration set");
    switch (metric) {
        case ScoringMetric::Magnitude: {
            ScoreMap scores;
            for (const std::string& name : model.prunable_layer_names())
                scores.emplace(name, magnitude_scores(model.layer(name).w0));
            return scores;
        }
        case ScoringMetric::Wanda: return wanda_scores(model, calib);
        case ScoringMetric::GradientTimesWeight: return gradient_scores(model, calib);
    }
    throw InputError("score: unknown metric");
}

namespace {

// Keep count for an unstructured group of `n` entries.
std::size_t keep_count(double ratio, std::size_t n) {
    const double exact = (1.0 - ratio) * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

// Set the mask over `indices` so the `keep` best survive; order is (score
// descending, index ascending), prune from the back.
void keep_top(const Matrix& scores, std::span<const std::size_t> indices, std::size_t keep,
              BitMask& mask) {
    std::vector<std::size_t> order(indices.begin(), indices.end());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = scores.data()[a], sb = scores.data()[b];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    for (std::size_t r = 0; r < order.size(); ++r) mask.set_flat(order[r], r < keep);
}

void check_scores_finite(const Matrix& scores) {
    for (double v : scores.data())
        if (!std::isfinite(v)) throw DomainError("build_mask: scores must be finite");
}

} // namespace

BitMask build_mask(const Matrix& scores, const SparsitySpec& spec) {
    spec.validate();
    check_scores_finite(scores);
    BitMask mask = BitMask::ones(scores.rows(), scores.cols());

    if (spec.pattern == SparsitySpec::Pattern::NofM) {
        if (spec.m == 0 || scores.cols() % spec.m != 0)
            throw DimensionError("build_mask: block size m must divide the input dimension");
        std::vector<std::size_t> block(spec.m);
        for (std::size_t i = 0; i < scores.rows(); ++i) {
            for (std::size_t j0 = 0; j0 < scores.cols(); j0 += spec.m) {
                std::iota(block.begin(), block.end(), i * scores.cols() + j0);
                keep_top(scores, block, spec.m - spec.n, mask);
            }
        }
        return mask;
    }

    switch (spec.group) {
        case ComparisonGroup::PerOutputRow: {
            std::vector<std::size_t> row(scores.cols());
            for (std::size_t i = 0; i < scores.rows(); ++i) {
                std::iota(row.begin(), row.end(), i * scores.cols());
                keep_top(scores, row, keep_count(spec.ratio, row.size()), mask);
            }
            break;
        }
        case ComparisonGroup::PerLayer:
        case ComparisonGroup::Global: {
            std::vector<std::size_t> all(scores.size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            keep_top(scores, all, keep_count(spec.ratio, all.size()), mask);
            break;
        }
    }
    return mask;
}

MaskMap build_masks(const ScoreMap& scores, const SparsitySpec& spec) {
    spec.validate();
    MaskMap masks;
    const bool pooled = spec.pattern == SparsitySpec::Pattern::Unstructured &&
                        spec.group == ComparisonGroup::Global;
    if (!pooled) {
        for (const auto& [name, s] : scores) masks.emplace(name, build_mask(s, spec));
        return masks;
    }

    // Global: rank all layers' scores together, then split the pooled mask.
    std::size_t total = 0;
    for (const auto& [name, s] : scores) {
        check_scores_finite(s);
        total += s.size();
    }
    Matrix pooled_scores(1, total);
    std::size_t offset = 0;
    for (const auto& [name, s] : scores) {
        std::copy(s.data().begin(), s.data().end(), pooled_scores.data().begin() + offset);
        offset += s.size();
    }
    BitMask pooled_mask = build_mask(pooled_scores, SparsitySpec::unstructured(spec.ratio));
    offset = 0;
    for (const auto& [name, s] : scores) {
        BitMask m = BitMask::zeros(s.rows(), s.cols());
        for (std::size_t k = 0; k < s.size(); ++k) m.set_flat(k, pooled_mask.get_flat(offset + k));
        masks.emplace(name, std::move(m));
        offset += s.size();
    }
    return masks;
}

void apply_masks(ToyVlm& model, const MaskMap& masks) {
    for (const auto& [name, mask] : masks) {
        if (!model.has_layer(name)) throw InputError("apply_masks: unknown layer " + name);
        const PrunableLayer& layer = model.layer(name);
        if (!layer.prunable())
            throw InputError("apply_masks: layer " + name + " is never pruned");
        if (mask.rows() != layer.w0.rows() || mask.cols() != layer.w0.cols())
            throw InputError("apply_masks: mask shape mismatch for layer " + name);
    }
    for (const auto& [name, mask] : masks) model.mutable_layer(name).mask = mask;
}

double measured_sparsity(const ToyVlm& model, const std::set<Modality>& scope) {
    if (scope.empty()) throw InputError("measured_sparsity: empty modality scope");
    std::size_t zeros = 0, total = 0;
    for (const PrunableLayer& layer : model.layers()) {
        if (!scope.contains(layer.modality)) continue;
        const Matrix eff = effective_weight(layer);
        for (double v : eff.data()) zeros += v == 0.0 ? 1 : 0;
        total += eff.size();
    }
    if (total == 0) throw InputError("measured_sparsity: scope matches no layers");
    return static_cast<double>(zeros) / static_cast<double>(total);
}

} // namespace svlm
