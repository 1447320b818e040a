#include "svlm/model.hpp"

#include <algorithm>
#include <cmath>

#include "svlm/errors.hpp"
#include "svlm/rng.hpp"

namespace svlm {

const char* to_string(Modality m) {
    switch (m) {
        case Modality::Vision: return "vision";
        case Modality::Language: return "language";
        case Modality::Interface: return "interface";
    }
    return "?";
}

Modality modality_from_string(const std::string& s) {
    if (s == "vision") return Modality::Vision;
    if (s == "language") return Modality::Language;
    if (s == "interface") return Modality::Interface;
    throw InputError("unknown modality: " + s);
}

Matrix effective_weight(const PrunableLayer& layer) {
    if (!layer.adapter) return hadamard_mask(layer.w0, layer.mask);
    if (layer.adapter->mode == Adapter::Mode::Sparse)
        return hadamard_mask(add(layer.w0, layer.adapter->increment()), layer.mask);
    return add(hadamard_mask(layer.w0, layer.mask), layer.adapter->increment());
}

namespace {

PrunableLayer make_layer(std::string name, Modality modality, std::size_t out, std::size_t in) {
    PrunableLayer layer;
    layer.name = std::move(name);
    layer.modality = modality;
    layer.w0 = Matrix(out, in);
    layer.mask = BitMask::ones(out, in);
    layer.bias.assign(out, 0.0);
    return layer;
}

std::vector<PrunableLayer> architecture(const VlmDims& d) {
    std::vector<PrunableLayer> layers;
    layers.push_back(make_layer("vision1", Modality::Vision, d.h_v, d.d_v));
    layers.push_back(make_layer("vision2", Modality::Vision, d.h_v, d.h_v));
    layers.push_back(make_layer("interface", Modality::Interface, d.d_q, d.h_v));
    layers.push_back(make_layer("lang1", Modality::Language, d.h_l, d.d_q + d.d_t));
    layers.push_back(make_layer("lang2", Modality::Language, d.n_classes, d.h_l));
    return layers;
}

} // namespace

ToyVlm ToyVlm::random(const VlmDims& dims, std::uint64_t seed) {
    ToyVlm model;
    model.dims_ = dims;
    model.init_seed_ = seed;
    model.layers_ = architecture(dims);
    Rng rng = Rng(seed).fork(/*stream_tag=*/1); // weight stream
    for (PrunableLayer& layer : model.layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.w0.cols()));
        layer.w0 = Matrix::random_uniform(layer.w0.rows(), layer.w0.cols(), rng, -bound, bound);
    }
    return model;
}

ToyVlm ToyVlm::zeros(const VlmDims& dims) {
    ToyVlm model;
    model.dims_ = dims;
    model.layers_ = architecture(dims);
    return model;
}

const PrunableLayer& ToyVlm::layer(const std::string& name) const {
    for (const PrunableLayer& l : layers_)
        if (l.name == name) return l;
    throw InputError("unknown layer: " + name);
}

bool ToyVlm::has_layer(const std::string& name) const {
    return std::any_of(layers_.begin(), layers_.end(),
                       [&](const PrunableLayer& l) { return l.name == name; });
}

std::vector<std::string> ToyVlm::layer_names() const {
    std::vector<std::string> names;
    for (const PrunableLayer& l : layers_) names.push_back(l.name);
    return names;
}

std::vector<std::string> ToyVlm::prunable_layer_names() const {
    std::vector<std::string> names;
    for (const PrunableLayer& l : layers_)
        if (l.prunable()) names.push_back(l.name);
    return names;
}

PrunableLayer& ToyVlm::mutable_layer(const std::string& name) {
    ++revision_;
    for (PrunableLayer& l : layers_)
        if (l.name == name) return l;
    throw InputError("unknown layer: " + name);
}

std::vector<PrunableLayer>& ToyVlm::mutable_layers() {
    ++revision_;
    return layers_;
}

namespace {

std::vector<double> tanh_vec(std::vector<double> v) {
    for (double& x : v) x = std::tanh(x);
    return v;
}

std::vector<double> affine(const Matrix& w, std::span<const double> x, std::span<const double> b) {
    std::vector<double> y = matvec(w, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
    return y;
}

} // namespace

ForwardResult forward(const ToyVlm& model, std::span<const double> vision_in,
                      std::span<const double> text_in, WeightMode mode) {
    const VlmDims& d = model.dims();
    if (vision_in.size() != d.d_v || text_in.size() != d.d_t)
        throw DimensionError("forward: input dims do not match model dims");

    BackwardTape tape;
    tape.mode = mode;
    tape.revision = model.revision();
    tape.inputs.resize(ToyVlm::kLayerCount);
    tape.outputs.resize(ToyVlm::kLayerCount);
    tape.weights.resize(ToyVlm::kLayerCount);

    const auto& layers = model.layers();
    auto weight_of = [&](std::size_t idx) {
        return mode == WeightMode::DenseTeacher ? layers[idx].w0 : effective_weight(layers[idx]);
    };

    std::vector<double> x(vision_in.begin(), vision_in.end());
    // vision1, vision2, interface: tanh-activated chain over the vision input.
    for (std::size_t idx = 0; idx < 3; ++idx) {
        tape.weights[idx] = weight_of(idx);
        tape.inputs[idx] = x;
        x = tanh_vec(affine(tape.weights[idx], x, layers[idx].bias));
        tape.outputs[idx] = x;
    }

    // Fuse: z = [q ; text].
    std::vector<double> fused = x;
    fused.insert(fused.end(), text_in.begin(), text_in.end());

    tape.weights[3] = weight_of(3);
    tape.inputs[3] = fused;
    std::vector<double> hidden = tanh_vec(affine(tape.weights[3], fused, layers[3].bias));
    tape.outputs[3] = hidden;

    tape.weights[4] = weight_of(4);
    tape.inputs[4] = hidden;
    std::vector<double> logits = affine(tape.weights[4], hidden, layers[4].bias);
    tape.outputs[4] = logits;

    for (double v : logits)
        if (!std::isfinite(v)) throw DomainError("forward: non-finite logits");

    return {std::move(logits), std::move(tape)};
}

GradientSet backward(const ToyVlm& model, const BackwardTape& tape, std::span<const double> dlogits) {
    if (tape.revision != model.revision())
        throw StateError("backward: tape is stale (model changed since forward)");
    if (tape.inputs.size() != ToyVlm::kLayerCount)
        throw StateError("backward: tape does not carry a full forward pass");
    if (dlogits.size() != model.dims().n_classes)
        throw DimensionError("backward: dlogits length mismatch");

    const auto& layers = model.layers();
    GradientSet grads;

    // Head (linear): dW = dlogits (x) input, upstream = W^T dlogits.
    std::vector<double> delta(dlogits.begin(), dlogits.end());
    grads[layers[4].name] = {outer(delta, tape.inputs[4]), delta};
    std::vector<double> upstream = matvec_transposed(tape.weights[4], delta);

    // lang1 (tanh): d pre = upstream * (1 - out^2).
    {
        const auto& out = tape.outputs[3];
        for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] *= 1.0 - out[i] * out[i];
        grads[layers[3].name] = {outer(upstream, tape.inputs[3]), upstream};
        upstream = matvec_transposed(tape.weights[3], upstream);
    }

    // Only the interface slice of the fused gradient flows back into vision;
    // the text slice ends at the input.
    upstream.resize(model.dims().d_q);

    for (std::size_t idx = 3; idx-- > 0;) {
        const auto& out = tape.outputs[idx];
        for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] *= 1.0 - out[i] * out[i];
        grads[layers[idx].name] = {outer(upstream, tape.inputs[idx]), upstream};
        if (idx > 0) upstream = matvec_transposed(tape.weights[idx], upstream);
    }

    return grads;
}

} // namespace svlm
