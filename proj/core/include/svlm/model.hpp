#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "svlm/adapter.hpp"
#include "svlm/bitmask.hpp"
#include "svlm/matrix.hpp"

namespace svlm {

enum class Modality { Vision, Language, Interface };

const char* to_string(Modality m);
Modality modality_from_string(const std::string& s);

// One weight matrix with its pruning state. w0 is the original dense store
// (the distillation teacher reads it directly and it never changes after
// pretraining); mask and adapter define the student view. Biases are never
// pruned and carry no mask.
struct PrunableLayer {
    std::string name;
    Modality modality = Modality::Vision;
    Matrix w0;
    BitMask mask; // all-ones until apply_masks
    std::vector<double> bias;
    std::optional<Adapter> adapter;

    bool prunable() const { return modality != Modality::Interface; }
};

// Student-view weights of one layer:
//   no adapter      -> w0 (.) mask
//   sparse adapter  -> (w0 + b_mat*a_mat) (.) mask
//   dense adapter   -> w0 (.) mask + b_mat*a_mat   (increment unmasked)
Matrix effective_weight(const PrunableLayer& layer);

struct VlmDims {
    std::size_t d_v = 16; // vision input
    std::size_t h_v = 32; // vision hidden
    std::size_t d_q = 8;  // interface output
    std::size_t d_t = 8;  // text input
    std::size_t h_l = 32; // language hidden
    std::size_t n_classes = 8;
};

enum class WeightMode { DenseTeacher, MaskedStudent };

// Per-layer record of one forward pass: the input seen by each layer, its
// post-activation output, and the exact weight matrix used. backward() reads
// these; revision ties the tape to the model state that produced it.
struct BackwardTape {
    WeightMode mode = WeightMode::MaskedStudent;
    std::uint64_t revision = 0;
    std::vector<std::vector<double>> inputs;  // one per layer
    std::vector<std::vector<double>> outputs; // post-activation (raw logits for the head)
    std::vector<Matrix> weights;              // effective weight used per layer
};

struct ForwardResult {
    std::vector<double> logits;
    BackwardTape tape;
};

struct LayerGrad {
    Matrix dw; // d loss / d (weight as used in the forward)
    std::vector<double> dbias;
};

using GradientSet = std::map<std::string, LayerGrad>;

// Fixed five-layer two-modality classifier:
//   a1 = tanh(vision1 * x_v + b)          d_v  -> h_v
//   a2 = tanh(vision2 * a1 + b)           h_v  -> h_v
//   q  = tanh(interface * a2 + b)         h_v  -> d_q   (never pruned)
//   z  = [q ; x_t]                        fused features
//   a3 = tanh(lang1 * z + b)              d_q+d_t -> h_l
//   logits = lang2 * a3 + b               h_l  -> n_classes
class ToyVlm {
  public:
    static constexpr std::size_t kLayerCount = 5;

    // Weights ~ uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) drawn row-major in
    // layer order (vision1, vision2, interface, lang1, lang2); biases zero.
    static ToyVlm random(const VlmDims& dims, std::uint64_t seed);
    static ToyVlm zeros(const VlmDims& dims);

    const VlmDims& dims() const { return dims_; }
    std::uint64_t init_seed() const { return init_seed_; }

    const std::vector<PrunableLayer>& layers() const { return layers_; }
    const PrunableLayer& layer(const std::string& name) const;
    bool has_layer(const std::string& name) const;

    // Names in forward order; prunable excludes the interface layer.
    std::vector<std::string> layer_names() const;
    std::vector<std::string> prunable_layer_names() const;

    // Any mutation invalidates outstanding tapes.
    PrunableLayer& mutable_layer(const std::string& name);
    std::vector<PrunableLayer>& mutable_layers();
    std::uint64_t revision() const { return revision_; }

  private:
    ToyVlm() = default;

    friend ForwardResult forward(const ToyVlm&, std::span<const double>, std::span<const double>,
                                 WeightMode);

    VlmDims dims_;
    std::uint64_t init_seed_ = 0;
    std::vector<PrunableLayer> layers_;
    std::uint64_t revision_ = 0;
};

ForwardResult forward(const ToyVlm& model, std::span<const double> vision_in,
                      std::span<const double> text_in, WeightMode mode);

// Exact reverse-mode gradients for the pass recorded on `tape`.
// Throws StateError if the model changed since the tape was made.
GradientSet backward(const ToyVlm& model, const BackwardTape& tape, std::span<const double> dlogits);

} // namespace svlm
