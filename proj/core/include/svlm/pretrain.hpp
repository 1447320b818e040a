#pragma once

#include <cstdint>

#include "svlm/datagen.hpp"
#include "svlm/model.hpp"
#include "svlm/optim.hpp"

namespace svlm {

// Full-parameter Adam training on the task loss; builds the dense baseline
// that pruning starts from (the stand-in for a pretrained backbone).
struct PretrainConfig {
    double lr = 1e-2;
    AdamParams adam;
    std::size_t epochs = 40;
    std::size_t batch_size = 32;
    // Per-batch random weight dropout on the prunable layers (kept weights
    // rescaled by 1/(1-p)). Trains in the deletion robustness that real
    // pretrained backbones exhibit, so pruning sweeps behave like theirs.
    double weight_dropout = 0.0;
    // Decoupled L2 decay on prunable weights (AdamW style); drives unused
    // weights toward zero, which is what makes magnitude-family pruning cheap
    // on real pretrained models.
    double weight_decay = 0.0;
    // Proximal L1 shrinkage on prunable weights: each unit concentrates on
    // the few inputs it needs, so score-based pruning removes mostly dead
    // weight. Applied after the Adam step as soft-thresholding by lr*l1.
    double l1_penalty = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Updates every weight matrix and bias in place (dense weights; ignores masks
// and adapters). Returns final-epoch mean task loss.
double pretrain(ToyVlm& model, const SampleSet& data, const PretrainConfig& cfg);

} // namespace svlm
