#pragma once

#include <map>
#include <string>

#include "svlm/config.hpp"
#include "svlm/datagen.hpp"
#include "svlm/model.hpp"
#include "svlm/pruning.hpp"
#include "svlm/sparse_lora.hpp"

namespace svlm {

// Shared experiment steps behind the CLI subcommands; each piece is a thin,
// deterministic composition of the library calls.

// Fresh model from (dims, seed), pretrained on `train` as the dense baseline.
ToyVlm build_baseline(const VlmDims& dims, std::uint64_t seed, const SampleSet& train,
                      const PretrainConfig& pretrain_cfg);

// Scores the in-scope prunable layers and builds masks per the prune config.
MaskMap plan_masks(const ToyVlm& model, const PruneConfig& prune, const SampleSet& calib);

// plan_masks + apply_masks.
void prune_in_place(ToyVlm& model, const PruneConfig& prune, const SampleSet& calib);

// attach + train + (optionally) merge with the run's adapter scope.
TrainingReport finetune_in_place(ToyVlm& model, const RunConfig& cfg, const SampleSet& train,
                                 bool merge);

struct EvalResult {
    double accuracy = 0.0;
    std::size_t sample_count = 0;
    std::map<std::string, double> sparsity; // per modality plus "overall"
    std::string logit_checksum;             // FNV-1a over all eval logits in order
};

EvalResult evaluate_model(const ToyVlm& model, const SampleSet& eval);

} // namespace svlm
