#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "svlm/adapter.hpp"
#include "svlm/datagen.hpp"
#include "svlm/model.hpp"
#include "svlm/objectives.hpp"
#include "svlm/optim.hpp"

namespace svlm {

struct TrainConfig {
    double lr = 1e-3;
    AdamParams adam; // beta1 0.9, beta2 0.999, eps 1e-8
    double warmup_fraction = 0.10;
    std::size_t epochs = 1;
    std::size_t batch_size = 32;
    double lambda = 0.1; // weight of the task loss; 1-lambda goes to distillation
    std::size_t rank_vision = 4;
    std::size_t rank_language = 8;
    std::size_t rank_interface = 4;
    Adapter::Mode adapter_mode = Adapter::Mode::Sparse;

    enum class Optimizer { Adam, Sgd };
    Optimizer optimizer = Optimizer::Adam;

    std::uint64_t seed = 0;

    void validate() const;
    std::size_t rank_for(Modality m) const;
};

struct AdapterOptState {
    AdamSlot b_slot;
    AdamSlot a_slot;
};

struct OptimizerState {
    std::map<std::string, AdapterOptState> adapters;
    std::size_t step = 0;        // completed updates
    std::size_t total_steps = 0; // warmup horizon; 0 disables warmup

    // Slots sized for every adapter currently attached to the model.
    static OptimizerState for_model(const ToyVlm& model, std::size_t total_steps);
};

// Give every in-scope layer a fresh adapter: a_mat ~ uniform(-1/sqrt(in),
// 1/sqrt(in)) from the config seed (layers in forward order, entries
// row-major), b_mat zero, so the student is unchanged until training moves B.
void attach_adapters(ToyVlm& model, const TrainConfig& cfg, const std::set<Modality>& scope);

// Adapter gradients for one layer given d loss / d effective-weight:
//   sparse: g = dw (.) mask;   dense: g = dw
//   dB = g * A^T,  dA = B^T * g
// Both use the pre-update A and B.
std::pair<Matrix, Matrix> adapter_gradients(const Adapter& adapter, const BitMask& mask,
                                            const Matrix& dw);

// One optimization step over `batch`: student forward, combined objective
// (teacher forward skipped entirely when lambda == 1), backward, adapter
// updates with the warmup-scheduled rate. w0, masks and biases never change.
LossBreakdown train_step(ToyVlm& model, std::span<const Sample> batch, const TrainConfig& cfg,
                         OptimizerState& opt);

// Fold adapters into the stored weights and drop them.
// Sparse adapters: w0 <- (w0 (.) mask) + (B*A (.) mask); the mask still
// holds, and forwards are bit-identical to the pre-merge student.
// Dense adapters: w0 <- (w0 (.) mask) + B*A and the mask is reset to
// all-ones, because the stored weights no longer honor the sparse pattern.
void merge_adapters(ToyVlm& model);

struct StepRecord {
    std::size_t step = 0;
    double lr = 0.0;
    LossBreakdown loss;
};

struct TrainingReport {
    std::vector<StepRecord> steps;
    LossBreakdown final_loss() const;
};

// epochs x batches of train_step over a seeded shuffle (Fisher-Yates from the
// config seed, substream 3, redrawn each epoch). Empty data is a no-op.
TrainingReport train(ToyVlm& model, const SampleSet& data, const TrainConfig& cfg);

// Classification accuracy of the student view (argmax, lowest index wins ties).
double evaluate_accuracy(const ToyVlm& model, const SampleSet& eval);

} // namespace svlm
