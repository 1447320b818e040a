#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "svlm/model.hpp"
#include "svlm/planner.hpp"
#include "svlm/sparse_lora.hpp"

namespace svlm {

// Shortest exact decimal for a double (round-trips bit-exactly).
std::string format_double(double v);

// Minimal CSV emission; fields are written verbatim (no quoting needed for
// the schemas used here). The header row is always present.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct SparsityRow {
    std::string layer;
    Modality modality = Modality::Vision;
    std::size_t zeros = 0;
    std::size_t total = 0;
    double sparsity = 0.0;
};

// Per-layer exact-zero counts of the effective weights, plus per-modality
// and overall aggregates keyed as "<modality>:*" and "*".
std::vector<SparsityRow> sparsity_rows(const ToyVlm& model);

// schema: layer,modality,zeros,total,sparsity
void write_sparsity_csv(const std::filesystem::path& path, const std::vector<SparsityRow>& rows);

// schema: step,lr,task_loss,distill_loss,total_loss
void write_training_csv(const std::filesystem::path& path, const TrainingReport& report);

// schema: s_v,s_l,metric,accuracy_mean,accuracy_std,seeds
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

// FNV-1a over the raw little-endian bytes of the values, hex string.
std::string checksum_f64(const std::vector<double>& values);

} // namespace svlm
