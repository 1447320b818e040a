#pragma once

#include <cstdint>
#include <filesystem>

#include "svlm/model.hpp"
#include "svlm/pruning.hpp"

namespace svlm {

// Pipeline stage recorded in a checkpoint. Mask-nullity of the stored
// weights is only an invariant after merging (a pruned checkpoint still
// carries the dense teacher weights under its masks).
enum class CheckpointStage : std::uint8_t { Raw = 0, Pruned = 1, Merged = 2 };

const char* to_string(CheckpointStage s);

// Sparsity pattern the checkpoint claims to satisfy; verify checks it.
struct SparsityProvenance {
    enum class Pattern : std::uint8_t { None = 0, Unstructured = 1, NofM = 2 };
    Pattern pattern = Pattern::None;
    double ratio = 0.0;
    std::uint32_t n = 0;
    std::uint32_t m = 0;

    static SparsityProvenance from_spec(const SparsitySpec& spec);
};

struct CheckpointMeta {
    std::uint32_t version = 1;
    CheckpointStage stage = CheckpointStage::Raw;
    SparsityProvenance sparsity;
    std::uint64_t seed = 0; // RNG provenance of the model build
};

struct LoadedCheckpoint {
    ToyVlm model;
    CheckpointMeta meta;
};

// SVLM1 checkpoint container (see docs/formats.md). All scalars little-
// endian; f64 payloads are raw IEEE-754 bits, so load(save(x)) is
// bit-identical.
void save_checkpoint(const ToyVlm& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

} // namespace svlm
