#pragma once

#include <string>
#include <vector>

#include "svlm/checkpoint.hpp"

namespace svlm {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail; // first offending layer/index on failure
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

// Invariant audit of a loaded checkpoint:
//   finite        all weights, biases and adapter tensors are finite
//   mask_shape    mask dimensions and padding match their tensors
//   mask_nullity  (merged stage only) stored weights are exactly 0 at
//                 masked positions
//   nm_blocks     (N:M provenance only) every aligned block of every
//                 prunable layer mask keeps exactly m-n entries
VerifyReport verify_checkpoint(const LoadedCheckpoint& ckpt);

} // namespace svlm
