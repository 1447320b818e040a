#pragma once

#include <cstddef>
#include <string>

#include "svlm/matrix.hpp"

namespace svlm {

// Low-rank increment delta_w = b_mat * a_mat attached to one layer.
// Sparse mode masks the increment with the layer mask everywhere (forward,
// gradients, merge); Dense mode is classic LoRA kept for the comparison runs.
struct Adapter {
    enum class Mode { Sparse, Dense };

    std::string layer_name;
    std::size_t rank = 0;
    Matrix b_mat; // out x rank, zero-initialized so the increment starts at 0
    Matrix a_mat; // rank x in, uniform(-1/sqrt(in), 1/sqrt(in))
    Mode mode = Mode::Sparse;

    Matrix increment() const { return matmul(b_mat, a_mat); }
};

inline const char* to_string(Adapter::Mode m) {
    return m == Adapter::Mode::Sparse ? "sparse" : "dense";
}

} // namespace svlm
